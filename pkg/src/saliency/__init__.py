"""Static saliency generation and saliency-map containers."""
