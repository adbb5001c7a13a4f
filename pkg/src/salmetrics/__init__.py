"""Saliency-map evaluation: F-measure and mean absolute error."""
