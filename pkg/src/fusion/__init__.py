"""Thermal/saliency channel fusion."""
