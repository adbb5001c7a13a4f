"""Raster types, image file I/O and resampling."""
