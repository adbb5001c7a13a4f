"""Batch command-line frontend."""
