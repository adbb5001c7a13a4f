"""Pedestrian detection evaluation: matching, FPPI curves, LAMR and AP."""
