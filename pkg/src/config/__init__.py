"""Runtime settings read from THERMSAL_* environment variables."""
