"""thermsal source package."""
