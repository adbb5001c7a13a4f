"""Error hierarchy and status-line logging shared by all packages."""
