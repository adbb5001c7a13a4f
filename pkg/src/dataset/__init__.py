"""KAIST dataset indexing, annotation parsing and sampling protocol."""
