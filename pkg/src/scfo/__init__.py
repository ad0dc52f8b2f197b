"""Search and certification of single-cut full-open card protocols."""

__version__ = "0.1.0"
