"""Age-friendly pedestrian route planning toolkit."""

__version__ = "0.1.0"
