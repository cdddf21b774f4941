"""Global phase portraits of Riccati quadratic systems."""

__version__ = "0.1.0"
