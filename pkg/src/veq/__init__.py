"""veq: exact equation systems, varieties, and general solutions at desk scale."""

__version__ = "0.1.0"
