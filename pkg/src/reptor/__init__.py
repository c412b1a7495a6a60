"""Biquotient conditions, Tor over representation rings and K-theory of biquotients."""

__version__ = "0.1.0"
