"""Polynomial H-infinity energy functions for quadratic control-affine systems."""

__version__ = "0.1.0"
