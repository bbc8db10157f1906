"""Burnside-process sampling of Catalan structures through parking functions."""

__version__ = "0.1.0"
