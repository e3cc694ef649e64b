"""Exact verification toolkit for perverse schobers from Calabi-Yau hypersurfaces."""

__version__ = "0.1.0"
