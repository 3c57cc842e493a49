"""Offset hypersurfaces, ED degrees, offset discriminants and persistence of real varieties."""

__version__ = "0.1.0"
