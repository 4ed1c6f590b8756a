"""Exact polar degree of projective hypersurfaces and its local decomposition."""

__version__ = "0.1.0"
