"""Néron component series of elliptic curves and abstract reduction data."""

__version__ = "0.1.0"
