"""Finite-field list-recovery laboratory."""
from .gf import GF, Field, field_new

__all__ = ["GF", "Field", "field_new"]
__version__ = "0.1.0"
