"""Exact classification of symplectic Heegaard splittings."""

__version__ = "0.1.0"
