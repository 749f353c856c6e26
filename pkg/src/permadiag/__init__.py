"""Exact face enumeration for multiple braid arrangements and the two
operadic cellular diagonals of permutahedra."""

__version__ = "0.1.0"
