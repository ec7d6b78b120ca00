"""Equivariant combinatorics and exact homology of partition complexes."""

__version__ = "0.1.0"
