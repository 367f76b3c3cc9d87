"""Finite 2-groups as Cayley tables, their automorphisms, and saturated fusion systems on them."""

__version__ = "0.1.0"
