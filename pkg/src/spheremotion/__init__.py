"""Exact tools for combinatorial surface maps, periodic car motions,
comotions, and diagrams over relative group presentations."""

__version__ = "0.1.0"
