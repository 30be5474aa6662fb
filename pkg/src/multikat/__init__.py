"""Finite symmetric multicategories, their K-theory Gamma-categories, and homotopy certificates."""

__version__ = "0.1.0"
