"""Deterministic figure rendering for grmsim CSV artifacts."""

__version__ = "0.1.0"

from .recipes import FigureRecipe, SchemaError, load_table, render
