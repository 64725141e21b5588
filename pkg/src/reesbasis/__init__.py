"""Verification workbench for the equational theory of the Rees quotient monoid M(V)."""

__version__ = "0.1.0"
