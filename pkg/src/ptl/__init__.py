"""Exact-arithmetic toolkit for twists of smooth plane curves: tower-field
arithmetic, sparse polynomial algebra with Groebner bases, projective matrix
groups, cocycle verification, cyclic-algebra norm obstructions, and the
descended equations of a non-trivial Brauer-Severi surface with their
finite-field reductions."""

__version__ = "0.1.0"
