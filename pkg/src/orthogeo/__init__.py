"""Orthogeodesic arcs on hyperbolic surfaces, their Poincare series, and exact Euler-calculus linking numbers."""

__version__ = "0.1.0"
