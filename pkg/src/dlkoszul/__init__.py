"""Mod-2 Steenrod and Dyer-Lashof calculus: Steinberg functors, Koszul and bar
complexes for derived indecomposables, and two delooping spectral sequences."""

__version__ = "0.1.0"
