"""Exact Dijkgraaf-Witten invariants of surgery 3-manifolds for finite groups."""

__version__ = "0.1.0"
