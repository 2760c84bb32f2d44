"""Exact combinatorial models for genus-3 Torelli homology bookkeeping.

The package computes desk-scale shadows of the machinery behind the top
homology of the genus-3 Torelli group: multicurve type censuses, cells of the
complex of cycles, truncated spectral-sequence pages with their explicit
differentials, and the s-class module with its relations.  All arithmetic is
exact (plain integers and fractions).
"""

__version__ = "0.1.0"
