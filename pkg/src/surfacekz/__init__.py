"""Verification lab for the flat connection on configuration spaces of a
Schottky-uniformized genus-g curve: exact algebra of t_{g,n}, module theory,
Poincare-series numerics, the connection forms, and braid-group holonomy."""

__version__ = "0.1.0"
