"""Finite element verification of the homogenized limit of Poisson's equation
with inhomogeneous Robin conditions in periodically perforated domains."""

__version__ = "0.1.0"
