"""Hypergeometric summation identities and univalence sufficiency criteria."""

__version__ = "0.1.0"
