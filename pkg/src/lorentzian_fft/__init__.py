"""Lattice Klein-Gordon theory as an algebraic and a functorial QFT."""

__all__ = ["cli", "domain", "schemas"]
__version__ = "0.1.0"
