"""Homology, cyclic homology and K-theory of Steinberg and Exel-Pardo algebras."""

__version__ = "0.1.0"
