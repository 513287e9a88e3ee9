"""Quantum-vacuum radiation from a collapsing dielectric bubble."""

__version__ = "0.1.0"
