"""Equilibria and relative equilibria of symmetry-broken Hamiltonian systems."""

__version__ = "0.1.0"
