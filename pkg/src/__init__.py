"""Exact quantizability toolkit for linear Hamiltonian torus actions."""

__version__ = "0.1.0"
