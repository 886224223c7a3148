"""Picard ranks of K3 surfaces from 14-nodal Cayley-Rohn quartics."""

__version__ = "0.3.0"
