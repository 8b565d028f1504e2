"""Magneto-spectral height nu(G): the largest smallest eigenvalue of a magnetic Laplacian."""

from .graph import Graph, load_graph
from .potential import MagneticPotential
from .solver import NuEstimate, SolverConfig, nu_estimate

__all__ = ["Graph", "load_graph", "MagneticPotential", "NuEstimate", "SolverConfig", "nu_estimate"]
__version__ = "0.1.0"
