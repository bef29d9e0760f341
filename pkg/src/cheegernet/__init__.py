"""Collar geometry, isoperimetric ratios, and coarse net graphs for
pants-decomposed hyperbolic surfaces."""

from . import families, graphtools, hypmath, isoperimetry, netgraph, surface

__version__ = "0.1.0"

__all__ = [
    "families",
    "graphtools",
    "hypmath",
    "isoperimetry",
    "netgraph",
    "surface",
    "__version__",
]
