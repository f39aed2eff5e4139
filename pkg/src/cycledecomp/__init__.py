"""Constructive cycle decompositions of complete bipartite, holed complete and
complete multipartite graphs, with an independent verifier."""

from .core import HostGraph, Packing, Vertex, build_host, classify_leave, leave_of

__all__ = ["HostGraph", "Packing", "Vertex", "build_host", "classify_leave", "leave_of"]
__version__ = "0.1.0"
