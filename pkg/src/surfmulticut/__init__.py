"""Exact minimum multicut for graphs embedded on surfaces.

The solver enumerates the possible topologies of a shortest multicut dual
relative to a cut graph through the terminals, draws each topology
optimally with crossing-sequence-constrained shortest paths, and keeps the
best.  Independent oracles (subset brute force, max-flow) verify results
at desk scale.
"""

from .embed import EmbeddedGraph, FaceStructure, trace_faces, dual_graph, maps_isomorphic

__version__ = "0.1.0"
