"""Unit-distance graphs in slices R^n x [0, eps]^k: exact geometry, colouring
certificates, rational 4-chromatic witnesses and numeric construction replays."""

from slicechroma._accel import backend_name
from slicechroma.coloring import chromatic_number, find_odd_cycle, verify_certificate
from slicechroma.geom import ExactPoint, FloatPoint, Simplex, SliceSpec
from slicechroma.rational_slice import pell_solutions, witness_graph
from slicechroma.udg import EXACT, Graph, UnitDistanceGraph, build_udg, graph_stats, tolerance

__version__ = "0.1.0"

__all__ = [
    "EXACT",
    "ExactPoint",
    "FloatPoint",
    "Graph",
    "Simplex",
    "SliceSpec",
    "UnitDistanceGraph",
    "backend_name",
    "build_udg",
    "chromatic_number",
    "find_odd_cycle",
    "graph_stats",
    "pell_solutions",
    "tolerance",
    "verify_certificate",
    "witness_graph",
]
