"""Exact computations in oriented and ordinary graph complexes."""

from .graphs import (
    CanonicalClass,
    ComplexSpec,
    DirectedGraph,
    admissible,
    betti,
    canonicalize,
    canonicalize_in,
    decode,
    degree,
    encode,
    graph,
    is_connected,
    is_oriented_acyclic,
    operad_degree,
)

__all__ = [
    "CanonicalClass",
    "ComplexSpec",
    "DirectedGraph",
    "admissible",
    "betti",
    "canonicalize",
    "canonicalize_in",
    "decode",
    "degree",
    "encode",
    "graph",
    "is_connected",
    "is_oriented_acyclic",
    "operad_degree",
]

__version__ = "0.1.0"
