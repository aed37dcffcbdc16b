"""Classifier-based and kernel-based discrepancies between sets of graphs."""

from __future__ import annotations

__version__ = "0.1.0"

from .graph import Graph, GraphSet, Rng, build_graph, interleaved_split, read_graphset, subsample, write_graphset

__all__ = [
    "__version__",
    "Graph",
    "GraphSet",
    "Rng",
    "build_graph",
    "interleaved_split",
    "subsample",
    "read_graphset",
    "write_graphset",
]
