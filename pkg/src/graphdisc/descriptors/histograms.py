"""Degree and clustering-coefficient histograms."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..graph import Graph

__all__ = ["degree_row", "local_clustering", "clustering_row", "CLUST_BINS", "DEGREE_CAP"]

CLUST_BINS = 100
DEGREE_CAP = 100_000


def _require_nodes(g: Graph) -> None:
    if g.n == 0:
        raise ValueError("histogram descriptors need graphs with at least one node")


def degree_row(g: Graph, width: int) -> np.ndarray:
    """Probability vector over degrees ``0..width-1``; larger degrees go to the last column."""
    _require_nodes(g)
    deg = np.minimum(g.degrees(), width - 1)
    return np.bincount(deg, minlength=width) / g.n


def local_clustering(g: Graph) -> np.ndarray:
    """``2 T(v) / (deg(v) (deg(v) - 1))``, zero where the degree is below 2."""
    deg = g.degrees().astype(np.float64)
    if g.edge_count == 0:
        return np.zeros(g.n)
    e = g.edges
    a = sp.coo_matrix(
        (np.ones(2 * len(e)), (np.concatenate([e[:, 0], e[:, 1]]), np.concatenate([e[:, 1], e[:, 0]]))),
        shape=(g.n, g.n),
    ).tocsr()
    tri = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() / 2.0
    out = np.zeros(g.n)
    ok = deg >= 2
    out[ok] = 2.0 * tri[ok] / (deg[ok] * (deg[ok] - 1.0))
    return out


def clustering_row(g: Graph) -> np.ndarray:
    _require_nodes(g)
    hist, _ = np.histogram(local_clustering(g), bins=CLUST_BINS, range=(0.0, 1.0))
    return hist / g.n
