"""Procedural graph generators: Delaunay planar, SBM, lobster and Erdos-Renyi."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .delaunay import DegenerateInput, delaunay, edges_from_triangles
from .graph import Graph, GraphSet, Rng, build_graph

__all__ = [
    "PlanarParams",
    "SbmParams",
    "LobsterParams",
    "gen_planar",
    "gen_sbm",
    "gen_lobster",
    "gen_erdos_renyi",
    "gen_dataset",
    "KINDS",
]

_MAX_RESAMPLES = 1000


@dataclass(frozen=True)
class PlanarParams:
    node_count: int = 64

    def __post_init__(self):
        if self.node_count < 3:
            raise ValueError("node_count must be at least 3")


@dataclass(frozen=True)
class SbmParams:
    communities_min: int = 2
    communities_max: int = 5
    nodes_per_community_min: int = 20
    nodes_per_community_max: int = 40
    p_intra: float = 0.3
    p_inter: float = 0.005

    def __post_init__(self):
        if not 0 <= self.p_inter <= self.p_intra <= 1:
            raise ValueError("need 0 <= p_inter <= p_intra <= 1")
        if not 1 <= self.communities_min <= self.communities_max:
            raise ValueError("invalid community count range")
        if not 1 <= self.nodes_per_community_min <= self.nodes_per_community_max:
            raise ValueError("invalid community size range")


@dataclass(frozen=True)
class LobsterParams:
    expected_backbone_nodes: int = 80
    p1: float = 0.7
    p2: float = 0.7

    def __post_init__(self):
        if not (0 <= self.p1 < 1 and 0 <= self.p2 < 1):
            raise ValueError("attachment probabilities must lie in [0, 1)")
        if self.expected_backbone_nodes < 0:
            raise ValueError("expected_backbone_nodes must be non-negative")


def gen_planar(p: PlanarParams, rng: Rng) -> Graph:
    """Delaunay graph of ``p.node_count`` uniform points in the unit square.

    Point sets that trip the predicate guard are redrawn from the same stream.
    """
    for _ in range(_MAX_RESAMPLES):
        pts = rng.random((p.node_count, 2))
        try:
            tris = delaunay(pts, strict=True)
        except DegenerateInput:
            continue
        return build_graph(p.node_count, edges_from_triangles(tris))
    raise RuntimeError("could not draw a non-degenerate point set")


def _pairs_with_prob(rows: np.ndarray, cols: np.ndarray, prob: float, rng: Rng) -> np.ndarray:
    keep = rng.random(len(rows)) < prob
    return np.stack([rows[keep], cols[keep]], axis=1)


def sbm_with_blocks(p: SbmParams, rng: Rng) -> tuple[Graph, np.ndarray]:
    """Sample an SBM graph and return it with its block assignment."""
    k = int(rng.integers(p.communities_min, p.communities_max + 1))
    sizes = rng.integers(p.nodes_per_community_min, p.nodes_per_community_max + 1, size=k)
    blocks = np.repeat(np.arange(k), sizes)
    n = int(sizes.sum())
    iu, ju = np.triu_indices(n, k=1)
    prob = np.where(blocks[iu] == blocks[ju], p.p_intra, p.p_inter)
    keep = rng.random(len(iu)) < prob
    g = build_graph(n, np.stack([iu[keep], ju[keep]], axis=1))
    return g, blocks


def gen_sbm(p: SbmParams, rng: Rng) -> Graph:
    return sbm_with_blocks(p, rng)[0]


def gen_lobster(p: LobsterParams, rng: Rng) -> Graph:
    """Random lobster: a path backbone with two levels of geometric attachments."""
    while True:
        length = int(2 * rng.random() * p.expected_backbone_nodes + 0.5)
        edges = [(i, i + 1) for i in range(length - 1)]
        n = length
        for v in range(length):
            while rng.random() < p.p1:
                leaf = n
                n += 1
                edges.append((v, leaf))
                while rng.random() < p.p2:
                    edges.append((leaf, n))
                    n += 1
        if n >= 2:
            return build_graph(n, edges)


def gen_erdos_renyi(n: int, p: float, rng: Rng) -> Graph:
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    iu, ju = np.triu_indices(n, k=1)
    return build_graph(n, _pairs_with_prob(iu, ju, p, rng))


KINDS = ("planar", "sbm", "lobster", "erdos_renyi")


def gen_dataset(kind: str, count: int, seed: int, er_n: int = 64, er_p: float = 0.1) -> GraphSet:
    """Generate ``count`` graphs, graph ``i`` drawn from stream ``child(i)``."""
    if kind == "er":
        kind = "erdos_renyi"
    if kind not in KINDS:
        raise ValueError(f"unknown dataset kind {kind!r}; expected one of {KINDS}")
    if count < 0:
        raise ValueError("count must be non-negative")
    root = Rng(seed)
    graphs, meta = [], []
    for i in range(count):
        r = root.child(i)
        if kind == "planar":
            graphs.append(gen_planar(PlanarParams(), r))
        elif kind == "sbm":
            g, blocks = sbm_with_blocks(SbmParams(), r)
            graphs.append(g)
            meta.append({"blocks": blocks.tolist()})
        elif kind == "lobster":
            graphs.append(gen_lobster(LobsterParams(), r))
        else:
            graphs.append(gen_erdos_renyi(er_n, er_p, r))
    return GraphSet(tuple(graphs), label=kind, seed=seed, meta=tuple(meta))
