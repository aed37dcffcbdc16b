"""Structural validity (planar, lobster), WL hashing, uniqueness and novelty."""

from __future__ import annotations

import hashlib
from dataclasses import asdict, dataclass, field

import networkx as nx
import numpy as np

from .graph import Graph, GraphSet

__all__ = ["VALIDITY_KINDS", "VunSummary", "is_planar", "is_tree", "is_lobster", "wl_hash", "vun"]

VALIDITY_KINDS = ("planar", "lobster", "none")


def is_planar(g: Graph) -> bool:
    """Planarity via the edge bound, then the left-right criterion."""
    if g.n >= 3 and g.edge_count > 3 * g.n - 6:
        return False
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges.tolist())
    planar, _ = nx.check_planarity(h)
    return bool(planar)


def is_tree(g: Graph) -> bool:
    return g.n >= 1 and g.edge_count == g.n - 1 and g.is_connected()


def _strip_leaves(alive: np.ndarray, deg: np.ndarray, g: Graph) -> None:
    leaves = np.flatnonzero(alive & (deg == 1))
    alive[leaves] = False
    for v in leaves:
        for w in g.neighbors(v):
            deg[w] -= 1
    deg[leaves] = 0


def is_lobster(g: Graph) -> bool:
    """A tree that becomes a path (or nothing) after removing its leaves twice."""
    if not is_tree(g):
        return False
    alive = np.ones(g.n, dtype=bool)
    deg = g.degrees().copy()
    _strip_leaves(alive, deg, g)
    _strip_leaves(alive, deg, g)
    # what remains of a tree is a tree, so max degree <= 2 means a path
    return bool(np.all(deg[alive] <= 2))


def _h64(data: bytes) -> int:
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")


def wl_hash(g: Graph, iterations: int = 3) -> int:
    """64-bit Weisfeiler-Lehman digest from uniform initial colors."""
    colors = np.zeros(g.n, dtype=np.uint64)
    hist = [np.array([g.n, g.edge_count], dtype=np.uint64).tobytes()]
    for _ in range(iterations):
        new = np.empty(g.n, dtype=np.uint64)
        for v in range(g.n):
            nb = np.sort(colors[g.neighbors(v)])
            new[v] = _h64(colors[v : v + 1].tobytes() + nb.tobytes())
        colors = new
        hist.append(np.sort(colors).tobytes())
    return _h64(b"|".join(hist))


@dataclass(frozen=True)
class VunSummary:
    valid_fraction: float
    unique_fraction: float
    novel_fraction: float
    vun_fraction: float
    valid: tuple[bool, ...] = field(repr=False)
    unique: tuple[bool, ...] = field(repr=False)
    novel: tuple[bool, ...] = field(repr=False)
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def vun(gen: GraphSet, train: GraphSet, validity_kind: str = "none") -> VunSummary:
    """Valid / unique / novel fractions; uniqueness and novelty use WL digests."""
    if validity_kind not in VALIDITY_KINDS:
        raise ValueError(f"unknown validity kind {validity_kind!r}; expected one of {VALIDITY_KINDS}")
    check = {"planar": is_planar, "lobster": is_lobster, "none": lambda g: True}[validity_kind]
    train_digests = {wl_hash(g) for g in train}
    seen: set[int] = set()
    valid, unique, novel = [], [], []
    for g in gen:
        d = wl_hash(g)
        valid.append(bool(check(g)))
        unique.append(d not in seen)
        novel.append(d not in train_digests)
        seen.add(d)
    n = max(len(gen), 1)
    flags = [a and b and c for a, b, c in zip(valid, unique, novel)]
    return VunSummary(
        sum(valid) / n,
        sum(unique) / n,
        sum(novel) / n,
        sum(flags) / n,
        tuple(valid),
        tuple(unique),
        tuple(novel),
        {
            "validity_kind": validity_kind,
            "wl_iterations": 3,
            "note": "WL digests can merge non-isomorphic graphs, so unique and novel fractions are lower bounds",
        },
    )
