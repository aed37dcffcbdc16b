"""Graphlet orbit counts for graphlets of up to 4 or 5 nodes.

Connected induced subgraphs are enumerated with the ESU scheme (each
connected vertex set is visited exactly once, rooted at its smallest
vertex). Every visited set is classified by the adjacency bitmask of its
vertices in visiting order, through a lookup table derived from the orbit
catalog below, and the orbit of each member node is incremented.
"""

from __future__ import annotations

import itertools
import warnings
from functools import lru_cache

import numpy as np
from numba import njit

from ..graph import Graph

__all__ = ["ORBIT_CATALOG", "N_ORBITS", "orbit_table", "node_orbit_counts", "orbit_features"]

N_ORBITS = {4: 15, 5: 73}
VISIT_WARN = 1e9

# (node count, edges, orbit id of each node) in the standard orbit numbering
ORBIT_CATALOG = (
    (2, [[0,1]], [0,0]),
    (3, [[0,1],[0,2]], [2,1,1]),
    (3, [[0,1],[0,2],[1,2]], [3,3,3]),
    (4, [[0,3],[1,3],[2,3]], [6,6,6,7]),
    (4, [[0,1],[0,3],[1,2]], [5,5,4,4]),
    (4, [[0,3],[1,2],[1,3],[2,3]], [9,10,10,11]),
    (4, [[0,1],[0,3],[1,2],[2,3]], [8,8,8,8]),
    (4, [[0,1],[0,2],[0,3],[1,2],[2,3]], [13,12,13,12]),
    (4, [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]], [14,14,14,14]),
    (5, [[0,4],[1,4],[2,4],[3,4]], [22,22,22,22,23]),
    (5, [[0,4],[1,3],[2,3],[3,4]], [18,19,19,21,20]),
    (5, [[0,1],[0,4],[1,2],[2,3]], [16,17,16,15,15]),
    (5, [[0,4],[1,4],[2,3],[2,4],[3,4]], [31,31,32,32,33]),
    (5, [[0,1],[0,2],[0,4],[1,2],[2,3]], [26,25,26,24,24]),
    (5, [[0,4],[1,2],[1,3],[2,3],[3,4]], [27,29,29,30,28]),
    (5, [[0,1],[1,3],[1,4],[2,3],[2,4]], [35,38,36,37,37]),
    (5, [[0,1],[0,4],[1,2],[2,3],[3,4]], [34,34,34,34,34]),
    (5, [[0,1],[1,2],[1,3],[1,4],[2,3],[2,4]], [39,42,41,40,40]),
    (5, [[0,1],[1,3],[1,4],[2,3],[2,4],[3,4]], [45,47,46,48,48]),
    (5, [[0,1],[0,4],[1,4],[2,3],[2,4],[3,4]], [43,43,43,43,44]),
    (5, [[0,1],[0,3],[0,4],[1,2],[2,3],[3,4]], [53,51,51,53,52]),
    (5, [[0,2],[0,3],[0,4],[1,2],[1,3],[1,4]], [50,50,49,49,49]),
    (5, [[0,4],[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]], [56,57,57,57,58]),
    (5, [[0,3],[0,4],[1,3],[1,4],[2,3],[2,4],[3,4]], [54,54,54,55,55]),
    (5, [[0,1],[0,4],[1,2],[1,3],[1,4],[2,3],[3,4]], [59,61,59,60,60]),
    (5, [[0,2],[0,3],[0,4],[1,2],[1,3],[1,4],[2,4]], [63,63,64,62,64]),
    (5, [[0,1],[0,3],[0,4],[1,3],[1,4],[2,3],[2,4],[3,4]], [66,66,65,67,67]),
    (5, [[0,1],[0,3],[0,4],[1,2],[1,4],[2,3],[2,4],[3,4]], [68,68,68,68,69]),
    (5, [[0,1],[0,3],[0,4],[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]], [70,71,70,71,71]),
    (5, [[0,1],[0,2],[0,3],[0,4],[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]], [72,72,72,72,72]),
)


def _pair_index(k: int) -> dict[tuple[int, int], int]:
    # colex order, so the bits of a k-set are a prefix of those of any larger set
    return {(i, j): j * (j - 1) // 2 + i for j in range(k) for i in range(j)}


def _is_connected_mask(k: int, mask: int, pidx) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        a = stack.pop()
        for b in range(k):
            if b not in seen and mask >> pidx[(min(a, b), max(a, b))] & 1:
                seen.add(b)
                stack.append(b)
    return len(seen) == k


@lru_cache(maxsize=None)
def orbit_table() -> np.ndarray:
    """``table[k, mask, pos]`` = orbit of position ``pos`` in the k-set with adjacency ``mask``.

    Entries are -1 for disconnected masks.
    """
    table = np.full((6, 1 << 10, 5), -1, dtype=np.int16)
    for k in range(2, 6):
        pidx = _pair_index(k)
        catalog = [(set(map(tuple, e)), orb) for n, e, orb in ORBIT_CATALOG if n == k]
        perms = list(itertools.permutations(range(k)))
        for mask in range(1 << len(pidx)):
            if not _is_connected_mask(k, mask, pidx):
                continue
            edges = [p for p, b in pidx.items() if mask >> b & 1]
            found = False
            for cedges, orb in catalog:
                if len(cedges) != len(edges):
                    continue
                for perm in perms:
                    if all((min(perm[a], perm[b]), max(perm[a], perm[b])) in cedges for a, b in edges):
                        table[k, mask, :k] = [orb[perm[i]] for i in range(k)]
                        found = True
                        break
                if found:
                    break
            if not found:
                raise AssertionError(f"graphlet with k={k}, mask={mask} missing from catalog")
    return table


@njit(cache=True)
def _esu_counts(adj, indptr, indices, kmax, table, n_orbits):
    n = adj.shape[0]
    counts = np.zeros((n, n_orbits), dtype=np.int64)
    sub = np.empty(5, dtype=np.int64)
    masks = np.zeros(6, dtype=np.int64)
    ext = np.empty((6, n), dtype=np.int64)
    cnt = np.zeros(6, dtype=np.int64)
    for v in range(n):
        sub[0] = v
        masks[1] = 0
        c = 0
        for p in range(indptr[v], indptr[v + 1]):
            u = indices[p]
            if u > v:
                ext[1, c] = u
                c += 1
        cnt[1] = c
        size = 1
        while size > 0:
            if cnt[size] == 0:
                size -= 1
                continue
            cnt[size] -= 1
            w = ext[size, cnt[size]]
            # adjacency mask after appending w at position `size`
            m = masks[size]
            for i in range(size):
                if adj[sub[i], w]:
                    m |= 1 << (size * (size - 1) // 2 + i)
            sub[size] = w
            ns = size + 1
            masks[ns] = m
            for i in range(ns):
                o = table[ns, m, i]
                counts[sub[i], o] += 1
            if ns == kmax:
                continue
            # ext' = remaining ext plus exclusive neighbours of w above v
            c = cnt[size]
            for i in range(c):
                ext[ns, i] = ext[size, i]
            for p in range(indptr[w], indptr[w + 1]):
                u = indices[p]
                if u <= v:
                    continue
                excl = True
                for i in range(size):
                    s = sub[i]
                    if s == u or adj[s, u]:
                        excl = False
                        break
                if excl:
                    ext[ns, c] = u
                    c += 1
            cnt[ns] = c
            size = ns
    return counts


def estimated_visits(g: Graph, graphlet_size: int) -> float:
    d = g.degrees().astype(np.float64)
    return float(np.sum(d ** (graphlet_size - 1)))


def node_orbit_counts(g: Graph, graphlet_size: int) -> np.ndarray:
    """Per-node orbit counts, shape ``(n, 15)`` or ``(n, 73)``."""
    if graphlet_size not in N_ORBITS:
        raise ValueError(f"graphlet_size must be 4 or 5, got {graphlet_size}")
    est = estimated_visits(g, graphlet_size)
    if est > VISIT_WARN:
        warnings.warn(
            f"orbit counting may visit ~{est:.2g} subgraphs on a graph with {g.n} nodes",
            RuntimeWarning,
            stacklevel=2,
        )
    adj = g.adjacency_matrix(dtype=np.bool_)
    return _esu_counts(adj, g.indptr, g.indices, graphlet_size, orbit_table(), N_ORBITS[graphlet_size])


def orbit_features(graphs, graphlet_size: int) -> np.ndarray:
    """Per-graph mean over nodes of the orbit-count vectors."""
    out = np.zeros((len(graphs), N_ORBITS[graphlet_size]))
    for r, g in enumerate(graphs):
        if g.n:
            out[r] = node_orbit_counts(g, graphlet_size).mean(axis=0)
    return out
