"""Edge-level and dataset-level corruptions with a magnitude in [0, 1]."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphSet, Rng, build_graph
from .procgen import gen_erdos_renyi

__all__ = [
    "KINDS",
    "PerturbationSpec",
    "perturb_delete",
    "perturb_add",
    "perturb_rewire",
    "perturb_swap",
    "perturb_mix",
    "perturb_set",
]

KINDS = ("delete", "add", "rewire", "swap", "mix")
MAX_ATTEMPTS = 100


@dataclass(frozen=True)
class PerturbationSpec:
    kind: str
    magnitude: float
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown perturbation {self.kind!r}; expected one of {KINDS}")
        _check_magnitude(self.magnitude)


def _check_magnitude(m: float) -> None:
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"magnitude must lie in [0, 1], got {m}")


def _count(m: float, total: float) -> int:
    return int(round(m * total))


def perturb_delete(g: Graph, m: float, rng: Rng) -> Graph:
    """Remove ``round(m |E|)`` edges chosen uniformly without replacement."""
    _check_magnitude(m)
    k = _count(m, g.edge_count)
    if k == 0:
        return g
    drop = rng.choice(g.edge_count, size=k, replace=False)
    keep = np.ones(g.edge_count, dtype=bool)
    keep[drop] = False
    return Graph(g.n, g.edges[keep])


def perturb_add(g: Graph, m: float, rng: Rng) -> Graph:
    """Add ``min(round(m |E|), #non-edges)`` distinct non-edges chosen uniformly."""
    _check_magnitude(m)
    n = g.n
    free = n * (n - 1) // 2 - g.edge_count
    k = min(_count(m, g.edge_count), free)
    if k == 0:
        return g
    present = g.edges[:, 0] * n + g.edges[:, 1]
    if free <= 4 * k or n * n <= 1 << 16:
        iu, ju = np.triu_indices(n, k=1)
        codes = iu * n + ju
        codes = codes[~np.isin(codes, present)]
        new = codes[rng.choice(len(codes), size=k, replace=False)]
    else:
        # rejection sampling keeps memory linear in |E| for large sparse graphs
        taken = set(present.tolist())
        new = []
        while len(new) < k:
            u, v = rng.integers(0, n, size=2)
            if u == v:
                continue
            c = int(min(u, v) * n + max(u, v))
            if c not in taken:
                taken.add(c)
                new.append(c)
        new = np.array(new, dtype=np.int64)
    add = np.stack([new // n, new % n], axis=1)
    return build_graph(n, np.vstack([g.edges, add]))


def perturb_rewire(g: Graph, m: float, rng: Rng) -> Graph:
    """Move one endpoint of ``round(m |E|)`` random edges to a random vertex.

    Proposals that would create a self-loop or duplicate edge are redrawn up to
    100 times, after which that edge is left unchanged.
    """
    _check_magnitude(m)
    k = _count(m, g.edge_count)
    if k == 0:
        return g
    edges = [tuple(e) for e in g.edges.tolist()]
    present = set(edges)
    for i in rng.choice(len(edges), size=k, replace=False):
        u, v = edges[i]
        for _ in range(MAX_ATTEMPTS):
            keep = u if rng.random() < 0.5 else v
            w = int(rng.integers(0, g.n))
            cand = (min(keep, w), max(keep, w))
            if w != keep and cand not in present:
                present.discard((u, v))
                present.add(cand)
                edges[i] = cand
                break
    return build_graph(g.n, edges)


def perturb_swap(g: Graph, m: float, rng: Rng) -> Graph:
    """Rewire ``round(m |E| / 2)`` disjoint edge pairs (u,v),(x,y) into (u,y),(x,v).

    Every vertex keeps its degree. Invalid proposals are redrawn up to 100
    times, then the pair is skipped.
    """
    _check_magnitude(m)
    k = _count(m, g.edge_count / 2)
    if k == 0 or g.edge_count < 2:
        return g
    edges = [tuple(e) for e in g.edges.tolist()]
    present = set(edges)
    ne = len(edges)
    for _ in range(k):
        for _ in range(MAX_ATTEMPTS):
            i, j = rng.choice(ne, size=2, replace=False)
            u, v = edges[i]
            x, y = edges[j]
            if rng.random() < 0.5:
                x, y = y, x
            if len({u, v, x, y}) < 4:
                continue
            a = (min(u, y), max(u, y))
            b = (min(x, v), max(x, v))
            if a in present or b in present:
                continue
            present.difference_update((edges[i], edges[j]))
            present.update((a, b))
            edges[i], edges[j] = a, b
            break
    return build_graph(g.n, edges)


def perturb_mix(s: GraphSet, m: float, rng: Rng) -> GraphSet:
    """Replace ``round(m |s|)`` graphs by Erdos-Renyi graphs of equal size and density."""
    _check_magnitude(m)
    k = _count(m, len(s))
    if k == 0:
        return s
    graphs = list(s.graphs)
    meta = list(s.meta) if s.meta else []
    for pos in np.sort(rng.choice(len(s), size=k, replace=False)):
        g = graphs[pos]
        n = g.n
        density = 2.0 * g.edge_count / (n * (n - 1)) if n > 1 else 0.0
        graphs[pos] = gen_erdos_renyi(n, density, rng.child(int(pos))) if n else g
        if meta:
            meta[pos] = {}
    return GraphSet(tuple(graphs), label=f"{s.label}+mix{m}", seed=s.seed, meta=tuple(meta))


_GRAPH_OPS = {"delete": perturb_delete, "add": perturb_add, "rewire": perturb_rewire, "swap": perturb_swap}


def perturb_set(s: GraphSet, spec: PerturbationSpec) -> GraphSet:
    """Apply ``spec`` to a whole set; graph ``i`` uses stream ``Rng(seed).child(i)``."""
    root = Rng(spec.seed)
    if spec.kind == "mix":
        return perturb_mix(s, spec.magnitude, root)
    op = _GRAPH_OPS[spec.kind]
    graphs = tuple(op(g, spec.magnitude, root.child(i)) for i, g in enumerate(s.graphs))
    return GraphSet(graphs, label=f"{s.label}+{spec.kind}{spec.magnitude}", seed=s.seed, meta=s.meta)
