"""Graph containers, seeded random streams, splits and JSON Lines I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Graph",
    "GraphSet",
    "Rng",
    "build_graph",
    "interleaved_split",
    "subsample",
    "read_graphset",
    "write_graphset",
    "GraphFormatError",
]


class GraphFormatError(ValueError):
    """Raised for malformed graph records; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Graph:
    """Immutable undirected simple graph.

    Edges are stored canonically as an ``(m, 2)`` int array with ``u < v``,
    sorted lexicographically. Adjacency is kept in CSR form (``indptr``,
    ``indices``) with sorted neighbor lists.
    """

    __slots__ = ("_n", "_edges", "_indptr", "_indices", "_hash")

    def __init__(self, n: int, edges: np.ndarray):
        # trusted constructor; use build_graph for validation
        self._n = int(n)
        self._edges = _readonly(np.ascontiguousarray(edges, dtype=np.int64).reshape(-1, 2))
        src = np.concatenate([self._edges[:, 0], self._edges[:, 1]])
        dst = np.concatenate([self._edges[:, 1], self._edges[:, 0]])
        order = np.lexsort((dst, src))
        counts = np.bincount(src, minlength=self._n) if self._n else np.zeros(0, np.int64)
        indptr = np.zeros(self._n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        self._indptr = _readonly(indptr)
        self._indices = _readonly(dst[order].astype(np.int64))
        self._hash: int | None = None

    @property
    def node_count(self) -> int:
        return self._n

    @property
    def n(self) -> int:
        return self._n

    @property
    def edges(self) -> np.ndarray:
        return self._edges

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    def neighbors(self, v: int) -> np.ndarray:
        return self._indices[self._indptr[v] : self._indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self._indptr)

    def adjacency_lists(self) -> list[list[int]]:
        return [self.neighbors(v).tolist() for v in range(self._n)]

    def adjacency_matrix(self, dtype=np.float64) -> np.ndarray:
        a = np.zeros((self._n, self._n), dtype=dtype)
        if len(self._edges):
            a[self._edges[:, 0], self._edges[:, 1]] = 1
            a[self._edges[:, 1], self._edges[:, 0]] = 1
        return a

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self._edges}

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def is_connected(self) -> bool:
        if self._n <= 1:
            return True
        seen = np.zeros(self._n, dtype=bool)
        seen[0] = True
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.neighbors(v):
                if not seen[w]:
                    seen[w] = True
                    stack.append(int(w))
        return bool(seen.all())

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Return the graph with node ``v`` renamed to ``perm[v]``."""
        perm = np.asarray(perm, dtype=np.int64)
        return build_graph(self._n, perm[self._edges])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._edges, other._edges)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._n, self._edges.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={len(self._edges)})"

    def to_record(self) -> dict[str, Any]:
        return {"n": self._n, "edges": self._edges.tolist()}


def build_graph(n: int, edge_list: Iterable[Sequence[int]] | np.ndarray) -> Graph:
    """Validate and canonicalize an edge list into a :class:`Graph`.

    Pairs are sorted so that ``u < v`` and duplicates (in either orientation)
    are merged. Self-loops and out-of-range endpoints raise ``ValueError``.
    """
    n = int(n)
    if n < 0:
        raise ValueError(f"node count must be non-negative, got {n}")
    e = np.asarray(edge_list, dtype=np.int64)
    if e.size == 0:
        return Graph(n, np.zeros((0, 2), dtype=np.int64))
    if e.ndim != 2 or e.shape[1] != 2:
        raise ValueError("edge list must consist of pairs")
    if e.min() < 0 or e.max() >= n:
        raise ValueError(f"edge endpoint out of range for n={n}")
    if np.any(e[:, 0] == e[:, 1]):
        raise ValueError("self-loops are not allowed")
    e = np.sort(e, axis=1)
    e = np.unique(e, axis=0)
    return Graph(n, e)


@dataclass(frozen=True)
class GraphSet:
    """Ordered multiset of graphs with provenance.

    ``meta`` optionally holds one JSON-serializable dict per graph (e.g. SBM
    block assignments); it is empty when no per-graph metadata exists.
    """

    graphs: tuple[Graph, ...]
    label: str = ""
    seed: int | None = None
    meta: tuple[dict, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "graphs", tuple(self.graphs))
        object.__setattr__(self, "meta", tuple(self.meta))
        if self.meta and len(self.meta) != len(self.graphs):
            raise ValueError("meta must be empty or have one entry per graph")

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self) -> Iterator[Graph]:
        return iter(self.graphs)

    def __getitem__(self, i):
        return self.graphs[i]

    def take(self, indices: Sequence[int], label: str | None = None) -> GraphSet:
        idx = [int(i) for i in indices]
        meta = tuple(self.meta[i] for i in idx) if self.meta else ()
        return GraphSet(
            tuple(self.graphs[i] for i in idx),
            label=self.label if label is None else label,
            seed=self.seed,
            meta=meta,
        )


class Rng:
    """Seeded random stream with reproducible child streams.

    Streams are addressed by ``(seed, path)``; ``child(i, j)`` derives an
    independent stream whose state depends only on the seed and the full
    path, never on how much the parent has been consumed. Backed by numpy's
    ``SeedSequence`` spawn keys and the counter-based Philox generator.
    """

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.path = tuple(int(p) for p in path)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.path)
        self.gen = np.random.Generator(np.random.Philox(ss))

    def child(self, *ids: int) -> Rng:
        return Rng(self.seed, self.path + tuple(ids))

    # thin conveniences over numpy's Generator
    def random(self, size=None):
        return self.gen.random(size)

    def integers(self, low, high=None, size=None):
        return self.gen.integers(low, high, size=size)

    def choice(self, a, size=None, replace=True):
        return self.gen.choice(a, size=size, replace=replace)

    def permutation(self, x):
        return self.gen.permutation(x)

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed}, path={self.path})"


def interleaved_split(s: GraphSet) -> tuple[GraphSet, GraphSet]:
    """Split into even-index and odd-index halves (``s[0::2]``, ``s[1::2]``)."""
    if len(s) < 2:
        raise ValueError(f"need at least 2 graphs to split, got {len(s)}")
    n = len(s)
    return s.take(range(0, n, 2)), s.take(range(1, n, 2))


def subsample(s: GraphSet, k: int, with_replacement: bool, rng: Rng) -> GraphSet:
    """Draw ``k`` graphs from ``s`` uniformly at random."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if not with_replacement and k > len(s):
        raise ValueError(f"cannot draw {k} graphs without replacement from {len(s)}")
    if len(s) == 0 and k > 0:
        raise ValueError("cannot subsample from an empty set")
    if with_replacement:
        idx = rng.integers(0, len(s), size=k)
    else:
        idx = rng.choice(len(s), size=k, replace=False)
    return s.take(idx)


def _parse_record(obj: Any, lineno: int) -> tuple[Graph, dict | None]:
    if not isinstance(obj, dict):
        raise GraphFormatError("record must be a JSON object", lineno)
    if "n" not in obj or "edges" not in obj:
        raise GraphFormatError("record needs keys 'n' and 'edges'", lineno)
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise GraphFormatError("'n' must be an integer", lineno)
    edges = obj["edges"]
    if not isinstance(edges, list) or not all(
        isinstance(p, list) and len(p) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in p)
        for p in edges
    ):
        raise GraphFormatError("'edges' must be a list of integer pairs", lineno)
    try:
        g = build_graph(n, edges)
    except ValueError as exc:
        raise GraphFormatError(str(exc), lineno) from None
    meta = obj.get("meta")
    if meta is not None and not isinstance(meta, dict):
        raise GraphFormatError("'meta' must be an object", lineno)
    return g, meta


def read_graphset(path: str | Path, format: str = "jsonl", label: str | None = None) -> GraphSet:
    """Read a JSON Lines graph file (one ``{"n": .., "edges": [[u, v], ..]}`` per line).

    Blank lines are skipped. An optional ``meta`` object per record is kept.
    """
    if format != "jsonl":
        raise ValueError(f"unsupported graph format {format!r}")
    graphs, metas = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise GraphFormatError(f"invalid JSON ({exc.msg})", lineno) from None
            g, meta = _parse_record(obj, lineno)
            graphs.append(g)
            metas.append(meta)
    has_meta = any(m is not None for m in metas)
    return GraphSet(
        tuple(graphs),
        label=str(path) if label is None else label,
        meta=tuple(m or {} for m in metas) if has_meta else (),
    )


def graph_to_line(g: Graph, meta: dict | None = None) -> str:
    rec = g.to_record()
    if meta:
        rec["meta"] = meta
    return json.dumps(rec, separators=(",", ":"))


def write_graphset(s: GraphSet, path: str | Path, format: str = "jsonl") -> None:
    if format != "jsonl":
        raise ValueError(f"unsupported graph format {format!r}")
    with open(path, "w") as fh:
        for i, g in enumerate(s.graphs):
            fh.write(graph_to_line(g, s.meta[i] if s.meta else None))
            fh.write("\n")
