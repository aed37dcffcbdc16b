"""Graph descriptors: every function maps a GraphSet to a feature matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import GraphSet
from .gin import GinConfig, gin_row, gin_weights
from .histograms import CLUST_BINS, DEGREE_CAP, clustering_row, degree_row, local_clustering
from .orbits import N_ORBITS, node_orbit_counts, orbit_features
from .spectral import (
    SPEC_BINS,
    EigenConvergenceError,
    normalized_laplacian,
    spectral_histogram_row,
    symmetric_eigenvalues,
)

__all__ = [
    "DESCRIPTORS",
    "FeatureMatrix",
    "FeatureContext",
    "GinConfig",
    "EigenConvergenceError",
    "featurize",
    "degree_histogram",
    "clustering_histogram",
    "orbit_counts",
    "spectral_histogram",
    "gin_embedding",
    "symmetric_eigenvalues",
    "normalized_laplacian",
    "local_clustering",
    "node_orbit_counts",
]

DESCRIPTORS = ("orbit4", "orbit5", "deg", "clust", "spec", "gin")


@dataclass(frozen=True)
class FeatureMatrix:
    values: np.ndarray
    descriptor_id: str

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError("feature matrix must be 2-D")
        if not np.all(np.isfinite(v)):
            raise ValueError(f"non-finite features for descriptor {self.descriptor_id}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class FeatureContext:
    """Cross-set layout information shared by every set that will be compared."""

    max_degree: int = 0
    degree_cap: int = DEGREE_CAP
    gin: GinConfig = GinConfig()

    @property
    def degree_width(self) -> int:
        return min(self.degree_cap, self.max_degree) + 1

    @classmethod
    def from_sets(cls, *sets: GraphSet, degree_cap: int = DEGREE_CAP, gin: GinConfig = GinConfig()):
        md = 0
        for s in sets:
            for g in s:
                if g.edge_count:
                    md = max(md, int(g.degrees().max()))
        return cls(max_degree=md, degree_cap=degree_cap, gin=gin)


def _require_nonempty(s: GraphSet) -> None:
    if len(s) == 0:
        raise ValueError("descriptor needs a non-empty graph set")


def degree_histogram(s: GraphSet, cap: int = DEGREE_CAP, context: FeatureContext | None = None) -> FeatureMatrix:
    _require_nonempty(s)
    ctx = context or FeatureContext.from_sets(s, degree_cap=cap)
    w = ctx.degree_width
    return FeatureMatrix(np.stack([degree_row(g, w) for g in s]), "deg")


def clustering_histogram(s: GraphSet) -> FeatureMatrix:
    _require_nonempty(s)
    return FeatureMatrix(np.stack([clustering_row(g) for g in s]), "clust")


def orbit_counts(s: GraphSet, graphlet_size: int) -> FeatureMatrix:
    if graphlet_size not in N_ORBITS:
        raise ValueError(f"graphlet_size must be 4 or 5, got {graphlet_size}")
    return FeatureMatrix(orbit_features(s.graphs, graphlet_size), f"orbit{graphlet_size}")


def spectral_histogram(s: GraphSet) -> FeatureMatrix:
    _require_nonempty(s)
    return FeatureMatrix(np.stack([spectral_histogram_row(g) for g in s]), "spec")


def gin_embedding(s: GraphSet, cfg: GinConfig = GinConfig()) -> FeatureMatrix:
    weights = gin_weights(cfg)
    rows = [gin_row(g, weights) for g in s]
    v = np.stack(rows) if rows else np.zeros((0, cfg.layers * cfg.hidden_dim))
    return FeatureMatrix(v, "gin")


def featurize(s: GraphSet, descriptor_id: str, context: FeatureContext | None = None) -> FeatureMatrix:
    """Dispatch to one descriptor; ``context`` aligns column layouts across sets."""
    if descriptor_id == "deg":
        return degree_histogram(s, context=context)
    if descriptor_id == "clust":
        return clustering_histogram(s)
    if descriptor_id == "orbit4":
        return orbit_counts(s, 4)
    if descriptor_id == "orbit5":
        return orbit_counts(s, 5)
    if descriptor_id == "spec":
        return spectral_histogram(s)
    if descriptor_id == "gin":
        return gin_embedding(s, (context or FeatureContext()).gin)
    raise ValueError(f"unknown descriptor {descriptor_id!r}; expected one of {DESCRIPTORS}")
