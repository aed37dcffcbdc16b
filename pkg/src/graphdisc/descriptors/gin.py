"""Embeddings from a randomly initialized graph isomorphism network."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import Graph, Rng

__all__ = ["GinConfig", "gin_weights", "gin_row"]


@dataclass(frozen=True)
class GinConfig:
    layers: int = 3
    hidden_dim: int = 16
    seed: int = 0

    def __post_init__(self):
        if self.layers < 1 or self.hidden_dim < 1:
            raise ValueError("layers and hidden_dim must be at least 1")


def gin_weights(cfg: GinConfig) -> list[tuple[np.ndarray, np.ndarray]]:
    """Per layer ``(W1, W2)`` with entries drawn from N(0, 1/fan_in)."""
    rng = Rng(cfg.seed)
    out = []
    fan_in = 1
    for layer in range(cfg.layers):
        r = rng.child(layer)
        w1 = r.gen.standard_normal((fan_in, cfg.hidden_dim)) / np.sqrt(fan_in)
        w2 = r.gen.standard_normal((cfg.hidden_dim, cfg.hidden_dim)) / np.sqrt(cfg.hidden_dim)
        for w in (w1, w2):
            w.setflags(write=False)
        out.append((w1, w2))
        fan_in = cfg.hidden_dim
    return out


def gin_row(g: Graph, weights) -> np.ndarray:
    """Concatenated per-layer mean-pooled node embeddings (epsilon = 0, no biases)."""
    h = np.ones((g.n, 1))
    pooled = []
    src = np.concatenate([g.edges[:, 0], g.edges[:, 1]])
    dst = np.concatenate([g.edges[:, 1], g.edges[:, 0]])
    for w1, w2 in weights:
        agg = h.copy()
        np.add.at(agg, dst, h[src])
        h = np.maximum(np.maximum(agg @ w1, 0.0) @ w2, 0.0)
        pooled.append(h.mean(axis=0) if g.n else np.zeros(w2.shape[1]))
    return np.concatenate(pooled)
