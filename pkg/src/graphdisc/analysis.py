"""Correlation, saturation cropping and quantile helpers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

__all__ = ["CorrelationResult", "UndefinedCorrelation", "spearman", "pearson", "correlate", "saturation_crop", "quantiles"]


class UndefinedCorrelation(ValueError):
    """Correlation is undefined, e.g. for a constant input."""


@dataclass(frozen=True)
class CorrelationResult:
    coefficient: float
    n: int
    sign_adjusted: bool = False
    method: str = "spearman"


def _pair(xs, ys) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=np.float64).ravel()
    y = np.asarray(ys, dtype=np.float64).ravel()
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 3:
        raise ValueError("correlation needs at least 3 points")
    return x, y


def pearson(xs, ys) -> float:
    x, y = _pair(xs, ys)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = np.dot(dx, dx)
    syy = np.dot(dy, dy)
    if sxx == 0 or syy == 0:
        raise UndefinedCorrelation("correlation of a constant input is undefined")
    return float(np.clip(np.dot(dx, dy) / np.sqrt(sxx * syy), -1.0, 1.0))


def spearman(xs, ys) -> float:
    """Pearson correlation of mid-ranks."""
    x, y = _pair(xs, ys)
    return pearson(rankdata(x, method="average"), rankdata(y, method="average"))


def correlate(xs, ys, method: str = "spearman", negate: bool = False) -> CorrelationResult:
    if method == "spearman":
        c = spearman(xs, ys)
    elif method == "pearson":
        c = pearson(xs, ys)
    else:
        raise ValueError(f"unknown method {method!r}")
    return CorrelationResult(-c if negate else c, len(np.ravel(xs)), negate, method)


def saturation_crop(magnitudes, pgds, threshold: float = 0.95) -> range:
    """Indices of the prefix below ``threshold`` plus the first saturating point."""
    m = np.asarray(magnitudes)
    p = np.asarray(pgds, dtype=np.float64)
    if len(m) != len(p):
        raise ValueError("magnitudes and values must be aligned")
    for i, v in enumerate(p):
        if v >= threshold:
            return range(0, i + 1)
    return range(0, len(p))


def quantiles(samples, qs) -> np.ndarray:
    """Empirical quantiles with linear interpolation."""
    s = np.asarray(samples, dtype=np.float64).ravel()
    if s.size == 0:
        raise ValueError("quantiles of an empty sample")
    q = np.asarray(qs, dtype=np.float64)
    if np.any((q < 0) | (q > 1)):
        raise ValueError("quantile levels must lie in [0, 1]")
    return np.quantile(s, q, method="linear")
