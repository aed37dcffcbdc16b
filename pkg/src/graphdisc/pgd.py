"""PolyGraph Discrepancy: descriptor selection by cross-validation, held-out evaluation."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .descriptors import DESCRIPTORS, FeatureContext, GinConfig, featurize
from .discriminator import (
    LogisticDiscriminator,
    informedness,
    js_distance,
    js_loglik,
    max_informedness_threshold,
)
from .graph import GraphSet, Rng

__all__ = [
    "MODES",
    "FoldSplit",
    "Subscore",
    "PgdReport",
    "IntervalReport",
    "stratified_folds",
    "estimate_divergence",
    "train_test_divergence",
    "polygraph_discrepancy",
    "pgd_interval",
    "compute_features",
]

MODES = ("jsd", "tv")
MIN_PER_SET = 8


@dataclass(frozen=True)
class FoldSplit:
    train: np.ndarray
    val: np.ndarray


@dataclass(frozen=True)
class Subscore:
    cv_metric: float
    test_metric: float
    test_metric_raw: float
    fold_metrics: tuple[float, ...] = ()


@dataclass(frozen=True)
class PgdReport:
    mode: str
    subscores: dict[str, Subscore]
    selected_descriptor: str
    final_pgd: float
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class IntervalReport:
    mean: float
    std: float
    values: tuple[float, ...]
    reports: tuple[PgdReport, ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return asdict(self)


def stratified_folds(y, k: int, rng: Rng) -> list[FoldSplit]:
    """Shuffle each class with ``rng`` and deal its indices round-robin into ``k`` folds."""
    y = np.asarray(y)
    fold_of = np.empty(len(y), dtype=np.int64)
    for cls in (0, 1):
        idx = np.flatnonzero(y == cls)
        if len(idx) < k:
            raise ValueError(f"class {cls} has {len(idx)} samples, fewer than {k} folds")
        idx = idx[rng.permutation(len(idx))]
        fold_of[idx] = np.arange(len(idx)) % k
    return [FoldSplit(np.flatnonzero(fold_of != f), np.flatnonzero(fold_of == f)) for f in range(k)]


def _divergence(train_x, train_y, val_x, val_y, mode, discriminator) -> float:
    model = discriminator.fit(train_x, train_y)
    pv = model.predict_proba(val_x)
    if mode == "jsd":
        return js_distance(js_loglik(pv, val_y))
    if mode == "tv":
        gamma = max_informedness_threshold(model.predict_proba(train_x), train_y)
        return informedness(pv, val_y, gamma)
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def estimate_divergence(train_x, train_y, val_x, val_y, mode: str = "jsd", discriminator=None) -> float:
    """Fit on ``train``, score ``val``; TV values are clamped at 0."""
    disc = discriminator or LogisticDiscriminator()
    return max(_divergence(train_x, train_y, val_x, val_y, mode, disc), 0.0)


def _stack(fr: np.ndarray, fg: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.vstack([fr, fg]), np.concatenate([np.zeros(len(fr), np.int64), np.ones(len(fg), np.int64)])


def _divergence_from_features(fr, fg, mode, k, seed, discriminator) -> Subscore:
    if len(fr) < MIN_PER_SET or len(fg) < MIN_PER_SET:
        raise ValueError(f"need at least {MIN_PER_SET} graphs per set, got {len(fr)} and {len(fg)}")
    x_fit, y_fit = _stack(fr[0::2], fg[0::2])
    x_test, y_test = _stack(fr[1::2], fg[1::2])
    folds = stratified_folds(y_fit, k, Rng(seed))
    fold_vals = tuple(
        max(_divergence(x_fit[f.train], y_fit[f.train], x_fit[f.val], y_fit[f.val], mode, discriminator), 0.0)
        for f in folds
    )
    raw = _divergence(x_fit, y_fit, x_test, y_test, mode, discriminator)
    return Subscore(float(np.mean(fold_vals)), max(raw, 0.0), raw, fold_vals)


def compute_features(ref: GraphSet, gen: GraphSet, descriptor_id: str, gin: GinConfig = GinConfig()):
    """Features of both sets with a shared column layout."""
    ctx = FeatureContext.from_sets(ref, gen, gin=gin)
    return featurize(ref, descriptor_id, ctx).values, featurize(gen, descriptor_id, ctx).values


def train_test_divergence(
    ref: GraphSet,
    gen: GraphSet,
    descriptor_id: str,
    mode: str = "jsd",
    k: int = 4,
    seed: int = 0,
    discriminator=None,
    gin: GinConfig = GinConfig(),
) -> Subscore:
    """Cross-validated and held-out metric for one descriptor.

    Both sets are split interleaved into fit (even indices) and test (odd
    indices) halves; the CV metric averages ``k`` stratified folds of the
    fit half and the test metric trains on the whole fit half.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    if len(ref) < MIN_PER_SET or len(gen) < MIN_PER_SET:
        raise ValueError(f"need at least {MIN_PER_SET} graphs per set, got {len(ref)} and {len(gen)}")
    fr, fg = compute_features(ref, gen, descriptor_id, gin)
    return _divergence_from_features(fr, fg, mode, k, seed, discriminator or LogisticDiscriminator())


def _select(subscores: dict[str, Subscore]) -> str:
    order = sorted(subscores, key=lambda d: DESCRIPTORS.index(d) if d in DESCRIPTORS else len(DESCRIPTORS))
    best = order[0]
    for d in order[1:]:
        if subscores[d].cv_metric > subscores[best].cv_metric:
            best = d
    return best


def _report_from_features(feats, mode, k, seed, disc, threads, meta) -> PgdReport:
    ids = list(feats)

    def run(d):
        return _divergence_from_features(feats[d][0], feats[d][1], mode, k, seed, disc)

    if threads > 1 and len(ids) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(run, ids))
    else:
        results = [run(d) for d in ids]
    subs = dict(zip(ids, results))
    best = _select(subs)
    return PgdReport(mode, subs, best, subs[best].test_metric, meta)


def _check_ids(descriptor_ids) -> list[str]:
    ids = list(descriptor_ids)
    if not ids:
        raise ValueError("need at least one descriptor")
    for d in ids:
        if d not in DESCRIPTORS:
            raise ValueError(f"unknown descriptor {d!r}; expected one of {DESCRIPTORS}")
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate descriptors")
    return ids


def _metadata(ref, gen, mode, k, seed, disc, gin, **extra) -> dict:
    return {
        "seed": seed,
        "folds": k,
        "mode": mode,
        "ref_size": len(ref),
        "gen_size": len(gen),
        "discriminator": getattr(disc, "name", type(disc).__name__),
        "gin": asdict(gin),
        "orbit_features": "per-node mean",
        **extra,
    }


def polygraph_discrepancy(
    ref: GraphSet,
    gen: GraphSet,
    descriptor_ids=DESCRIPTORS,
    mode: str = "jsd",
    seed: int = 0,
    k: int = 4,
    discriminator=None,
    gin: GinConfig = GinConfig(),
    threads: int = 1,
) -> PgdReport:
    """Per-descriptor subscores, CV-selected descriptor and its held-out metric."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    ids = _check_ids(descriptor_ids)
    if len(ref) < MIN_PER_SET or len(gen) < MIN_PER_SET:
        raise ValueError(f"need at least {MIN_PER_SET} graphs per set, got {len(ref)} and {len(gen)}")
    disc = discriminator or LogisticDiscriminator()
    feats = {d: compute_features(ref, gen, d, gin) for d in ids}
    return _report_from_features(feats, mode, k, seed, disc, threads, _metadata(ref, gen, mode, k, seed, disc, gin))


def pgd_interval(
    ref: GraphSet,
    gen: GraphSet,
    descriptor_ids=DESCRIPTORS,
    mode: str = "jsd",
    repeats: int = 10,
    fraction: float = 0.5,
    seed: int = 0,
    k: int = 4,
    discriminator=None,
    gin: GinConfig = GinConfig(),
    threads: int = 1,
) -> IntervalReport:
    """PGD over ``repeats`` paired subsamples drawn without replacement.

    Subsample ``r`` uses stream ``Rng(seed).child(r)``; indices are kept in
    their original order so ``fraction=1`` reproduces the full-set PGD.
    Features are computed once on the full sets.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must lie in (0, 1]")
    if repeats < 1:
        raise ValueError("repeats must be positive")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    ids = _check_ids(descriptor_ids)
    disc = discriminator or LogisticDiscriminator()
    full = {d: compute_features(ref, gen, d, gin) for d in ids}
    nr = int(round(fraction * len(ref)))
    ng = int(round(fraction * len(gen)))
    root = Rng(seed)
    reports = []
    for r in range(repeats):
        rng = root.child(r)
        ir = np.sort(rng.choice(len(ref), size=nr, replace=False))
        ig = np.sort(rng.choice(len(gen), size=ng, replace=False))
        feats = {d: (fr[ir], fg[ig]) for d, (fr, fg) in full.items()}
        meta = _metadata(ref, gen, mode, k, seed, disc, gin, repeat=r, subsample_sizes=[nr, ng])
        reports.append(_report_from_features(feats, mode, k, seed, disc, threads, meta))
    vals = np.array([rep.final_pgd for rep in reports])
    std = float(vals.std(ddof=1)) if repeats > 1 else 0.0
    return IntervalReport(float(vals.mean()), std, tuple(float(v) for v in vals), tuple(reports))
