"""Probabilistic discriminators and the variational JS / TV objectives they feed."""

from __future__ import annotations

import csv
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import numpy as np

__all__ = [
    "PROB_CLAMP",
    "LogisticModel",
    "ConstantModel",
    "ThresholdedClassifier",
    "Discriminator",
    "LogisticDiscriminator",
    "ExternalDiscriminator",
    "fit_logistic",
    "predict_proba",
    "js_loglik",
    "js_distance",
    "max_informedness_threshold",
    "informedness",
]

PROB_CLAMP = 1e-6
GRAD_TOL = 1e-8
MAX_NEWTON = 100


def _check_labels(y) -> np.ndarray:
    y = np.asarray(y).ravel()
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0 or 1")
    y = y.astype(np.int64)
    if y.min(initial=1) == y.max(initial=0) or len(y) == 0:
        raise ValueError("both classes must be present")
    return y


def _check_features(X) -> np.ndarray:
    X = np.asarray(getattr(X, "values", X), dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("features must be a 2-D array")
    if not np.all(np.isfinite(X)):
        raise ValueError("features contain non-finite values")
    return X


def _clamp(p: np.ndarray) -> np.ndarray:
    return np.clip(p, PROB_CLAMP, 1.0 - PROB_CLAMP)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass(frozen=True)
class LogisticModel:
    """Standardization stats, kept columns, weights and intercept."""

    n_features: int
    kept_columns: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    weights: np.ndarray
    intercept: float
    lam: float
    iterations: int = 0

    def decision(self, X) -> np.ndarray:
        X = _check_features(X)
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        z = (X[:, self.kept_columns] - self.mean) / self.std
        return z @ self.weights + self.intercept

    def predict_proba(self, X) -> np.ndarray:
        return _clamp(_sigmoid(self.decision(X)))


@dataclass(frozen=True)
class ConstantModel:
    """Predicts 0.5 everywhere; used when no informative column exists."""

    n_features: int

    def predict_proba(self, X) -> np.ndarray:
        X = _check_features(X)
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        return np.full(X.shape[0], 0.5)


@dataclass(frozen=True)
class ThresholdedClassifier:
    model: LogisticModel | ConstantModel
    gamma: float

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")

    def predict(self, X) -> np.ndarray:
        return (self.model.predict_proba(X) > self.gamma).astype(np.int64)


def _penalized_nll(z1, y, beta, lam):
    # negative of  sum log p(y|x) - lam/2 |w|^2, with beta = (b, w)
    s = z1 @ beta
    nll = np.sum(np.logaddexp(0.0, s) - y * s)
    return nll + 0.5 * lam * np.dot(beta[1:], beta[1:])


def fit_logistic(X, y, lam: float = 0.01) -> LogisticModel | ConstantModel:
    """Ridge logistic regression fitted by damped Newton-Raphson.

    Constant columns are dropped and the rest z-standardized with the fit
    statistics. The intercept is not penalized. If no column survives, the
    constant-0.5 model is returned.
    """
    X = _check_features(X)
    y = _check_labels(y)
    if X.shape[0] != len(y):
        raise ValueError("features and labels have different lengths")
    if min(np.sum(y == 0), np.sum(y == 1)) < 2:
        raise ValueError("need at least 2 samples per class")
    if lam < 0:
        raise ValueError("lam must be non-negative")
    kept = np.flatnonzero(np.ptp(X, axis=0) > 0)
    if len(kept) == 0:
        return ConstantModel(X.shape[1])
    mean = X[:, kept].mean(axis=0)
    std = X[:, kept].std(axis=0)
    z = (X[:, kept] - mean) / std
    z1 = np.hstack([np.ones((len(y), 1)), z])
    d = z1.shape[1]
    pen = np.full(d, lam)
    pen[0] = 0.0
    beta = np.zeros(d)
    obj = _penalized_nll(z1, y, beta, lam)
    it = 0
    for it in range(1, MAX_NEWTON + 1):
        p = _sigmoid(z1 @ beta)
        grad = z1.T @ (p - y) + pen * beta
        if np.max(np.abs(grad)) <= GRAD_TOL:
            it -= 1
            break
        hess = (z1 * (p * (1.0 - p))[:, None]).T @ z1
        hess[np.diag_indices(d)] += pen
        step = np.linalg.solve(hess, grad)
        t = 1.0
        while True:
            cand = beta - t * step
            cobj = _penalized_nll(z1, y, cand, lam)
            if cobj <= obj + 1e-4 * t * -np.dot(grad, step) or t < 1e-10:
                break
            t *= 0.5
        beta, obj = cand, cobj
    return LogisticModel(X.shape[1], kept, mean, std, beta[1:].copy(), float(beta[0]), lam, it)


def predict_proba(model, X) -> np.ndarray:
    return model.predict_proba(X)


class Discriminator(Protocol):
    """Anything that fits on labelled features and returns a probability model."""

    name: str

    def fit(self, X, y): ...


@dataclass(frozen=True)
class LogisticDiscriminator:
    lam: float = 0.01
    name: str = "logistic"

    def fit(self, X, y):
        return fit_logistic(X, y, self.lam)


@dataclass(frozen=True)
class _ExternalModel:
    command: str
    train_x: np.ndarray
    train_y: np.ndarray

    def predict_proba(self, X) -> np.ndarray:
        X = _check_features(X)
        with tempfile.TemporaryDirectory() as tmp:
            tmp = Path(tmp)
            _write_csv(tmp / "train.csv", self.train_x, self.train_y)
            _write_csv(tmp / "test.csv", X, None)
            cmd = shlex.split(self.command) + [str(tmp / "train.csv"), str(tmp / "test.csv"), str(tmp / "out.csv")]
            subprocess.run(cmd, check=True)
            with open(tmp / "out.csv") as fh:
                probs = np.array([float(r[0]) for r in csv.reader(fh) if r], dtype=np.float64)
        if len(probs) != len(X):
            raise RuntimeError(f"external classifier returned {len(probs)} rows for {len(X)} inputs")
        return _clamp(probs)


def _write_csv(path: Path, X: np.ndarray, y) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for i, row in enumerate(X):
            w.writerow([repr(float(v)) for v in row] + ([int(y[i])] if y is not None else []))


@dataclass(frozen=True)
class ExternalDiscriminator:
    """Bridge to an external classifier process.

    The command is called as ``CMD train.csv test.csv out.csv``; train rows are
    features followed by the 0/1 label, test rows are features only, and the
    process writes one probability of class 1 per test row.
    """

    command: str
    name: str = "external"

    def fit(self, X, y):
        return _ExternalModel(self.command, _check_features(X), _check_labels(y))


def js_loglik(probs, y) -> float:
    """Balanced base-2 log-likelihood shifted so chance level is 0 and the maximum is 1."""
    y = _check_labels(y)
    p = _clamp(np.asarray(probs, dtype=np.float64).ravel())
    if len(p) != len(y):
        raise ValueError("probabilities and labels have different lengths")
    return float(1.0 + 0.5 * np.mean(np.log2(1.0 - p[y == 0])) + 0.5 * np.mean(np.log2(p[y == 1])))


def js_distance(ll: float) -> float:
    return float(np.sqrt(max(ll, 0.0)))


def informedness(probs, y, gamma: float) -> float:
    """TPR - FPR of the rule ``p > gamma`` with class 1 as positive."""
    y = _check_labels(y)
    p = np.asarray(probs, dtype=np.float64).ravel()
    if len(p) != len(y):
        raise ValueError("probabilities and labels have different lengths")
    pred = p > gamma
    return float(pred[y == 1].mean() - pred[y == 0].mean())


def max_informedness_threshold(probs, y) -> float:
    """Threshold among 0, 1 and midpoints of distinct probabilities maximizing informedness.

    Ties go to the smallest threshold.
    """
    y = _check_labels(y)
    p = np.asarray(probs, dtype=np.float64).ravel()
    if len(p) != len(y):
        raise ValueError("probabilities and labels have different lengths")
    u = np.unique(p)
    cands = np.unique(np.concatenate([[0.0], (u[:-1] + u[1:]) / 2.0, [1.0]]))
    pos = np.sort(p[y == 1])
    neg = np.sort(p[y == 0])
    tpr = 1.0 - np.searchsorted(pos, cands, side="right") / len(pos)
    fpr = 1.0 - np.searchsorted(neg, cands, side="right") / len(neg)
    return float(cands[int(np.argmax(tpr - fpr))])
