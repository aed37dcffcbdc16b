"""Symmetric eigenvalues (Householder + implicit QL) and normalized-Laplacian spectra."""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from ..graph import Graph

__all__ = [
    "EigenConvergenceError",
    "symmetric_eigenvalues",
    "normalized_laplacian",
    "laplacian_spectrum",
    "spectral_histogram_row",
    "SPEC_BINS",
    "SPEC_RANGE",
]

TOL = 1e-12
MAX_SWEEPS = 50
SPEC_BINS = 200
SPEC_RANGE = (-1e-5, 2.0)


class EigenConvergenceError(ArithmeticError):
    """The QL iteration did not converge within the sweep budget."""


@njit(cache=True)
def _tridiagonalize(a, d, e):
    # Householder reduction to tridiagonal form (values only); a is overwritten
    n = a.shape[0]
    for i in range(n - 1, 0, -1):
        l = i - 1
        h = 0.0
        if l > 0:
            scale = 0.0
            for k in range(l + 1):
                scale += abs(a[i, k])
            if scale == 0.0:
                e[i] = a[i, l]
            else:
                for k in range(l + 1):
                    a[i, k] /= scale
                    h += a[i, k] * a[i, k]
                f = a[i, l]
                g = -math.sqrt(h) if f >= 0.0 else math.sqrt(h)
                e[i] = scale * g
                h -= f * g
                a[i, l] = f - g
                # e = A u / h using the lower triangle, row-major friendly
                for j in range(l + 1):
                    e[j] = 0.0
                for j in range(l + 1):
                    uj = a[i, j]
                    acc = 0.0
                    for k in range(j):
                        ajk = a[j, k]
                        acc += ajk * a[i, k]
                        e[k] += ajk * uj
                    e[j] += acc + a[j, j] * uj
                f = 0.0
                for j in range(l + 1):
                    e[j] /= h
                    f += e[j] * a[i, j]
                hh = f / (h + h)
                for j in range(l + 1):
                    f = a[i, j]
                    g = e[j] - hh * f
                    e[j] = g
                    for k in range(j + 1):
                        a[j, k] -= f * e[k] + g * a[i, k]
        else:
            e[i] = a[i, l]
    for i in range(n):
        d[i] = a[i, i]


@njit(cache=True)
def _tql(d, e, tol, max_sweeps):
    # implicit-shift QL on the tridiagonal (d, e); returns False on non-convergence
    n = d.shape[0]
    for i in range(1, n):
        e[i - 1] = e[i]
    if n:
        e[n - 1] = 0.0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= tol * dd or abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_sweeps:
                return False
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return True


def symmetric_eigenvalues(matrix, tol: float = TOL, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """All eigenvalues of a dense real symmetric matrix, ascending."""
    a = np.array(matrix, dtype=np.float64, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    if n == 0:
        return np.zeros(0)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if np.max(np.abs(a - a.T)) > 1e-12 * max(1.0, float(np.max(np.abs(a)))):
        raise ValueError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    d = np.empty(n)
    e = np.zeros(n)
    _tridiagonalize(a, d, e)
    if not _tql(d, e, tol, max_sweeps):
        raise EigenConvergenceError("QL iteration did not converge")
    return np.sort(d)


def normalized_laplacian(g: Graph) -> np.ndarray:
    """``I - D^-1/2 A D^-1/2`` with rows and columns of isolated nodes set to zero."""
    a = g.adjacency_matrix()
    deg = a.sum(axis=1)
    nz = deg > 0
    inv = np.zeros_like(deg)
    inv[nz] = 1.0 / np.sqrt(deg[nz])
    lap = -(inv[:, None] * a * inv[None, :])
    lap[np.diag_indices_from(lap)] = nz.astype(np.float64)
    return lap


def laplacian_spectrum(g: Graph) -> np.ndarray:
    """Ascending normalized-Laplacian eigenvalues.

    Exact deflation before the dense solve: isolated nodes contribute 0, and a
    class of k nodes sharing one neighbour set ("open twins", e.g. sibling
    leaves) contributes k - 1 eigenvalues equal to 1, because differences of
    their indicator vectors are eigenvectors. The rest of the spectrum is
    that of the Laplacian compressed onto normalized class indicators.
    """
    deg = g.degrees()
    classes: dict[tuple[int, ...], list[int]] = {}
    for v in range(g.n):
        if deg[v]:
            classes.setdefault(tuple(g.neighbors(v).tolist()), []).append(v)
    groups = list(classes.values())
    label = np.full(g.n, -1, dtype=np.int64)
    for c, members in enumerate(groups):
        label[members] = c
    size = np.array([len(m) for m in groups], dtype=np.float64)
    k = len(groups)
    # P^T L P with P[:, c] = indicator(c) / sqrt(|c|); twins are never adjacent
    proj = np.diag(size)
    if g.edge_count:
        u, v = g.edges[:, 0], g.edges[:, 1]
        w = -1.0 / np.sqrt(deg[u] * deg[v].astype(np.float64))
        np.add.at(proj, (label[u], label[v]), w)
        np.add.at(proj, (label[v], label[u]), w)
    proj /= np.sqrt(np.outer(size, size))
    ev = symmetric_eigenvalues(proj) if k else np.zeros(0)
    ones = int(np.sum(size - 1))
    zeros = int(np.sum(deg == 0))
    return np.sort(np.concatenate([ev, np.ones(ones), np.zeros(zeros)]))


def spectral_histogram_row(g: Graph) -> np.ndarray:
    if g.n == 0:
        raise ValueError("spectral histogram of an empty graph is undefined")
    ev = laplacian_spectrum(g)
    ev = np.clip(ev, SPEC_RANGE[0], SPEC_RANGE[1])
    hist, _ = np.histogram(ev, bins=SPEC_BINS, range=SPEC_RANGE)
    return hist / g.n
