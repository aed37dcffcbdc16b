"""Bowyer-Watson Delaunay triangulation in the plane.

The enclosing super-triangle is handled symbolically: its three vertices
sit "at infinity" in directions 90, 210 and 330 degrees, and every incircle
test involving them is replaced by its limit (a half-plane test). This
avoids the classic failure of a finite super-triangle, which can drop
convex-hull edges. Any predicate whose determinant falls within
``GUARD`` of zero is reported as degenerate instead of guessed.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

__all__ = ["delaunay", "DegenerateInput", "GUARD", "incircle_det", "edges_from_triangles"]

GUARD = 1e-12

_DIRS = np.array(
    [[math.cos(a), math.sin(a)] for a in (math.pi / 2, 7 * math.pi / 6, 11 * math.pi / 6)],
    dtype=np.float64,
)


class DegenerateInput(ValueError):
    """Near-cocircular, collinear or duplicate points hit the predicate guard band."""


@njit(cache=True)
def incircle_det(ax, ay, bx, by, cx, cy, dx, dy):
    """Positive iff (dx, dy) lies inside the circumcircle of CCW triangle abc."""
    adx = ax - dx
    ady = ay - dy
    bdx = bx - dx
    bdy = by - dy
    cdx = cx - dx
    cdy = cy - dy
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    return (
        alift * (bdx * cdy - cdx * bdy)
        + blift * (cdx * ady - adx * cdy)
        + clift * (adx * bdy - bdx * ady)
    )


@njit(cache=True)
def _in_circle(pts, dirs, n, a, b, c, d):
    # returns 1 inside, 0 outside, -1 degenerate
    px = pts[d, 0]
    py = pts[d, 1]
    ninf = (a >= n) + (b >= n) + (c >= n)
    if ninf == 0:
        o = (pts[b, 0] - pts[a, 0]) * (pts[c, 1] - pts[a, 1]) - (pts[b, 1] - pts[a, 1]) * (
            pts[c, 0] - pts[a, 0]
        )
        det = incircle_det(pts[a, 0], pts[a, 1], pts[b, 0], pts[b, 1], pts[c, 0], pts[c, 1], px, py)
        if abs(det) < GUARD or abs(o) < GUARD:
            return -1
        if o < 0:
            det = -det
        return 1 if det > 0 else 0
    if ninf == 3:
        return 1
    if ninf == 1:
        # circle through p, q and a far point along u -> half-plane beyond line pq
        if a >= n:
            s, p, q = a, b, c
        elif b >= n:
            s, p, q = b, a, c
        else:
            s, p, q = c, a, b
        ux = dirs[s - n, 0]
        uy = dirs[s - n, 1]
        ex = pts[q, 0] - pts[p, 0]
        ey = pts[q, 1] - pts[p, 1]
        side = ex * (py - pts[p, 1]) - ey * (px - pts[p, 0])
        ref = ex * uy - ey * ux
        if abs(side) < GUARD or abs(ref) < GUARD:
            return -1
        return 1 if side * ref > 0 else 0
    # two far vertices: half-plane through p facing away from the third one
    if a < n:
        p = a
    elif b < n:
        p = b
    else:
        p = c
    k = 3 - (a - n if a >= n else 0) - (b - n if b >= n else 0) - (c - n if c >= n else 0)
    wx = -dirs[k, 0]
    wy = -dirs[k, 1]
    val = (px - pts[p, 0]) * wx + (py - pts[p, 1]) * wy
    if abs(val) < GUARD:
        return -1
    return 1 if val > 0 else 0


@njit(cache=True)
def _bowyer_watson(pts, dirs, strict):
    n = pts.shape[0]
    cap = 2 * (n + 3) + 8
    tris = np.empty((cap, 3), dtype=np.int64)
    alive = np.zeros(cap, dtype=np.bool_)
    tris[0, 0] = n
    tris[0, 1] = n + 1
    tris[0, 2] = n + 2
    alive[0] = True
    ntri = 1
    bad = np.empty(cap, dtype=np.int64)
    edges = np.empty((3 * cap, 2), dtype=np.int64)
    free = np.empty(cap, dtype=np.int64)
    degenerate = False
    for d in range(n):
        nbad = 0
        for t in range(ntri):
            if not alive[t]:
                continue
            r = _in_circle(pts, dirs, n, tris[t, 0], tris[t, 1], tris[t, 2], d)
            if r < 0:
                degenerate = True
                if strict:
                    return tris[:0], True
                # ties count as outside
                continue
            if r == 1:
                bad[nbad] = t
                nbad += 1
        ne = 0
        for i in range(nbad):
            t = bad[i]
            for j in range(3):
                u = tris[t, j]
                v = tris[t, (j + 1) % 3]
                if u > v:
                    u, v = v, u
                edges[ne, 0] = u
                edges[ne, 1] = v
                ne += 1
        nfree = 0
        for i in range(nbad):
            alive[bad[i]] = False
            free[nfree] = bad[i]
            nfree += 1
        for i in range(ne):
            shared = False
            for j in range(ne):
                if i != j and edges[i, 0] == edges[j, 0] and edges[i, 1] == edges[j, 1]:
                    shared = True
                    break
            if shared:
                continue
            if nfree > 0:
                nfree -= 1
                slot = free[nfree]
            else:
                slot = ntri
                ntri += 1
            tris[slot, 0] = edges[i, 0]
            tris[slot, 1] = edges[i, 1]
            tris[slot, 2] = d
            alive[slot] = True
    count = 0
    for t in range(ntri):
        if alive[t] and tris[t, 0] < n and tris[t, 1] < n and tris[t, 2] < n:
            count += 1
    out = np.empty((count, 3), dtype=np.int64)
    k = 0
    for t in range(ntri):
        if alive[t] and tris[t, 0] < n and tris[t, 1] < n and tris[t, 2] < n:
            out[k, 0] = tris[t, 0]
            out[k, 1] = tris[t, 1]
            out[k, 2] = tris[t, 2]
            k += 1
    return out, degenerate


def delaunay(points, strict: bool = False) -> np.ndarray:
    """Delaunay triangles of a 2-D point set as a ``(T, 3)`` index array.

    Each row is sorted ascending and rows are sorted lexicographically.
    Raises ``ValueError`` for fewer than 3 points. Predicates inside the
    guard band (cocircular, collinear or duplicate points) are resolved as
    "outside" unless ``strict`` is set, in which case :class:`DegenerateInput`
    is raised so the caller can resample.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must have shape (N, 2)")
    if len(pts) < 3:
        raise ValueError(f"need at least 3 points, got {len(pts)}")
    tris, degenerate = _bowyer_watson(pts, _DIRS, strict)
    if (strict and degenerate) or len(tris) == 0:
        raise DegenerateInput("degenerate point configuration")
    tris = np.sort(tris, axis=1)
    return tris[np.lexsort(tris.T[::-1])]


def edges_from_triangles(tris: np.ndarray) -> np.ndarray:
    e = np.concatenate([tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [0, 2]]])
    e = np.sort(e, axis=1)
    return np.unique(e, axis=0)
