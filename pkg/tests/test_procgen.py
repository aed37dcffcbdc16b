from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial import Delaunay as ScipyDelaunay

from graphdisc.delaunay import DegenerateInput, delaunay, edges_from_triangles
from graphdisc.graph import Rng
from graphdisc.procgen import (
    LobsterParams,
    PlanarParams,
    SbmParams,
    gen_dataset,
    gen_erdos_renyi,
    gen_lobster,
    gen_planar,
    sbm_with_blocks,
)
from graphdisc.validity import is_lobster, is_planar
from oracles import empty_circumcircle_violations


def _edge_set(tris):
    return {tuple(e) for e in edges_from_triangles(tris).tolist()}


def test_unit_square_example():
    tris = delaunay(np.array([[0, 0], [1, 0], [0, 1], [1, 1.0]]))
    assert tris.tolist() == [[0, 1, 2], [1, 2, 3]]
    with pytest.raises(DegenerateInput):
        delaunay(np.array([[0, 0], [1, 0], [0, 1], [1, 1.0]]), strict=True)


def test_collinear_and_duplicate_rejected():
    with pytest.raises(DegenerateInput):
        delaunay(np.array([[0, 0], [1, 1], [2, 2.0]]))
    with pytest.raises(DegenerateInput):
        delaunay(np.array([[0, 0], [1, 0], [0, 0.0]]))


def test_matches_scipy_on_random_sets():
    rng = np.random.default_rng(0)
    for trial in range(200):
        pts = rng.random((int(rng.integers(3, 80)), 2))
        ours = _edge_set(delaunay(pts, strict=True))
        ref = _edge_set(np.sort(ScipyDelaunay(pts).simplices, axis=1))
        assert ours == ref, trial


@given(st.integers(3, 60), st.integers(0, 2**32 - 1))
def test_empty_circumcircle(n, seed):
    pts = np.random.default_rng(seed).random((n, 2))
    tris = delaunay(pts)
    assert empty_circumcircle_violations(pts, tris) == 0
    # Euler: a triangulation of n points with h hull points has 2n - 2 - h triangles
    from scipy.spatial import ConvexHull

    h = len(ConvexHull(pts).vertices)
    assert len(tris) == 2 * n - 2 - h


def test_planar_generator():
    rng = Rng(3)
    for i in range(20):
        g = gen_planar(PlanarParams(), rng.child(i))
        assert g.n == 64 and g.is_connected() and is_planar(g)
        assert 3 * 64 - 6 - 64 < g.edge_count <= 3 * 64 - 6


def test_sbm_generator_shapes():
    p = SbmParams()
    for i in range(20):
        g, blocks = sbm_with_blocks(p, Rng(1).child(i))
        k = blocks.max() + 1
        assert 2 <= k <= 5
        sizes = np.bincount(blocks)
        assert np.all((sizes >= 20) & (sizes <= 40))
        assert g.n == len(blocks)


def test_lobster_generator():
    for i in range(20):
        g = gen_lobster(LobsterParams(), Rng(2).child(i))
        assert is_lobster(g)


def test_erdos_renyi_density():
    g = gen_erdos_renyi(200, 0.1, Rng(0))
    m = 200 * 199 / 2
    assert abs(g.edge_count - 0.1 * m) < 4 * np.sqrt(m * 0.09)


def test_params_validation():
    with pytest.raises(ValueError):
        SbmParams(p_intra=0.1, p_inter=0.3)
    with pytest.raises(ValueError):
        LobsterParams(p1=1.0)
    with pytest.raises(ValueError):
        PlanarParams(node_count=2)
    with pytest.raises(ValueError):
        gen_dataset("tree", 3, 0)


@pytest.mark.parametrize("kind", ["planar", "sbm", "lobster", "er"])
def test_dataset_determinism(kind):
    a = gen_dataset(kind, 4, 11)
    b = gen_dataset(kind, 4, 11)
    assert a.graphs == b.graphs
    # a prefix of a larger set is the smaller set
    assert gen_dataset(kind, 6, 11).graphs[:4] == a.graphs


def test_sbm_meta_blocks():
    s = gen_dataset("sbm", 2, 0)
    assert len(s.meta[0]["blocks"]) == s[0].n
