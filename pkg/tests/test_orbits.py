from __future__ import annotations

import warnings

import networkx as nx
import numpy as np
import pytest

from conftest import random_graph
from graphdisc.descriptors import node_orbit_counts, orbit_counts
from graphdisc.descriptors.orbits import N_ORBITS, VISIT_WARN, estimated_visits
from graphdisc.graph import GraphSet, build_graph
from oracles import orbit_counts_oracle, orbit_counts_small_oracle


def _one(g):
    return GraphSet((g,))


def test_orbit_examples():
    k2 = orbit_counts(_one(build_graph(2, [(0, 1)])), 4).values[0]
    assert k2[0] == 1.0 and k2[1:].sum() == 0
    tri = orbit_counts(_one(build_graph(3, [(0, 1), (1, 2), (0, 2)])), 4).values[0]
    assert tri[0] == 2.0 and tri[3] == 1.0 and tri.sum() == 3.0
    c5 = orbit_counts(_one(build_graph(5, [(i, (i + 1) % 5) for i in range(5)])), 5).values[0]
    # 5-cycle orbit in the standard numbering is 34
    assert c5[34] == 1.0


def test_well_known_orbits():
    # path P3: ends are orbit 1, middle is orbit 2
    c = node_orbit_counts(build_graph(3, [(0, 1), (1, 2)]), 4)
    assert c[:, 1].tolist() == [1, 0, 1] and c[:, 2].tolist() == [0, 1, 0]
    # star K1,3: centre orbit 7, leaves orbit 6
    c = node_orbit_counts(build_graph(4, [(0, 1), (0, 2), (0, 3)]), 4)
    assert c[0, 7] == 1 and c[1:, 6].tolist() == [1, 1, 1]
    # K4 is orbit 14, K5 is orbit 72
    assert np.all(node_orbit_counts(build_graph(4, list(nx.complete_graph(4).edges())), 4)[:, 14] == 1)
    assert np.all(node_orbit_counts(build_graph(5, list(nx.complete_graph(5).edges())), 5)[:, 72] == 1)
    # C4 is orbit 8
    assert np.all(node_orbit_counts(build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)]), 4)[:, 8] == 1)


def test_shapes():
    g = build_graph(6, [(0, 1), (2, 3)])
    assert node_orbit_counts(g, 4).shape == (6, N_ORBITS[4])
    assert node_orbit_counts(g, 5).shape == (6, N_ORBITS[5])
    assert node_orbit_counts(build_graph(0, []), 4).shape == (0, 15)
    with pytest.raises(ValueError):
        orbit_counts(_one(g), 3)


def test_two_oracles_agree():
    # the VF2 oracle and the brute-force subset oracle are independent routes
    rng = np.random.default_rng(4)
    for _ in range(15):
        n = int(rng.integers(2, 9))
        g = random_graph(rng, n, rng.random())
        e = g.edges.tolist()
        for k in (4, 5):
            assert np.array_equal(orbit_counts_oracle(n, e, k), orbit_counts_small_oracle(n, e, k))


def test_orbit_identities():
    # orbit 0 is the degree and orbit 3 the triangle count
    rng = np.random.default_rng(5)
    for _ in range(10):
        g = random_graph(rng, 25, 0.2)
        c = node_orbit_counts(g, 5)
        assert np.array_equal(c[:, 0], g.degrees())
        h = nx.Graph(g.edges.tolist())
        h.add_nodes_from(range(g.n))
        tri = nx.triangles(h)
        assert c[:, 3].tolist() == [tri[v] for v in range(g.n)]
        assert np.array_equal(c[:, :15], node_orbit_counts(g, 4))


def test_visit_warning(monkeypatch):
    from graphdisc.descriptors import orbits

    star = build_graph(2001, [(0, i) for i in range(1, 2001)])
    assert estimated_visits(star, 5) > VISIT_WARN
    g = build_graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        node_orbit_counts(g, 5)
    monkeypatch.setattr(orbits, "VISIT_WARN", 10.0)
    with pytest.warns(RuntimeWarning, match="orbit counting"):
        node_orbit_counts(g, 5)
