from __future__ import annotations

import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from graphdisc.graph import build_graph

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# acceptance criteria register one line each here; printed in the terminal summary
CRITERIA: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def record(n: int, ok: bool, detail: str) -> None:
    CRITERIA[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    print(CRITERIA[n])


@pytest.fixture(autouse=True)
def _criterion_guard(request):
    marker = request.node.get_closest_marker("criterion")
    yield
    if marker is not None and marker.args[0] not in CRITERIA:
        record(marker.args[0], False, "(test did not reach its check)")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[k])


@st.composite
def graphs(draw, max_nodes: int = 12, min_nodes: int = 0):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return build_graph(n, chosen)


def random_graph(rng: np.random.Generator, n: int, p: float):
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return build_graph(n, np.stack([iu[keep], ju[keep]], axis=1))


@pytest.fixture
def np_rng():
    return np.random.default_rng(20240601)
