from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphdisc.mmd import (
    BENCHMARK_BANDWIDTHS,
    GTV_SIGMA,
    STUDY_BANDWIDTHS,
    KernelSpec,
    default_spec,
    gtv_kernel,
    mmd2,
    rbf_kernel,
    subsampling_study,
)
from graphdisc.procgen import gen_dataset
from oracles import mmd2_naive


def test_kernel_examples():
    assert rbf_kernel([0.3, 1.0], [0.3, 1.0], 2.0) == 1.0
    assert np.isclose(rbf_kernel([0.0], [1.0], 1.0), np.exp(-0.5))
    assert gtv_kernel([0.2, 0.8], [0.2, 0.8], 1.0) == 1.0
    assert np.isclose(gtv_kernel([1.0, 0.0], [0.0, 1.0], 1.0), np.exp(-0.5))
    with pytest.raises(ValueError):
        rbf_kernel([0.0], [0.0, 1.0], 1.0)
    with pytest.raises(ValueError):
        gtv_kernel([0.0], [0.0, 1.0], 1.0)


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3), st.lists(st.floats(-5, 5), min_size=3, max_size=3))
def test_kernel_symmetry(x, y):
    assert rbf_kernel(x, y, 0.7) == rbf_kernel(y, x, 0.7)
    assert gtv_kernel(x, y, 0.7) == gtv_kernel(y, x, 0.7)


def test_mmd_examples():
    x = np.array([[0.0], [2.0], [5.0]])
    assert mmd2(x, x.copy(), KernelSpec(), "biased").value == 0.0
    one = KernelSpec("rbf", (1.0,), "single")
    assert np.isclose(mmd2([[0.0]], [[1.0]], one, "biased").value, 2 - 2 * np.exp(-0.5), atol=1e-15)
    with pytest.raises(ValueError):
        mmd2([[0.0]], [[1.0], [2.0]], one, "unbiased")


def test_kernel_spec_validation():
    with pytest.raises(ValueError):
        KernelSpec("laplace")
    with pytest.raises(ValueError):
        KernelSpec("rbf", ())
    with pytest.raises(ValueError):
        KernelSpec("rbf", (1.0, -1.0))
    with pytest.raises(ValueError):
        KernelSpec("rbf", (1.0, 2.0), "single")
    assert not KernelSpec("gtv", (1.0,), "single").positive_definite
    assert KernelSpec().positive_definite


def test_default_specs():
    assert default_spec("rbf", "deg").bandwidths == BENCHMARK_BANDWIDTHS
    assert default_spec("rbf", "orbit4", study=True).bandwidths == STUDY_BANDWIDTHS
    assert GTV_SIGMA == {"deg": 1.0, "clust": 0.1, "orbit4": 30.0, "orbit5": 30.0, "spec": 1.0}
    assert default_spec("gtv", "clust").bandwidths == (0.1,)
    with pytest.raises(ValueError):
        default_spec("gtv", "gin")


def test_max_reduction_is_max_per_bandwidth():
    rng = np.random.default_rng(0)
    x, y = rng.random((10, 4)), rng.random((12, 4)) + 0.3
    est = mmd2(x, y, KernelSpec(), "unbiased")
    assert est.value == max(est.per_bandwidth)
    for s, v in zip(BENCHMARK_BANDWIDTHS, est.per_bandwidth):
        assert np.isclose(v, mmd2(x, y, KernelSpec("rbf", (s,), "single"), "unbiased").value, atol=1e-15)


@given(st.integers(0, 2**31), st.sampled_from(["biased", "unbiased"]), st.sampled_from(["rbf", "gtv"]))
def test_symmetry_and_nonnegativity(seed, estimator, kind):
    rng = np.random.default_rng(seed)
    x, y = rng.random((7, 3)), rng.random((9, 3))
    spec = KernelSpec(kind)
    a = mmd2(x, y, spec, estimator).value
    b = mmd2(y, x, spec, estimator).value
    assert abs(a - b) <= 1e-12
    if kind == "rbf" and estimator == "biased":
        assert a >= -1e-12


def test_naive_oracle_small():
    rng = np.random.default_rng(1)
    x, y = rng.random((5, 2)), rng.random((6, 2))
    for est in ("biased", "unbiased"):
        got = mmd2(x, y, KernelSpec("rbf", (0.5,), "single"), est).value
        want = mmd2_naive(x, y, lambda a, b: rbf_kernel(a, b, 0.5), est)
        assert abs(got - want) <= 1e-12


def test_unbiased_mean_near_zero():
    rng = np.random.default_rng(2)
    spec = KernelSpec("rbf", (1.0,), "single")
    vals = [mmd2(rng.standard_normal((64, 3)), rng.standard_normal((64, 3)), spec, "unbiased").value for _ in range(100)]
    assert abs(np.mean(vals)) <= 3 * np.std(vals, ddof=1) / np.sqrt(100)


def test_bias_gap_shrinks():
    rng = np.random.default_rng(3)
    spec = KernelSpec("rbf", (1.0,), "single")

    def gap(n):
        out = []
        for _ in range(100):
            x, y = rng.standard_normal((n, 3)), rng.standard_normal((n, 3))
            out.append(mmd2(x, y, spec, "biased").value - mmd2(x, y, spec, "unbiased").value)
        return np.mean(out)

    g8, g128 = gap(8), gap(128)
    assert g8 > 0 and g128 > 0 and g8 > g128


def _linear_mmd2(x, y):
    # linear-kernel variant: squared distance between means
    return float(np.sum((x.mean(0) - y.mean(0)) ** 2))


def test_scale_sensitivity():
    rng = np.random.default_rng(4)
    x, y = rng.random((8, 3)), rng.random((10, 3)) + 0.2
    assert np.isclose(_linear_mmd2(3 * x, 3 * y), 9 * _linear_mmd2(x, y))
    assert np.isclose(
        _linear_mmd2(x, y), mmd2_naive(x, y, lambda a, b: float(a @ b), "biased"), atol=1e-12
    )
    c = 2.5
    for est in ("biased", "unbiased"):
        a = mmd2(c * x, c * y, KernelSpec("rbf", (1.0,), "single"), est).value
        b = mmd2(x, y, KernelSpec("rbf", (1.0 / c,), "single"), est).value
        assert abs(a - b) <= 1e-12


@pytest.fixture(scope="module")
def planar_small():
    return gen_dataset("planar", 40, 0)


def test_study_shapes_and_order(planar_small):
    spec = KernelSpec("rbf", (1.0,), "single")
    rep = subsampling_study(planar_small, planar_small, "deg", spec, "unbiased", [4, 16], repeats=20, seed=1)
    assert rep.sizes == (4, 16) and len(rep.values[0]) == 20
    for lo, med, hi in zip(rep.q05, rep.median, rep.q95):
        assert lo <= med <= hi
    again = subsampling_study(planar_small, planar_small, "deg", spec, "unbiased", [4, 16], repeats=20, seed=1)
    assert again.values == rep.values
    with pytest.raises(ValueError):
        subsampling_study(planar_small, planar_small, "deg", spec, "unbiased", [16, 4])


def test_study_unbiased_consistency(planar_small):
    spec = KernelSpec("rbf", (1.0,), "single")
    wins = 0
    for seed in range(5):
        rep = subsampling_study(planar_small, planar_small, "deg", spec, "unbiased", [8, 1024], repeats=30, seed=seed)
        wins += abs(rep.median[1]) < abs(rep.median[0])
    assert wins == 5


def test_empty_set_errors():
    with pytest.raises(ValueError):
        mmd2(np.zeros((0, 2)), np.zeros((3, 2)), KernelSpec(), "biased")
