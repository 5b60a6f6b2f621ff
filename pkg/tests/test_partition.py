import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ifsad.errors import InfeasiblePartitionError, ParameterError
from ifsad.partition import ClusterConfig, fit_partition, interval_of, make_partition


def exact_two_means(values):
    """Best split of sorted distinct values into two contiguous groups."""
    v = np.sort(np.unique(values))
    best = None
    for k in range(1, len(v)):
        a, b = v[:k], v[k:]
        cost = ((a - a.mean()) ** 2).sum() + ((b - b.mean()) ** 2).sum()
        if best is None or cost < best[0]:
            best = (cost, a.mean(), b.mean())
    return best[1:]


def test_two_point_masses():
    p = fit_partition([1, 1, 1, 9, 9, 9], 2)
    np.testing.assert_allclose(p.centers, exact_two_means([1, 9]), atol=1e-6)
    np.testing.assert_allclose(p.boundaries, [0.6, 5.0, 9.4], atol=1e-6)


def test_single_interval_spans_domain():
    x = [3.0, 4.0, 8.0, 10.0]
    p = fit_partition(x, 1)
    assert p.m == 1
    assert p.centers[0] == pytest.approx(np.mean(x))
    assert p.domain_lo == pytest.approx(3.0 - 0.35)
    assert p.domain_hi == pytest.approx(10.0 + 0.35)


def test_seed_does_not_change_default_fit():
    x = np.arange(10.0)
    a = fit_partition(x, 2, ClusterConfig(seed=1))
    b = fit_partition(x, 2, ClusterConfig(seed=99))
    assert a == b


def test_restarts_are_reproducible():
    x = np.random.default_rng(3).normal(size=60)
    cfg = ClusterConfig(restarts=4, seed=11)
    assert fit_partition(x, 3, cfg) == fit_partition(x, 3, cfg)


def test_errors():
    with pytest.raises(InfeasiblePartitionError):
        fit_partition([2.0, 2.0, 2.0], 2)
    with pytest.raises(InfeasiblePartitionError):
        fit_partition([1.0, 2.0], 3)
    with pytest.raises(ParameterError):
        fit_partition([1.0, 2.0], 0)
    with pytest.raises(ParameterError):
        fit_partition([], 1)


def test_ties_in_series_do_not_collapse_initial_centres():
    # quantile starts would put two centres on the value 5
    x = [5] * 40 + [6] * 5 + [9] * 5
    p = fit_partition(x, 3)
    assert np.all(np.diff(p.centers) > 0)


@pytest.mark.parametrize("x, want", [(2, 0), (5, 1), (-3, 0), (10, 1), (99, 1), (0, 0)])
def test_interval_of(x, want):
    p = make_partition([2.5, 7.5], 0.0, 10.0)
    p = type(p)(p.centers, np.array([0.0, 5.0, 10.0]))
    assert interval_of(p, x) == want


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=3, max_size=60),
    st.integers(1, 4),
)
def test_partition_invariants(xs, m):
    try:
        p = fit_partition(xs, m)
    except InfeasiblePartitionError:
        return
    assert p.m == m
    assert np.all(np.diff(p.centers) > 0)
    assert np.all(np.diff(p.boundaries) > 0)
    assert p.domain_lo < min(xs) and p.domain_hi > max(xs)
    np.testing.assert_allclose(p.boundaries[1:-1], (p.centers[:-1] + p.centers[1:]) / 2)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(-100, 100),
    st.floats(1, 100),
    st.integers(1, 20),
    st.integers(1, 20),
    st.sampled_from(["ifcm", "fcm"]),
)
def test_point_masses_recovered(a, gap, na, nb, method):
    b = a + gap
    p = fit_partition([a] * na + [b] * nb, 2, ClusterConfig(method=method))
    np.testing.assert_allclose(p.centers, [a, b], atol=1e-6)


def _random_series(rng):
    groups = rng.integers(1, 4)
    return np.concatenate([
        rng.normal(rng.uniform(-5, 5), rng.uniform(0.1, 2), rng.integers(3, 40))
        for _ in range(groups)
    ])


def test_fcm_objective_non_increasing():
    rng = np.random.default_rng(0)
    for _ in range(200):
        x = _random_series(rng)
        for m in (2, 3, 4):
            if m > len(x):
                continue
            p = fit_partition(x, m, ClusterConfig(method="fcm"))
            h = np.array(p.objective_history)
            assert np.all(np.diff(h) <= 1e-9 * h[0])


def test_terminates_within_iteration_budget():
    rng = np.random.default_rng(1)
    for _ in range(50):
        p = fit_partition(_random_series(rng), 3, ClusterConfig(max_iters=300))
        assert len(p.objective_history) <= 301


@pytest.mark.xfail(
    strict=True,
    reason="raising memberships by their hesitation before the centre update is "
    "a fixed-point iteration, not a descent step; its objective can rise",
)
def test_ifcm_objective_non_increasing():
    rng = np.random.default_rng(0)
    for _ in range(50):
        h = np.array(fit_partition(_random_series(rng), 3).objective_history)
        assert np.all(np.diff(h) <= 1e-9 * h[0])
