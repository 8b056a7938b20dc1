import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pared.pareto import (compute_reference_point, dominates, hypervolume,
                          non_dominated_filter, non_dominated_mask)
from conftest import brute_force_mask, mc_hypervolume, record, rng


def test_dominates_basic():
    assert dominates((1, 1), (2, 2))
    assert not dominates((1, 2), (2, 1))
    assert not dominates((2, 1), (1, 2))
    assert not dominates((1, 1), (1, 1))  # needs strict improvement somewhere
    assert dominates((1, 1), (1, 2))


def test_filter_single():
    arch = non_dominated_filter([record(0, [1.0, 2.0])])
    assert [r.id for r in arch.records] == [0]


def test_filter_chain():
    recs = [record(0, [1, 1]), record(1, [2, 2]), record(2, [3, 3])]
    arch = non_dominated_filter(recs)
    assert [r.id for r in arch.records] == [0]


def test_filter_keeps_duplicates():
    recs = [record(0, [1, 2]), record(1, [1, 2]), record(2, [5, 5])]
    arch = non_dominated_filter(recs)
    assert [r.id for r in arch.records] == [0, 1]


def test_filter_skips_failed():
    recs = [record(0, [1, 1]), record(1, None, status="failed")]
    arch = non_dominated_filter(recs)
    assert [r.id for r in arch.records] == [0]


def test_filter_matches_brute_force():
    g = rng(99)
    for trial in range(50):
        vals = g.random((g.integers(1, 30), 3))
        recs = [record(i, v) for i, v in enumerate(vals)]
        got = {r.id for r in non_dominated_filter(recs).records}
        want = set(np.nonzero(brute_force_mask(vals))[0])
        assert got == want


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 25), st.integers(2, 3))
def test_filter_idempotent(seed, n, q):
    vals = rng(seed).random((n, q))
    recs = [record(i, v) for i, v in enumerate(vals)]
    once = non_dominated_filter(recs)
    twice = non_dominated_filter(once.records)
    assert [r.id for r in once.records] == [r.id for r in twice.records]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(2, 20))
def test_filter_order_invariant(seed, n):
    g = rng(seed)
    vals = g.random((n, 2))
    recs = [record(i, v) for i, v in enumerate(vals)]
    shuffled = [recs[i] for i in g.permutation(n)]
    a = {r.id for r in non_dominated_filter(recs).records}
    b = {r.id for r in non_dominated_filter(shuffled).records}
    assert a == b


def test_hypervolume_two_point_front():
    # inclusion-exclusion by hand: 2 + 2 - 1
    assert hypervolume(np.array([[1.0, 2.0], [2.0, 1.0]]), np.array([3.0, 3.0])) == pytest.approx(3.0)


def test_hypervolume_point_at_reference():
    assert hypervolume(np.array([[3.0, 3.0]]), np.array([3.0, 3.0])) == 0.0


def test_hypervolume_empty_front():
    assert hypervolume(np.empty((0, 2)), np.array([1.0, 1.0])) == 0.0


def test_hypervolume_rejects_high_dimensions():
    with pytest.raises(ValueError):
        hypervolume(np.array([[0.0] * 4]), np.array([1.0] * 4))


def test_hypervolume_matches_monte_carlo():
    g = rng(7)
    for q in (2, 3):
        for trial in range(6):
            vals = g.random((8, q))
            front = vals[brute_force_mask(vals)]
            ref = vals.max(axis=0) + 0.25
            exact = hypervolume(front, ref)
            est, se = mc_hypervolume(front, ref, 200_000, seed=1000 + trial + 10 * q)
            assert abs(exact - est) <= max(3 * se, 1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 12), st.integers(2, 3))
def test_hypervolume_monotone_under_insertion(seed, n, q):
    g = rng(seed)
    vals = g.random((n, q))
    ref = np.full(q, 1.2)
    base = hypervolume(vals[non_dominated_mask(vals)], ref)
    extra = g.random(q)
    grown = np.vstack([vals, extra])
    after = hypervolume(grown[non_dominated_mask(grown)], ref)
    assert after >= base - 1e-12
    # a point strictly below the whole set must add volume
    dominator = vals.min(axis=0) - 0.05
    grown = np.vstack([vals, dominator])
    assert hypervolume(grown[non_dominated_mask(grown)], ref) > base


def test_reference_point_inflation():
    vals = np.array([[0.0, 10.0], [4.0, 2.0]])
    ref = compute_reference_point(vals)
    assert ref == pytest.approx([4.0 + 0.4, 10.0 + 0.8])


def test_reference_point_degenerate_coordinate():
    vals = np.array([[2.0, 1.0], [2.0, 3.0]])
    ref = compute_reference_point(vals)
    assert ref[0] == pytest.approx(2.0 + 1e-9)
    assert ref[1] == pytest.approx(3.0 + 0.2)
