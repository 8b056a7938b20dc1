import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pared.design_space import (DesignSpace, HyperparameterSpec, latin_hypercube,
                                point_from_unit, to_natural, to_unit)


LOG_SPEC = HyperparameterSpec("lam", 0.01, 100.0, "log10")
LIN_SPEC = HyperparameterSpec("alpha", 0.1, 1.0, "linear")


def test_log_midpoint():
    # 10**((-2+2)/2) = 1
    assert to_natural(0.5, LOG_SPEC) == pytest.approx(1.0, abs=1e-12)


def test_log_midpoint_inverse():
    assert to_unit(1.0, LOG_SPEC) == pytest.approx(0.5, abs=1e-12)


def test_linear_lower_is_zero():
    assert to_unit(0.1, LIN_SPEC) == 0.0


def test_bounds_map_exactly():
    for spec in (LOG_SPEC, LIN_SPEC):
        assert to_natural(0.0, spec) == spec.lower
        assert to_natural(1.0, spec) == spec.upper
        assert to_unit(spec.lower, spec) == 0.0
        assert to_unit(spec.upper, spec) == 1.0


@given(st.floats(0.0, 1.0), st.sampled_from(["linear", "log10"]))
def test_round_trip(u, scale):
    spec = HyperparameterSpec("x", 0.02, 37.5, scale)
    assert abs(to_unit(to_natural(u, spec), spec) - u) <= 1e-12


def test_spec_validation():
    with pytest.raises(ValueError):
        HyperparameterSpec("x", 1.0, 1.0, "linear")
    with pytest.raises(ValueError):
        HyperparameterSpec("x", 2.0, 1.0, "linear")
    with pytest.raises(ValueError):
        HyperparameterSpec("x", 0.0, 1.0, "log10")  # log scale needs positive lower
    with pytest.raises(ValueError):
        HyperparameterSpec("x", 0.1, 1.0, "log2")


def test_duplicate_names_rejected():
    with pytest.raises(ValueError):
        DesignSpace([LIN_SPEC, HyperparameterSpec("alpha", 0.0, 1.0, "linear")])


def test_space_accessors():
    space = DesignSpace([LOG_SPEC, LIN_SPEC])
    assert space.dimension == 2
    assert list(space.names) == ["lam", "alpha"]


def test_point_from_unit_consistency():
    space = DesignSpace([LOG_SPEC, LIN_SPEC])
    pt = point_from_unit(space, [0.5, 0.0])
    assert pt.natural[0] == pytest.approx(1.0)
    assert pt.natural[1] == 0.1
    assert np.all(pt.unit == [0.5, 0.0])


def test_single_point_design():
    space = DesignSpace([LIN_SPEC])
    pts = latin_hypercube(space, 1, seed=0)
    assert len(pts) == 1
    assert 0.0 <= pts[0].unit[0] < 1.0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.integers(1, 4), st.integers(0, 2**31))
def test_lhs_stratification(n, d, seed):
    space = DesignSpace([HyperparameterSpec(f"x{i}", 0.0, 1.0, "linear") for i in range(d)])
    U = np.array([p.unit for p in latin_hypercube(space, n, seed)])
    for j in range(d):
        assert sorted(np.floor(n * U[:, j]).astype(int)) == list(range(n))


def test_lhs_determinism():
    space = DesignSpace([LOG_SPEC, LIN_SPEC])
    a = np.array([p.unit for p in latin_hypercube(space, 17, seed=123)])
    b = np.array([p.unit for p in latin_hypercube(space, 17, seed=123)])
    c = np.array([p.unit for p in latin_hypercube(space, 17, seed=124)])
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_lhs_natural_values_in_bounds():
    space = DesignSpace([LOG_SPEC, LIN_SPEC])
    for p in latin_hypercube(space, 25, seed=5):
        assert LOG_SPEC.lower <= p.natural[0] <= LOG_SPEC.upper
        assert LIN_SPEC.lower <= p.natural[1] <= LIN_SPEC.upper
