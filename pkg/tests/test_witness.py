"""Split planner and witness-recovery products."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsub.matrices import BoolMatrix
from hsub.oracle import (oracle_interval_witness, oracle_max_witness,
                         oracle_top_k_witnesses)
from hsub.witness import (PlanParameters, WitnessMatrix, interval_witness,
                          max_witness_product, plan_parameters,
                          top_k_witnesses)

# closed forms for the split exponent at small h, per planner regression
CLOSED = {
    3: lambda w: 2 + 1 / (4 - w),
    4: lambda w: w + 1,
    5: lambda w: w + 2,
    6: lambda w: 4 + 2 / (4 - w),
    7: lambda w: 4 + 3 / (4 - w),
    8: lambda w: 2 * w + 2,
    9: lambda w: 2 * w + 3,
    10: lambda w: 6 + 4 / (4 - w),
    11: lambda w: (3 * w + 2) if w >= 7 / 3 else 6 + 5 / (4 - w),
}


@pytest.mark.parametrize("omega", [2.0, 2.2, 7 / 3, 2.376])
@pytest.mark.parametrize("h", sorted(CLOSED))
def test_planner_closed_forms(omega, h):
    plan = plan_parameters(omega, h)
    assert plan.t == pytest.approx(CLOSED[h](omega), abs=1e-9)


def test_planner_pinned_split():
    plan = plan_parameters(2.376, 4)
    assert (plan.a, plan.b, plan.c) == (1, 2, 1)
    assert plan.t == pytest.approx(3.376, abs=1e-9)


def test_planner_cubic_exponent_splits():
    # with cubic multiplication the three parts stay balanced
    assert plan_parameters(3.0, 3).abc == (1, 1, 1)
    assert plan_parameters(3.0, 4).abc == (1, 1, 2)
    assert plan_parameters(3.0, 5).abc == (2, 1, 2)


@settings(max_examples=80, deadline=None)
@given(st.floats(min_value=2.0, max_value=3.0), st.integers(3, 40))
def test_planner_invariants(omega, h):
    plan = plan_parameters(omega, h)
    a, b, c = plan.abc
    assert a + b + c == h
    assert a >= 1 and b >= 1 and c >= 1
    assert 0 < plan.mu <= b
    assert plan.t == pytest.approx(min(plan.s1, plan.s2), abs=1e-12)
    # the reported exponent never beats either branch
    assert plan.t <= plan.s1 + 1e-12 and plan.t <= plan.s2 + 1e-12


def test_planner_rejects_bad_inputs():
    with pytest.raises(ValueError):
        plan_parameters(3.0, 2)
    with pytest.raises(ValueError):
        plan_parameters(1.5, 4)


def bool_pair(seed, n1=None, inner=None, n2=None):
    rng = np.random.Generator(np.random.PCG64(seed))
    n1 = n1 or int(rng.integers(1, 16))
    inner = inner or int(rng.integers(1, 40))
    n2 = n2 or int(rng.integers(1, 16))
    density = rng.uniform(0.1, 0.9)
    return (rng.random((n1, inner)) < density,
            rng.random((inner, n2)) < density)


def test_max_witness_matches_oracle_across_widths():
    for seed in range(25):
        a, b = bool_pair(seed)
        expect = oracle_max_witness(a, b)
        inner = a.shape[1]
        for width in sorted({1, 2, math.isqrt(inner) + 1, inner}):
            wit = max_witness_product(a, b, width)
            assert (wit.indices == expect).all(), (seed, width)
            assert (wit.found() == (expect > 0)).all()


def test_max_witness_accepts_packed_input():
    a, b = bool_pair(3)
    packed = max_witness_product(BoolMatrix.from_dense(a),
                                 BoolMatrix.from_dense(b), 4)
    assert (packed.indices == max_witness_product(a, b, 4).indices).all()


def test_top_k_matches_oracle():
    for seed in range(15):
        a, b = bool_pair(seed + 200)
        for k in (1, 2, 4):
            assert top_k_witnesses(a, b, k) == oracle_top_k_witnesses(a, b, k)


def test_interval_witness_matches_oracle():
    for seed in range(15):
        rng = np.random.Generator(np.random.PCG64(seed))
        a, b = bool_pair(seed + 400)
        weights = np.sort(rng.integers(-10, 11, a.shape[1]).astype(float))
        lo, hi = sorted(rng.uniform(-8, 8, 2))
        got = interval_witness(a, b, weights, (lo, hi))
        expect = oracle_interval_witness(a, b, weights, (lo, hi))
        assert (got == expect).all(), seed
        # per-pair interval arrays are accepted too
        n1, n3 = a.shape[0], b.shape[1]
        los = rng.uniform(-8, 0, (n1, n3))
        his = los + rng.uniform(0, 8, (n1, n3))
        got = interval_witness(a, b, weights, (los, his))
        assert (got == oracle_interval_witness(a, b, weights,
                                               (los, his))).all(), seed


def test_interval_witness_rejects_unsorted_weights():
    a, b = bool_pair(1)
    w = np.arange(a.shape[1], dtype=float)[::-1]
    with pytest.raises(ValueError):
        interval_witness(a, b, w, (0.0, 1.0))


def test_witness_matrix_container():
    wm = WitnessMatrix(np.array([[0, 2]], dtype=np.int64))
    assert wm.found().tolist() == [[False, True]]
