import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rand_sts.bits import BitSequence
from rand_sts.special import erfc
from rand_sts.walks import (
    EXCURSION_STATES,
    VARIANT_STATES,
    WalkPath,
    cumulative_sums_test,
    cusum_p_value,
    excursion_pi,
    random_excursions_test,
    random_excursions_variant_test,
)

from oracles import naive_cusum, naive_cycles

ALT100 = BitSequence([0, 1] * 50)
walk_bits = st.lists(st.integers(0, 1), min_size=1, max_size=64)


@pytest.fixture(scope="module")
def long_random():
    # seed picked so that the walk has J >= 500 cycles
    rng = np.random.default_rng(1)
    for _ in range(50):
        seq = BitSequence(rng.integers(0, 2, 10**6))
        if WalkPath.of(seq).J >= 500:
            return seq
    raise AssertionError("no long walk found")


# ---------------------------------------------------------------- cusum

def test_cusum_alternating():
    p, z = cusum_p_value(ALT100, "forward")
    assert z == 1
    assert p > 0.999


def test_cusum_all_ones():
    res = cumulative_sums_test(BitSequence([1] * 100))
    assert res.statistics["z_forward"] == 100
    assert max(res.p_values) < 1e-20


def test_cusum_matches_untruncated_series():
    rng = np.random.default_rng(13)
    for n in (100, 1000, 5000):
        seq = BitSequence(rng.integers(0, 2, n))
        p, z = cusum_p_value(seq)
        assert p == pytest.approx(min(1.0, max(0.0, naive_cusum(z, n))), abs=1e-12)


@given(st.lists(st.integers(0, 1), min_size=100, max_size=400))
@settings(max_examples=60)
def test_cusum_reversal_swaps_modes(bits):
    seq = BitSequence(bits)
    fwd, bwd = cumulative_sums_test(seq).p_values
    rfwd, rbwd = cumulative_sums_test(seq.reversed()).p_values
    assert rfwd == bwd
    assert rbwd == fwd
    assert 0.0 <= fwd <= 1.0


# ---------------------------------------------------------------- walk path

def test_excursion_pi_rows():
    assert excursion_pi(1) == pytest.approx((0.5, 0.25, 0.125, 0.0625, 0.0312, 0.0312), abs=1e-4)
    assert excursion_pi(-4)[0] == pytest.approx(0.875)
    published_s4 = (0.8750, 0.0156, 0.0137, 0.0120, 0.0105, 0.0733)
    assert excursion_pi(4) == pytest.approx(published_s4, abs=1e-4)
    for s in EXCURSION_STATES:
        assert sum(excursion_pi(s)) == pytest.approx(1.0, abs=1e-12)


def test_hand_trace():
    bits = [0, 1, 1, 0, 1, 1, 0, 1, 0, 1]
    walk = WalkPath.of(BitSequence(bits))
    assert walk.partial_sums.tolist() == [-1, 0, 1, 0, 1, 2, 1, 2, 1, 2]
    assert walk.J == 3
    assert walk.visits_per_cycle(1).tolist() == [0, 1, 3]
    assert walk.visits_per_cycle(2).tolist() == [0, 0, 3]
    assert walk.visit_classes(1).tolist() == [1, 1, 0, 1, 0, 0]
    assert walk.total_visits(2) == 3


def check_against_naive(bits):
    walk = WalkPath.of(BitSequence(bits))
    cycles = naive_cycles(bits)
    assert walk.J == len(cycles) >= 1
    for s in VARIANT_STATES:
        per_cycle = [c.count(s) for c in cycles]
        assert walk.visits_per_cycle(s).tolist() == per_cycle
        assert walk.total_visits(s) == sum(per_cycle)
        classes = np.bincount(np.minimum(per_cycle, 5), minlength=6)
        assert walk.visit_classes(s).tolist() == classes.tolist()
        assert walk.visit_classes(s).sum() == walk.J


def test_walk_vs_naive_200_sequences():
    rng = np.random.default_rng(32)
    for _ in range(200):
        check_against_naive(rng.integers(0, 2, 32).tolist())


@given(walk_bits)
def test_walk_properties(bits):
    check_against_naive(bits)
    walk = WalkPath.of(BitSequence(bits))
    steps = np.diff(np.concatenate([[0], walk.partial_sums]))
    assert set(steps.tolist()) <= {-1, 1}
    assert walk.partial_sums[-1] == 2 * sum(bits) - len(bits)


@given(walk_bits)
def test_complement_mirrors_states(bits):
    a = WalkPath.of(BitSequence(bits))
    b = WalkPath.of(BitSequence(bits).complement())
    assert a.J == b.J
    for s in VARIANT_STATES:
        assert a.total_visits(s) == b.total_visits(-s)
        assert a.visit_classes(s).tolist() == b.visit_classes(-s).tolist()


# ---------------------------------------------------------------- excursion tests

def test_gate_for_short_walks():
    seq = BitSequence(np.random.default_rng(0).integers(0, 2, 10000))
    for fn, arity in ((random_excursions_test, 8), (random_excursions_variant_test, 18)):
        res = fn(seq)
        assert not res.applicable
        assert res.p_values == (0.0,) * arity
        assert "J=" in res.fail_reason


def test_excursions_on_long_walk(long_random):
    res = random_excursions_test(long_random)
    walk = WalkPath.of(long_random)
    assert res.applicable and len(res.p_values) == 8
    assert res.statistics["J"] == walk.J
    for p in res.p_values:
        assert 0.0 <= p <= 1.0

    var = random_excursions_variant_test(long_random)
    assert len(var.p_values) == 18
    J = walk.J
    for s, p in zip(VARIANT_STATES, var.p_values):
        xi = walk.total_visits(s)
        assert p == pytest.approx(erfc(abs(xi - J) / math.sqrt(2 * J * (4 * abs(s) - 2))))


def test_complement_permutes_pvalues(long_random):
    a = random_excursions_variant_test(long_random).p_values
    b = random_excursions_variant_test(long_random.complement()).p_values
    assert sorted(a) == pytest.approx(sorted(b))
    a = random_excursions_test(long_random).p_values
    b = random_excursions_test(long_random.complement()).p_values
    assert sorted(a) == pytest.approx(sorted(b))
