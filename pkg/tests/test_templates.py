import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rand_sts.bits import BitSequence
from rand_sts.errors import DomainError
from rand_sts.special import igamc
from rand_sts.templates import (
    DEFAULT_TEMPLATE,
    OVERLAP_PI,
    OVERLAP_PI_PUBLISHED,
    count_non_overlapping,
    count_overlapping_ones,
    is_aperiodic,
    non_overlapping_template,
    overlap_class_probabilities,
    overlapping_template,
)

from oracles import scan_non_overlapping, scan_overlapping

bit_strings = st.text("01", min_size=1, max_size=64)


def arr(text):
    return np.frombuffer(text.encode(), dtype=np.uint8) - ord("0")


def test_hand_example_reset_rule():
    assert count_non_overlapping(arr("10111011"), arr("11")) == 2 == scan_non_overlapping("10111011", "11")


def test_exact_tiling():
    tpl = "000000001"
    block = tpl * 50
    assert count_non_overlapping(arr(block), arr(tpl)) == 50


def test_count_oracles_on_500_random_strings():
    rng = np.random.default_rng(8)
    for _ in range(500):
        n = int(rng.integers(1, 65))
        text = "".join(rng.choice(["0", "1"], n))
        m = int(rng.integers(1, 10))
        tpl = "".join(rng.choice(["0", "1"], m))
        assert count_non_overlapping(arr(text), arr(tpl)) == scan_non_overlapping(text, tpl)
        ones = "1" * m
        assert count_overlapping_ones(arr(text)[None, :], m)[0] == scan_overlapping(text, ones)


@given(bit_strings, st.text("01", min_size=1, max_size=9))
def test_non_overlapping_matches_scan(text, tpl):
    assert count_non_overlapping(arr(text), arr(tpl)) == scan_non_overlapping(text, tpl)


@given(bit_strings, st.integers(1, 10))
def test_overlapping_ones_matches_scan(text, m):
    assert count_overlapping_ones(arr(text)[None, :], m)[0] == scan_overlapping(text, "1" * m)


def test_ten_ones_two_overlapping_nines():
    assert count_overlapping_ones(arr("1111111111")[None, :], 9)[0] == 2


def test_aperiodic():
    assert is_aperiodic(DEFAULT_TEMPLATE)
    assert not is_aperiodic("101")
    assert not is_aperiodic("111111111")


def test_template7_all_zero_sequence():
    seq = BitSequence(np.zeros(1048576, dtype=np.uint8))
    res = non_overlapping_template(seq, "111111111", 8)
    mu = 131064 / 512
    var = 131072 * (1 / 512 - 17 / 2**18)
    assert res.statistics["M"] == 131072
    assert res.statistics["W"] == (0,) * 8
    assert res.statistics["mu"] == pytest.approx(mu)
    assert res.statistics["chi2"] == pytest.approx(8 * mu**2 / var)
    assert res.p_value == pytest.approx(igamc(4, 4 * mu**2 / var), abs=1e-300)
    assert res.p_value < 1e-10


def test_template7_block_permutation_invariance():
    rng = np.random.default_rng(4)
    blocks = rng.integers(0, 2, size=(8, 4096)).astype(np.uint8)
    a = non_overlapping_template(BitSequence(blocks.ravel()), DEFAULT_TEMPLATE, 8)
    b = non_overlapping_template(BitSequence(blocks[rng.permutation(8)].ravel()), DEFAULT_TEMPLATE, 8)
    assert a.statistics["chi2"] == pytest.approx(b.statistics["chi2"])


def test_template7_rejects_long_template():
    with pytest.raises(DomainError):
        non_overlapping_template(BitSequence([0, 1] * 32), "0" * 9, 8)


def test_published_table_as_listed():
    assert OVERLAP_PI_PUBLISHED == (0.324652, 0.182617, 0.142670, 0.106645, 0.077147, 0.166269)
    assert sum(OVERLAP_PI_PUBLISHED) == pytest.approx(1.0, abs=1e-4)


def test_exact_table_frozen_values():
    want = (0.364091, 0.185659, 0.139381, 0.100571, 0.070432, 0.139865)
    assert np.allclose(OVERLAP_PI, want, atol=1e-6)
    assert sum(OVERLAP_PI) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("M,m", [(16, 2), (18, 3), (20, 4)])
def test_class_probabilities_vs_exhaustive_enumeration(M, m):
    codes = np.arange(2**M, dtype=np.int64)
    blocks = ((codes[:, None] >> np.arange(M - 1, -1, -1)) & 1).astype(np.uint8)
    counts = np.minimum(count_overlapping_ones(blocks, m), 5)
    exact = np.bincount(counts, minlength=6) / 2**M
    assert np.allclose(overlap_class_probabilities(M, m), exact, atol=1e-12)


def test_overlapping_all_zero():
    res = overlapping_template(BitSequence(np.zeros(10**6, dtype=np.uint8)))
    N = 10**6 // 1032
    assert res.statistics["N"] == N == 968
    assert res.statistics["nu"] == (N, 0, 0, 0, 0, 0)
    assert res.statistics["lambda"] == pytest.approx(2.0)
    assert res.p_value < 1e-10


def test_overlapping_table_switch():
    rng = np.random.default_rng(12)
    seq = BitSequence(rng.integers(0, 2, 10**6))
    exact = overlapping_template(seq)
    published = overlapping_template(seq, table="published")
    assert exact.statistics["nu"] == published.statistics["nu"]
    assert exact.p_value != published.p_value
    with pytest.raises(DomainError):
        overlapping_template(seq, m=10, table="published")


@given(st.integers(1032, 20000), st.integers(0, 2**32 - 1), st.floats(0.3, 0.9))
@settings(max_examples=25)
def test_overlapping_classes_sum_to_n_blocks(n, seed, density):
    bits = (np.random.default_rng(seed).random(n) < density).astype(np.uint8)
    res = overlapping_template(BitSequence(bits))
    assert sum(res.statistics["nu"]) == res.statistics["N"] == n // 1032
