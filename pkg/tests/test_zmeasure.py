import math
from collections import Counter
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from giambelli.partition import EMPTY, enumerate_partitions, from_parts, hook, partitions_up_to, successors
from giambelli.zmeasure import (
    MixedZParams,
    ZParams,
    expect_fs,
    giambelli_expectation_check,
    harmonic_phi,
    mixed_ratio,
    parse_scalar,
    sample,
    sample_fixed_size,
    sample_many,
    size_pmf,
    transition_prob,
    weight_mixed,
    weight_n,
)

HALF = MixedZParams.of("1/2", "1/2", "1/4")
PRINCIPAL = ZParams("1/2+1i", "1/2-1i")
COMPLEMENTARY = ZParams("1/3", "2/3")


def test_parse_scalar():
    assert parse_scalar("1/2") == F(1, 2)
    assert parse_scalar("0.25") == F(1, 4)
    assert parse_scalar("0.5+1i") == 0.5 + 1j
    assert parse_scalar("1/2-1i") == 0.5 - 1j
    with pytest.raises(ValueError):
        parse_scalar("abc")


def test_admissibility():
    assert PRINCIPAL.series_type == "principal"
    assert COMPLEMENTARY.series_type == "complementary"
    assert ZParams("-3/2", "-7/4").series_type == "complementary"
    for z, zp in [("1", "1"), ("1/2", "3/2"), ("1/2+1i", "1/2+1i"), ("2", "2")]:
        with pytest.raises(ValueError):
            ZParams(z, zp)
    with pytest.raises(ValueError):
        MixedZParams.of("1/2", "1/2", "1")


@pytest.mark.parametrize("zp", [ZParams("1/2", "1/2"), PRINCIPAL, COMPLEMENTARY, ZParams("5/2", "9/4")])
def test_pochhammer_positivity(zp):
    for k in range(1, 12):
        assert zp.pair(k - 1) > 0 or k == 0
        assert zp.pair(-k) > 0


def test_weight_n_examples():
    zp = ZParams("1/2", "1/2")
    assert weight_n(EMPTY, zp) == 1
    assert weight_n(from_parts([1]), zp) == 1
    assert weight_n(from_parts([2]), zp) == F(9, 10)
    assert weight_n(from_parts([1, 1]), zp) == F(1, 10)


@pytest.mark.parametrize("zp", [ZParams("1/2", "1/2"), COMPLEMENTARY])
def test_normalization_exact(zp):
    for n in range(11):
        assert sum(weight_n(lam, zp) for lam in enumerate_partitions(n)) == 1


def test_normalization_principal():
    for n in range(11):
        assert abs(sum(weight_n(lam, PRINCIPAL) for lam in enumerate_partitions(n)) - 1) < 1e-12


def test_weight_mixed_examples():
    assert weight_mixed(EMPTY, HALF) == pytest.approx(0.75**0.25, rel=1e-15)
    assert weight_mixed(from_parts([1]), HALF) == pytest.approx(0.75**0.25 / 16, rel=1e-15)
    assert mixed_ratio(from_parts([1]), HALF) == F(1, 16)


def test_weight_mixed_sums_to_one():
    total = sum(weight_mixed(lam, HALF) for lam in partitions_up_to(20))
    # remaining mass is below 1e-7 at ξ = 1/4
    assert 1 - 1e-7 < total <= 1 + 1e-14


def test_harmonicity_exact():
    for zp in (ZParams("1/2", "1/2"), COMPLEMENTARY):
        for mu in partitions_up_to(9):
            assert harmonic_phi(mu, zp) == sum(harmonic_phi(lam, zp) for lam, _ in successors(mu))


def test_transition_probabilities():
    zp = ZParams("1/2", "1/2")
    assert transition_prob(EMPTY, from_parts([1]), zp) == 1
    assert transition_prob(from_parts([1]), from_parts([2]), zp) == F(9, 10)
    assert transition_prob(from_parts([1]), from_parts([1, 1]), zp) == F(1, 10)
    with pytest.raises(ValueError):
        transition_prob(from_parts([1]), from_parts([3]), zp)
    for mu in partitions_up_to(9):
        assert sum(transition_prob(mu, lam, COMPLEMENTARY) for lam, _ in successors(mu)) == 1


def test_expect_fs_examples():
    assert expect_fs(EMPTY, HALF) == 1
    assert expect_fs(from_parts([1]), HALF) == F(1, 12)
    assert expect_fs(from_parts([2]), HALF) == F(1, 32)


def test_giambelli_check_examples():
    assert giambelli_expectation_check(hook(2, 1), HALF) == 0
    assert giambelli_expectation_check(from_parts([2, 2]), HALF) == 0
    mp = MixedZParams(PRINCIPAL, "1/4")
    assert giambelli_expectation_check(from_parts([3, 3, 2]), mp) < 1e-12


@given(st.fractions(F(1, 20), F(19, 20), max_denominator=40), st.fractions(F(1, 20), F(19, 20), max_denominator=40),
       st.fractions(F(1, 50), F(49, 50), max_denominator=50))
def test_giambelli_exact_property(z, zp, xi):
    mp = MixedZParams.of(z, zp, xi)
    for parts in ([2, 2], [3, 2, 1], [3, 3, 2], [4, 4, 4]):
        assert giambelli_expectation_check(from_parts(parts), mp) == 0


def test_size_pmf_sums_to_one():
    mp = MixedZParams(PRINCIPAL, "1/2")
    assert abs(sum(size_pmf(n, mp) for n in range(200)) - 1) < 1e-12


def test_sampler_reproducible_and_worker_independent():
    a = sample_many(HALF, 50, seed=3, workers=1)
    b = sample_many(HALF, 50, seed=3, workers=4)
    assert a == b
    assert a[7] == sample(HALF, 3, 7)
    assert sample_many(HALF, 50, seed=4) != a


def test_sampler_small_xi():
    mp = MixedZParams.of("1/2", "1/2", "1/1000")
    draws = sample_many(mp, 2000, seed=1)
    assert sum(lam.size == 0 for lam in draws) > 1900


def test_fixed_size_frequency_of_two_row():
    # M^(2)((2)) = 9/10 at z = z' = 1/2
    draws = sample_fixed_size(ZParams("1/2", "1/2"), 2, 20000, seed=5)
    c = Counter(lam.parts for lam in draws)
    p_hat = c[(2,)] / 20000
    se = math.sqrt(0.9 * 0.1 / 20000)
    assert abs(p_hat - 0.9) < 4 * se


def test_fixed_size_law_level_four():
    zp = COMPLEMENTARY
    N = 40000
    draws = sample_fixed_size(zp, 4, N, seed=9, workers=2)
    c = Counter(lam.parts for lam in draws)
    for lam in enumerate_partitions(4):
        p = float(weight_n(lam, zp))
        se = math.sqrt(p * (1 - p) / N)
        assert abs(c[lam.parts] / N - p) < 4.5 * se
