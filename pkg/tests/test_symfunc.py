from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, strategies as st

from giambelli.linalg import det
from giambelli.partition import EMPTY, from_parts, hook, partitions_up_to
from giambelli.specfun import PoleError
from giambelli.symfunc import (
    E_at,
    H_at,
    OmegaPoint,
    ParameterSequence,
    frobenius_schur_at,
    h_at_partition,
    h_at_points,
    multiparam_h,
    multiparam_schur,
    power_sum_at_omega,
    power_sum_at_partition,
    schur_at_omega,
    schur_at_points,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
partitions = st.lists(st.integers(1, 5), max_size=4).map(lambda xs: from_parts(sorted(xs, reverse=True)))


def _monomial_s21(xs):
    # s_(2,1) = Σ_{i≠j} x_i^2 x_j + 2 Σ_{i<j<k} x_i x_j x_k
    n = len(xs)
    out = sum(xs[i] ** 2 * xs[j] for i in range(n) for j in range(n) if i != j)
    out += 2 * sum(xs[i] * xs[j] * xs[k] for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n))
    return out


def test_schur_examples():
    assert schur_at_points(EMPTY, [3, 7]) == 1
    assert schur_at_points(from_parts([1]), [2, 3]) == 5
    xs = [1, 2, 3]
    expected = _monomial_s21(xs)
    assert expected == 60
    assert schur_at_points(from_parts([2, 1]), xs) == expected
    assert schur_at_points(from_parts([2, 1]), xs, method="bialternant") == expected
    assert schur_at_points(from_parts([1, 1, 1]), [1, 2]) == 0


def test_bialternant_falls_back_on_repeats():
    lam = from_parts([2, 1])
    assert schur_at_points(lam, [2, 2, 5], method="bialternant") == _monomial_s21([2, 2, 5])


@given(partitions, st.lists(rationals, min_size=1, max_size=4, unique=True))
def test_two_schur_routes_agree(lam, xs):
    assert schur_at_points(lam, xs) == schur_at_points(lam, xs, method="bialternant")


@pytest.mark.parametrize("xs", [[F(1, 2), 2, -1], [1, 2, 3, 4, 5], [F(-3, 7), F(2, 3)]])
def test_giambelli_in_variables(xs):
    for lam in partitions_up_to(8):
        fc = lam.frobenius
        rows = [[schur_at_points(hook(p, q), xs) for q in fc.q] for p in fc.p]
        assert schur_at_points(lam, xs) == det(rows)


def test_hook_generating_series():
    # H(u)E(v) = 1 + (u+v) Σ s_(p|q) / (u^{p+1} v^{q+1}) in N = 3 variables
    xs = [F(1, 2), F(-1, 3), 1]
    u, v = 10.0, 12.0 + 3j
    H = E = 1
    for x in xs:
        H *= 1 / (1 - float(x) / u)
        E *= 1 + float(x) / v
    total = 0
    for p, q in product(range(40), range(4)):
        s = schur_at_points(hook(p, q), xs)
        total += float(s) / (u ** (p + 1) * v ** (q + 1))
    assert abs(H * E - (1 + (u + v) * total)) < 1e-13


def _falling(u, k):
    out = F(1)
    for j in range(k):
        out *= u - F(2 * j + 1, 2)
    return out


def test_frobenius_schur_generating_series_exact():
    # finite on each λ: only hooks inside λ contribute
    u, v = F(7, 3), F(-11, 5)
    for lam in partitions_up_to(7):
        total = F(0)
        for p in range(lam.size + 1):
            for q in range(lam.size + 1):
                fs = frobenius_schur_at(hook(p, q), lam)
                if fs:
                    total += fs / (_falling(u, p + 1) * _falling(v, q + 1))
        assert H_at(u, lam) * E_at(v, lam) == 1 + (u + v) * total


def test_frobenius_schur_examples():
    lam = from_parts([3, 1])
    assert frobenius_schur_at(EMPTY, lam) == 1
    assert frobenius_schur_at(from_parts([1]), EMPTY) == 0
    assert frobenius_schur_at(from_parts([2]), from_parts([1, 1])) == 0
    for lam in partitions_up_to(10):
        assert frobenius_schur_at(from_parts([1]), lam) == lam.size == power_sum_at_partition(1, lam)


def test_frobenius_schur_equals_multiparameter_schur():
    a = ParameterSequence.frobenius()
    for lam in partitions_up_to(8):
        hv = h_at_partition(lam, 4)
        for mu in partitions_up_to(4):
            assert multiparam_schur(mu, a, hv) == frobenius_schur_at(mu, lam)


def test_multiparam_h_examples():
    hv = [1, F(3), F(5, 2), F(-1, 4)]
    a = ParameterSequence.from_values({1: F(2), 2: F(-1), 3: F(1, 3)})
    assert multiparam_h(0, a, hv) == 1
    assert multiparam_h(1, a, hv) == hv[1]
    # Σ_k h_{k;a}/((u-a_1)...(u-a_k)) = Σ_k h_k/u^k: coefficient of u^{-2} gives h_{2;a} = h_2 - a_1 h_1
    assert multiparam_h(2, a, hv) == hv[2] - 2 * hv[1]
    zero = ParameterSequence.zero()
    for k in range(4):
        assert multiparam_h(k, zero, hv) == hv[k]
    with pytest.raises(ValueError):
        multiparam_h(5, a, hv)


def test_multiparam_h_series_identity():
    # truncated at order u^{-K}, both sides of the defining identity agree as numbers for large u
    hv = [1, F(1, 2), F(-2), F(3), F(1, 5), F(7)]
    a = ParameterSequence.affine(F(1), F(-1, 2))
    u = F(1000)
    lhs = F(0)
    den = F(1)
    for k in range(6):
        lhs += multiparam_h(k, a, hv) / den
        den *= u - a(k + 1)
    rhs = sum(hv[k] / u**k for k in range(6))
    assert abs(float(lhs - rhs)) < 1e-15


@given(st.lists(st.fractions(-3, 3, max_denominator=5), min_size=8, max_size=8), st.lists(st.fractions(-3, 3, max_denominator=5), min_size=7, max_size=7))
def test_multiparam_giambelli(avals, hvals):
    a = ParameterSequence.from_values({i - 3: x for i, x in enumerate(avals)})
    hv = [F(1)] + list(hvals)
    for mu in (from_parts([2, 2]), from_parts([3, 2, 1]), from_parts([3, 3])):
        fc = mu.frobenius
        rows = [[multiparam_schur(hook(p, q), a, hv) for q in fc.q] for p in fc.p]
        assert multiparam_schur(mu, a, hv) == det(rows)


def test_multiparam_reduces_to_schur():
    xs = [F(1, 2), 2, -1]
    hv = h_at_points(xs, 6)
    for mu in partitions_up_to(5):
        assert multiparam_schur(mu, ParameterSequence.zero(), hv) == schur_at_points(mu, xs)


def test_parameter_sequence_shift_and_dual():
    a = ParameterSequence.affine(F(2), F(1, 3))
    assert a.shift(2).shift(-5)(4) == a.shift(-3)(4) == a(1)
    assert a.dual().dual()(3) == a(3)
    assert a.dual()(2) == -a(-1)
    t = ParameterSequence.from_values({1: 5, 2: 7})
    assert t.shift(1)(1) == 7
    assert t.dual().dual()(2) == 7


def test_power_sums():
    assert power_sum_at_partition(2, from_parts([1])) == 0
    # a = 3/2, b = 1/2: 27/8 + 1/8
    assert power_sum_at_partition(3, from_parts([2])) == F(7, 2)
    w = OmegaPoint((0.3,), (0.1,), 1.0)
    assert power_sum_at_omega(1, w) == 1.0
    assert power_sum_at_omega(2, OmegaPoint((), (), 1.0)) == 0
    assert power_sum_at_omega(2, w) == pytest.approx(0.08)


def test_omega_point_validation():
    with pytest.raises(ValueError):
        OmegaPoint((0.6, 0.5), (), 1.0)
    with pytest.raises(ValueError):
        OmegaPoint((0.1, 0.2), (), 1.0)
    assert OmegaPoint((0.3,), (0.2,), 1.0).gamma == pytest.approx(0.5)


def test_H_E_examples():
    u = F(7, 3)
    assert H_at(u, EMPTY) == 1
    assert H_at(u, from_parts([1])) == (u + F(1, 2)) / (u - F(1, 2))
    with pytest.raises(PoleError):
        H_at(F(1, 2), from_parts([1]))
    with pytest.raises(PoleError):
        E_at(F(1, 2), from_parts([1]))


@given(partitions, rationals)
def test_E_minus_u_times_H_u_is_one(lam, u):
    a, b = lam.modified_frobenius
    if u in a or -u in b or u == 0:
        return
    assert E_at(-u, lam) * H_at(u, lam) == 1


@given(partitions)
def test_H_product_forms_agree(lam):
    # Frobenius form against the row form Π_i (u + i - 1/2)/(u - λ_i + i - 1/2) over enough rows
    u = F(13, 7)
    row = F(1)
    for i in range(1, len(lam) + lam.size + 2):
        row *= (u + i - F(1, 2)) / (u - lam[i - 1] + i - F(1, 2))
    assert H_at(u, lam) == row


def test_schur_at_omega_on_partition_image():
    # on ω = (a/n, b/n, 1) the power sums p_k, k >= 2, are those of the partition scaled by n^{-k}
    lam = from_parts([3, 1])
    w = OmegaPoint.from_partition(lam)
    assert power_sum_at_omega(1, w) == 1.0
    assert power_sum_at_omega(3, w) == pytest.approx(float(power_sum_at_partition(3, lam)) / 4**3)
    assert schur_at_omega(EMPTY, w) == 1
    assert schur_at_omega(from_parts([1]), w) == pytest.approx(1.0)


def test_power_sums_from_log_H():
    # log H(u) = Σ_k p_k / (k u^k); compare coefficients numerically at large u
    import math

    lam = from_parts([4, 2, 2, 1])
    u = 400.0
    series = sum(float(power_sum_at_partition(k, lam)) / (k * u**k) for k in range(1, 12))
    assert abs(math.log(float(H_at(F(400), lam))) - series) < 1e-15
