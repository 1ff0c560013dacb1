import csv
import io
import math
from fractions import Fraction as F

import mpmath as mpm
import numpy as np
import pytest

from giambelli import kernels as K
from giambelli import oracle
from giambelli.partition import as_half_integer
from giambelli.zmeasure import MixedZParams, ZParams

HALF = MixedZParams.of("1/2", "1/2", "1/4")
PRINC = MixedZParams.of("1/2+1i", "1/2-1i", "1/3")
COMPL = MixedZParams.of("1/3", "2/3", "1/2")
PAIRS = [(F(1, 2), F(3, 2)), (F(1, 2), F(-1, 2)), (F(-5, 2), F(3, 2)), (F(-1, 2), F(-7, 2)),
         (F(7, 2), F(1, 2)), (F(-3, 2), F(5, 2)), (F(9, 2), F(-9, 2)), (F(3, 2), F(3, 2)),
         (F(-1, 2), F(-1, 2)), (F(11, 2), F(5, 2))]


def test_frozen_diagonal_values():
    # frozen from the brute-force oracle (truncated partition sum, tail < 1e-12)
    assert K.kernel_discrete(F(1, 2), F(1, 2), HALF) == pytest.approx(0.0591363363306678, abs=1e-12)
    assert K.kernel_discrete(F(-3, 2), F(-3, 2), HALF) == pytest.approx(0.00120123070614318, abs=1e-12)
    rho, rep = oracle.brute_rho_all([F(1, 2), F(-3, 2)], HALF, 1, tol=1e-12)
    assert rho[(F(1, 2),)] == pytest.approx(0.0591363363306678, abs=1e-11)
    assert rho[(F(-3, 2),)] == pytest.approx(0.00120123070614318, abs=1e-11)


@pytest.mark.parametrize("mp", [HALF, PRINC, COMPL])
def test_gauge_relation_between_kernels(mp):
    def g(t):
        h = K.h_weight(t, mp)
        return h if t > 0 else 1 / h

    for x, y in PAIRS:
        a = K.kernel_discrete(x, y, mp)
        b = g(x) * K.kernel_via_residues(x, y, mp) / g(y)
        assert a == pytest.approx(b, rel=1e-9, abs=1e-14)


def test_kernel_symmetric_gauge_is_symmetric_on_same_side():
    for x, y in [(F(1, 2), F(5, 2)), (F(-1, 2), F(-9, 2))]:
        assert K.kernel_discrete(x, y, HALF) == pytest.approx(K.kernel_discrete(y, x, HALF), rel=1e-9)


@pytest.mark.parametrize("x", [F(1, 2), F(-1, 2), F(5, 2), F(-7, 2)])
def test_diagonal_methods_agree(x):
    a = K.kernel_discrete(x, x, PRINC, diagonal="analytic")
    b = K.kernel_discrete(x, x, PRINC, diagonal="richardson")
    assert a == pytest.approx(b, rel=1e-6)
    with pytest.raises(ValueError):
        K.kernel_discrete(x, x, PRINC, diagonal="bogus")


def test_h_weight_formula_at_half():
    # x = 1/2: (zz')^{1/4} ξ^{1/4} (1-ξ)^{(z+z')/2} / Γ(1)
    expected = 0.25**0.25 * 0.25**0.25 * 0.75**0.5
    assert K.h_weight(F(1, 2), HALF) == pytest.approx(expected, rel=1e-14)
    expected_neg = 0.25**0.25 * 0.25**0.25 * 0.75**-0.5
    assert K.h_weight(F(-1, 2), HALF) == pytest.approx(expected_neg, rel=1e-14)


@pytest.mark.parametrize("mp", [HALF, PRINC, COMPL])
def test_h_weight_positive(mp):
    for x in K.half_integer_range("-21/2", "21/2"):
        assert K.h_weight(x, mp) > 0


def test_m_tends_to_identity():
    big = 1000 * (1 + 1j)
    for mp in (HALF, PRINC):
        m = K.m_matrix(big, mp).as_array()
        assert np.max(np.abs(m - np.eye(2))) < 1e-2
    # off-diagonal entries vanish like sqrt(ξ), diagonal ones like ξ
    for xi in (1e-4, 1e-6):
        tiny = MixedZParams.of("1/2", "1/2", F(xi).limit_denominator(10**7))
        d = np.abs(K.m_matrix(0.3 + 0.7j, tiny).as_array() - np.eye(2))
        assert max(d[0, 1], d[1, 0]) < math.sqrt(xi)
        assert max(d[0, 0], d[1, 1]) < 10 * xi


@pytest.mark.parametrize("mp", [HALF, PRINC, COMPL])
def test_factorization_matches_two_point(mp):
    for u, v in [(2.3, 3.1), (0.7 + 1j, -0.9 + 0.5j), (-2.2 - 2j, 4.4)]:
        assert complex(K.he_factorized(v, u, mp)) == pytest.approx(complex(K.two_point_avg_discrete(u, -v, mp)), abs=1e-12)


def test_determinant_of_m_is_one():
    for u in (0.3 + 0.4j, 2.7, -1.1 + 2j):
        assert abs(np.linalg.det(K.m_matrix(u, COMPL).as_array()) - 1) < 1e-10


def test_two_point_frozen_and_brute():
    assert K.two_point_avg_discrete(2.3, 3.1, HALF) == pytest.approx(1.0663209019646376, abs=1e-13)
    rep = oracle.brute_expect(oracle.HEProduct([2.3], [3.1]), HALF, tol=1e-12)
    assert abs(complex(rep.value) - 1.0663209019646376) < 1e-11


def test_two_point_pole():
    with pytest.raises(Exception):
        K.two_point_avg_discrete(0.5, 1.0, HALF)


@pytest.mark.parametrize("x", [F(1, 2), F(-1, 2), F(5, 2), F(-7, 2)])
def test_jump_condition(x):
    for mp in (HALF, PRINC, COMPL):
        assert K.jump_check(x, mp) < 1e-10


def test_residue_matches_contour_integral():
    # numeric contour integral of m_12 around a negative lattice point
    mp = COMPL
    x = F(-3, 2)
    centre = float(x)
    with mpm.workdps(20):
        f = lambda t: complex(K.m_entry(1, 2, complex(centre + 0.25 * mpm.cos(t), 0.25 * mpm.sin(t)), mp)) * complex(  # noqa: E731
            -0.25 * mpm.sin(t), 0.25 * mpm.cos(t)
        )
        val = complex(mpm.quad(lambda t: mpm.mpc(f(t)), [0, mpm.pi / 2, mpm.pi, 3 * mpm.pi / 2, 2 * mpm.pi])) / (2j * math.pi)
    assert abs(val - complex(K.m_residue(1, 2, x, mp))) < 1e-9


def test_rho_det_matches_brute_pair():
    pts = [F(1, 2), F(-1, 2)]
    rho, rep = oracle.brute_rho_all(pts, HALF, 2, tol=1e-12)
    assert K.rho_m_det(pts, HALF) == pytest.approx(rho[tuple(pts)], abs=1e-10)
    assert K.rho_m_det(pts, HALF, kernel=K.kernel_via_residues) == pytest.approx(rho[tuple(pts)], abs=1e-10)
    with pytest.raises(ValueError):
        K.rho_m_det([F(1, 2), F(1, 2)], HALF)


def test_rho1_nonnegative_and_sums():
    xs = K.half_integer_range("-41/2", "41/2")
    vals = [K.kernel_discrete(x, x, HALF) for x in xs]
    assert min(vals) > -1e-12
    # Σ_x ρ1(x) = E|X| = E[p+q rows] ... compare with the brute average of the number of points
    table = oracle.partition_table(18)
    w = table.weights(HALF)
    count = np.asarray(table.mask.sum(axis=1) * 2, dtype=float)
    assert sum(vals) == pytest.approx(float(np.sum(w * count)), abs=1e-8)


def test_block_continuity_scan():
    # the kernel is continuous across the diagonal on each block when viewed along lattice neighbours
    for x in (F(1, 2), F(-1, 2)):
        row = [K.kernel_discrete(x, y, PRINC) for y in K.half_integer_range("-9/2", "9/2")]
        assert all(math.isfinite(v) for v in row)


def test_grid_outputs():
    pts = K.half_integer_range("-3/2", "3/2")
    rows = K.kernel_grid(pts, HALF)
    assert len(rows) == 16
    text = K.grid_to_csv(rows, {"xi": "1/4"})
    lines = text.splitlines()
    assert lines[0] == "# xi: 1/4"
    parsed = list(csv.reader(io.StringIO("\n".join(lines[1:]))))
    assert parsed[0] == ["x", "y", "K"] and len(parsed) == 17
    js = K.grid_to_json(rows)
    assert js[0]["x"] == "-3/2" and isinstance(js[0]["K"], float)
    res = K.kernel_grid(pts, HALF, method="residue")
    assert len(res) == 16


def test_half_integer_validation():
    with pytest.raises(ValueError):
        as_half_integer(F(1, 3))
    with pytest.raises(ValueError):
        K.kernel_discrete(1, F(1, 2), HALF)


# --- continuous regime ---------------------------------------------------------------

ZH = ZParams("1/2", "1/2")
ZP = ZParams("1/2+1i", "1/2-1i")


def test_two_point_omega_frozen():
    assert K.two_point_avg_omega(5, 5, ZP) == pytest.approx(1.4954227576575538, abs=1e-13)
    assert complex(oracle.hook_series_omega(5, 5, ZP)) == pytest.approx(1.4954227576575538, abs=1e-12)


def test_h_whittaker_formula():
    x = 2.0
    expected = 0.25**0.25 * x**0.5 * math.exp(-1.0) / math.sqrt(math.gamma(1.5) ** 2)
    assert K.h_whittaker(x, ZH) == pytest.approx(expected, rel=1e-13)
    with pytest.raises(ValueError):
        K.h_whittaker(0, ZH)


@pytest.mark.parametrize("zp", [ZH, ZP])
def test_rho1_whittaker_nonnegative(zp):
    for x in (-6.0, -2.5, -0.7, -0.1, 0.1, 0.5, 1.3, 3.0, 7.5):
        assert K.rho1_whittaker(x, zp) >= -1e-12


def test_tilde_factorization():
    for u, v in [(-2.0 + 1j, 3.0 - 0.5j), (1.5j, -2.5 + 2j)]:
        a = complex(K.two_point_avg_tilde(u, -v, ZP))
        b = complex(K.he_factorized_whittaker(v, u, ZP))
        assert abs(a - b) < 1e-9


def test_tilde_asymptotic_large_arguments():
    u, v = 40j, -40j + 1e-9
    a = complex(K.two_point_avg_tilde(u, v, ZP))
    b = complex(oracle.two_point_avg_tilde_asymptotic(u, v, ZP))
    assert abs(a - b) < 0.01 * abs(b)


def test_whittaker_kernel_symmetric_same_side():
    assert K.kernel_whittaker(0.5, 2.0, ZH) == pytest.approx(K.kernel_whittaker(2.0, 0.5, ZH), rel=1e-9)
    with pytest.raises(ValueError):
        K.kernel_whittaker(0.0, 1.0, ZH)
