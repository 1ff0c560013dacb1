"""Two-point averages <H(u)E(v)> and the correlation kernels built from them.

Discrete regime (mixed z-measure, points of Z'):  with ζ = ξ/(ξ-1) and
s = sqrt(zz'ξ)/(1-ξ),

    m11(u) = F(-z, -z'; u+1/2; ζ)
    m12(u) = s F(1+z, 1+z'; -u+3/2; ζ) / (-u+1/2)
    m21(u) = -s F(1-z, 1-z'; u+3/2; ζ) / (u+1/2)
    m22(u) = F(z, z'; -u+1/2; ζ)

and <E(-v)H(u)> = m11(v) m22(u) - m21(v) m12(u).  Entries m11, m21 have poles
on the negative half-lattice, m12, m22 on the positive one.

Continuous regime (points of R*): the same layout with Whittaker functions,
see ``whittaker_m_entry``.

Kernels share one block layout.  For signs (+,+), (+,-), (-,+), (-,-) of (x, y)
the numerators are

    ++  -m11(x) m21(y) + m21(x) m11(y)
    +-   m11(x) m22(y) - m21(x) m12(y)
    -+   m22(x) m11(y) - m21(y) m12(x)
    --  -m22(x) m12(y) + m12(x) m22(y)

and K(x, y) = h(x) h(y) num(x, y) / (x - y).  On the diagonal the numerator
vanishes and K(x, x) = h(x)^2 d/dx num(x, y)|_{y=x}.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .linalg import det
from .partition import as_half_integer
from .specfun import (
    DEFAULT_POLICY,
    PoleError,
    f3,
    gauss_2f1_xi,
    gauss_2f1_xi_dc,
    loggamma,
    residue_2f1_c,
    whittaker_w,
    whittaker_w_with_derivative,
)
from .zmeasure import MixedZParams, ZParams, as_real

SIGN_BLOCKS = ("++", "+-", "-+", "--")


@dataclass(frozen=True)
class MMatrix:
    m11: complex
    m12: complex
    m21: complex
    m22: complex
    u: complex
    regime: str

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=complex)


@dataclass(frozen=True)
class KernelEvaluation:
    x: object
    y: object
    value: float


def _key(mp: MixedZParams):
    return complex(mp.z), complex(mp.zp), float(mp.xi)


def _zkey(zp: ZParams):
    return complex(zp.z), complex(zp.zp)


def _realify(value: complex, *points) -> complex | float:
    if all(not isinstance(p, complex) or p.imag == 0 for p in points):
        return as_real(value, 1e-10)
    return value


# --- discrete regime ---------------------------------------------------------------


def _s_const(z, zp, xi) -> float:
    return math.sqrt(as_real(z * zp) * xi) / (1 - xi)


@lru_cache(maxsize=65536)
def _m_entry(z, zp, xi, i, j, u, deriv, policy):
    s = _s_const(z, zp, xi)
    F = lambda a, b, c: gauss_2f1_xi(a, b, c, xi, policy)  # noqa: E731
    Fc = lambda a, b, c: gauss_2f1_xi_dc(a, b, c, xi, policy)  # noqa: E731
    if (i, j) == (1, 1):
        args = (-z, -zp, u + 0.5)
        return Fc(*args) if deriv else F(*args)
    if (i, j) == (2, 2):
        args = (z, zp, -u + 0.5)
        return -Fc(*args) if deriv else F(*args)
    if (i, j) == (1, 2):
        d = -u + 0.5
        if d == 0:
            raise PoleError("m12 has a pole at u = 1/2")
        args = (1 + z, 1 + zp, -u + 1.5)
        if deriv:
            return s * (-Fc(*args) / d + F(*args) / d**2)
        return s * F(*args) / d
    if (i, j) == (2, 1):
        d = u + 0.5
        if d == 0:
            raise PoleError("m21 has a pole at u = -1/2")
        args = (1 - z, 1 - zp, u + 1.5)
        if deriv:
            return -s * (Fc(*args) / d - F(*args) / d**2)
        return -s * F(*args) / d
    raise ValueError(f"no entry ({i},{j})")


def m_entry(i: int, j: int, u, mp: MixedZParams, deriv: bool = False, policy=DEFAULT_POLICY):
    """Entry m_ij(u) (or its u-derivative) of the discrete matrix."""
    z, zp, xi = _key(mp)
    return _m_entry(z, zp, xi, i, j, complex(u), bool(deriv), policy)


def m_matrix(u, mp: MixedZParams, policy=DEFAULT_POLICY) -> MMatrix:
    vals = [m_entry(i, j, u, mp, policy=policy) for i, j in ((1, 1), (1, 2), (2, 1), (2, 2))]
    return MMatrix(*vals, u=complex(u), regime="discrete")


def m_residue(i: int, j: int, x, mp: MixedZParams, policy=DEFAULT_POLICY) -> complex:
    """Res_{u=x} m_ij(u) at a lattice point x; zero where the entry is regular."""
    x = as_half_integer(x)
    z, zp, xi = _key(mp)
    zeta = xi / (xi - 1)
    s = _s_const(z, zp, xi)
    if x > 0:
        n = int(x - Fraction(1, 2))
        if (i, j) == (2, 2):
            return -residue_2f1_c(z, zp, n, zeta, policy)
        if (i, j) == (1, 2):
            if n == 0:
                return -s * gauss_2f1_xi(1 + z, 1 + zp, 1, xi, policy)
            return s * residue_2f1_c(1 + z, 1 + zp, n - 1, zeta, policy) / n
        return 0j
    n = int(-x - Fraction(1, 2))
    if (i, j) == (1, 1):
        return residue_2f1_c(-z, -zp, n, zeta, policy)
    if (i, j) == (2, 1):
        if n == 0:
            return -s * gauss_2f1_xi(1 - z, 1 - zp, 1, xi, policy)
        return s * residue_2f1_c(1 - z, 1 - zp, n - 1, zeta, policy) / n
    return 0j


def two_point_avg_discrete(u, v, mp: MixedZParams, policy=DEFAULT_POLICY):
    """<H(u) E(v)> under the mixed z-measure, with ζ = ξ/(ξ-1):

        F(z,z';-u+1/2;ζ) F(-z,-z';-v+1/2;ζ)
        + zz'ξ/((1-ξ)^2 (u-1/2)(v-1/2)) F(z+1,z'+1;-u+3/2;ζ) F(1-z,1-z';-v+3/2;ζ)
    """
    z, zp, xi = _key(mp)
    uc, vc = complex(u), complex(v)
    F = lambda a, b, c: gauss_2f1_xi(a, b, c, xi, policy)  # noqa: E731
    if uc == 0.5 or vc == 0.5:
        raise PoleError("u or v at 1/2")
    zz = as_real(z * zp)
    first = F(z, zp, -uc + 0.5) * F(-z, -zp, -vc + 0.5)
    second = F(z + 1, zp + 1, -uc + 1.5) * F(1 - z, 1 - zp, -vc + 1.5)
    second *= zz * xi / ((1 - xi) ** 2 * (uc - 0.5) * (vc - 0.5))
    return _realify(first + second, u, v)


def he_factorized(v, u, mp: MixedZParams, policy=DEFAULT_POLICY):
    """m11(v) m22(u) - m21(v) m12(u), which should equal <E(-v) H(u)>."""
    val = m_entry(1, 1, v, mp, policy=policy) * m_entry(2, 2, u, mp, policy=policy)
    val -= m_entry(2, 1, v, mp, policy=policy) * m_entry(1, 2, u, mp, policy=policy)
    return _realify(val, u, v)


def h_weight(x, mp: MixedZParams) -> float:
    """Gauge function h on Z'.

    x > 0, k = x - 1/2:  (zz')^{1/4} ξ^{x/2} (1-ξ)^{(z+z')/2} sqrt((z+1)_k (z'+1)_k) / Γ(x+1/2)
    x < 0, k = -x - 1/2: (zz')^{1/4} ξ^{-x/2} (1-ξ)^{-(z+z')/2} sqrt((1-z)_k (1-z')_k) / Γ(-x+1/2)
    """
    x = as_half_integer(x)
    zp_, xi = mp.base, float(mp.xi)
    zz = float(zp_.zz)
    s = float(zp_.s)
    sign = 1 if x > 0 else -1
    k = int(abs(x) - Fraction(1, 2))
    # sum of logs of the positive pair products (z+1+j)(z'+1+j) or (1-z+j)(1-z'+j)
    log_poch = 0.0
    for j in range(k):
        pair = float(zp_.pair(1 + j)) if sign > 0 else float(zp_.pair(-1 - j))
        if pair <= 0:
            raise ArithmeticError("non-positive Pochhammer product; parameters inadmissible")
        log_poch += math.log(pair)
    ax = float(abs(x))
    log_h = (
        0.25 * math.log(zz)
        + 0.5 * ax * math.log(xi)
        + sign * 0.5 * s * math.log1p(-xi)
        + 0.5 * log_poch
        - math.lgamma(ax + 0.5)
    )
    return math.exp(log_h)


def _block(x, y) -> str:
    return ("+" if x > 0 else "-") + ("+" if y > 0 else "-")


def _numerator(m, x, y, dx: bool = False):
    """Block numerator; ``m(i, j, t, deriv)`` returns entries.  With dx the
    derivative in the first argument is returned instead."""
    b = _block(x, y)
    mx = lambda i, j: m(i, j, x, dx)  # noqa: E731
    my = lambda i, j: m(i, j, y, False)  # noqa: E731
    if b == "++":
        return -mx(1, 1) * my(2, 1) + mx(2, 1) * my(1, 1)
    if b == "+-":
        return mx(1, 1) * my(2, 2) - mx(2, 1) * my(1, 2)
    if b == "-+":
        return mx(2, 2) * my(1, 1) - my(2, 1) * mx(1, 2)
    return -mx(2, 2) * my(1, 2) + mx(1, 2) * my(2, 2)


def kernel_discrete(x, y, mp: MixedZParams, diagonal: str = "analytic", policy=DEFAULT_POLICY) -> float:
    """Discrete hypergeometric kernel on Z' x Z' in the symmetric gauge.

    ``diagonal`` selects the x = y completion: "analytic" differentiates the
    Gauss series term by term in its lower parameter; "richardson" extrapolates
    symmetric differences along the continuation in the second argument.
    """
    x, y = as_half_integer(x), as_half_integer(y)

    def m(i, j, t, deriv):
        return m_entry(i, j, float(t), mp, deriv, policy)

    if x != y:
        num = _numerator(m, x, y)
        return as_real(h_weight(x, mp) * h_weight(y, mp) * num / float(x - y), 1e-9)
    if diagonal == "analytic":
        return as_real(h_weight(x, mp) ** 2 * _numerator(m, x, x, dx=True), 1e-9)
    if diagonal == "richardson":
        return h_weight(x, mp) ** 2 * _richardson_diagonal(m, float(x))
    raise ValueError(f"unknown diagonal method {diagonal}")


def _richardson_diagonal(m, x: float, h0: float = 1e-2, levels: int = 4) -> float:
    """d/dx num(x, y) at y = x via (num(x, x-h) - num(x, x+h)) / (2h), using the
    antisymmetry of the numerator, extrapolated over h, h/2, h/4, ..."""
    sign_x = 1 if x > 0 else -1

    def num_at(y):
        b = ("+" if sign_x > 0 else "-") * 2
        mx = lambda i, j: m(i, j, x, False)  # noqa: E731
        my = lambda i, j: m(i, j, y, False)  # noqa: E731
        if b == "++":
            return -mx(1, 1) * my(2, 1) + mx(2, 1) * my(1, 1)
        return -mx(2, 2) * my(1, 2) + mx(1, 2) * my(2, 2)

    table = []
    h = h0
    for _ in range(levels):
        table.append([(num_at(x - h) - num_at(x + h)) / (2 * h)])
        h /= 2
    for k in range(1, levels):
        for i in range(k, levels):
            table[i].append(table[i][k - 1] + (table[i][k - 1] - table[i - 1][k - 1]) / (4**k - 1))
    return as_real(table[-1][-1], 1e-8)


def kernel_via_residues(x, y, mp: MixedZParams, policy=DEFAULT_POLICY) -> float:
    """Kernel in the residue form, built from the analytic residues of m at
    lattice points.  It is conjugate to ``kernel_discrete``:
    K(x, y) = g(x) K_res(x, y) / g(y) with g(t) = h(t) for t > 0 and 1/h(t) for t < 0,
    so both give the same determinants."""
    x, y = as_half_integer(x), as_half_integer(y)

    def m(i, j, t, deriv=False):
        return m_entry(i, j, float(t), mp, deriv, policy)

    def res(i, j, t):
        return m_residue(i, j, t, mp, policy)

    if x == y:
        if x > 0:
            val = m(1, 1, x, True) * res(2, 2, x) - m(2, 1, x, True) * res(1, 2, x)
        else:
            val = res(1, 1, x) * m(2, 2, x, True) - res(2, 1, x) * m(1, 2, x, True)
        return as_real(val, 1e-9)
    b = _block(x, y)
    if b == "++":
        num = m(1, 1, x) * res(2, 2, y) - m(2, 1, x) * res(1, 2, y)
    elif b == "+-":
        num = m(1, 1, x) * m(2, 2, y) - m(2, 1, x) * m(1, 2, y)
    elif b == "-+":
        num = -(res(1, 1, x) * res(2, 2, y) - res(2, 1, x) * res(1, 2, y))
    else:
        num = -(res(1, 1, x) * m(2, 2, y) - res(2, 1, x) * m(1, 2, y))
    return as_real(num / float(x - y), 1e-9)


def jump_check(x, mp: MixedZParams, policy=DEFAULT_POLICY) -> float:
    """Max-norm of Res_{u=x} m(u) - m(x) w(x), where w(x) is the nilpotent jump
    matrix: [[0, -h(x)^2], [0, 0]] for x > 0 and [[0, 0], [-h(x)^2, 0]] for x < 0."""
    x = as_half_integer(x)
    h2 = h_weight(x, mp) ** 2
    res = np.array([[m_residue(i, j, x, mp, policy) for j in (1, 2)] for i in (1, 2)])
    # only the column of m that is regular at x enters m(x) w(x)
    if x > 0:
        m11 = m_entry(1, 1, float(x), mp, policy=policy)
        m21 = m_entry(2, 1, float(x), mp, policy=policy)
        mw = np.array([[0, -h2 * m11], [0, -h2 * m21]])
    else:
        m12 = m_entry(1, 2, float(x), mp, policy=policy)
        m22 = m_entry(2, 2, float(x), mp, policy=policy)
        mw = np.array([[-h2 * m12, 0], [-h2 * m22, 0]])
    return float(np.max(np.abs(res - mw)))


def rho_m_det(points, mp: MixedZParams, kernel=kernel_discrete, **kwargs) -> float:
    """Correlation function det[K(x_i, x_j)] at distinct lattice points."""
    pts = [as_half_integer(p) for p in points]
    if len(set(pts)) != len(pts):
        raise ValueError("points must be distinct")
    if not pts:
        return 1.0
    return float(det([[kernel(x, y, mp, **kwargs) for y in pts] for x in pts]))


def half_integer_range(lo, hi) -> list[Fraction]:
    lo, hi = as_half_integer(lo), as_half_integer(hi)
    return [lo + k for k in range(int(hi - lo) + 1)]


def kernel_grid(points, mp: MixedZParams, method: str = "hypergeometric") -> list[KernelEvaluation]:
    fn = kernel_discrete if method == "hypergeometric" else kernel_via_residues
    pts = [as_half_integer(p) for p in points]
    return [KernelEvaluation(x, y, fn(x, y, mp)) for x in pts for y in pts]


def grid_to_csv(rows: list[KernelEvaluation], metadata: dict | None = None) -> str:
    buf = io.StringIO()
    for k, v in (metadata or {}).items():
        buf.write(f"# {k}: {v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "K"])
    for r in rows:
        w.writerow([str(r.x), str(r.y), repr(float(r.value))])
    return buf.getvalue()


def grid_to_json(rows: list[KernelEvaluation]) -> list[dict]:
    return [{"x": str(r.x), "y": str(r.y), "K": float(r.value)} for r in rows]


# --- continuous regime -------------------------------------------------------------


def two_point_avg_omega(u, v, zp: ZParams, policy=DEFAULT_POLICY):
    """<E(v)H(u)> over the Thoma simplex, in the polydisc |1/u|, |1/v| < 1:

        F3(z,-z,z',-z'; zz'; 1/u, 1/v)
        + F3(z+1,1-z,z'+1,1-z'; zz'+2; 1/u, 1/v) / (uv(zz'+1))
    """
    z, zq = _zkey(zp)
    zz = as_real(z * zq)
    uc, vc = complex(u), complex(v)
    x, y = 1 / uc, 1 / vc
    val = f3(z, -z, zq, -zq, zz, x, y, policy)
    val += f3(z + 1, 1 - z, zq + 1, 1 - zq, zz + 2, x, y, policy) / (uc * vc * (zz + 1))
    return _realify(complex(val), u, v)


def _cpow(base: complex, expo) -> complex:
    """Principal branch base**expo; refuses bases on the cut."""
    base = complex(base)
    if base == 0 or (base.imag == 0 and base.real < 0):
        raise PoleError(f"power base {base} on the branch cut")
    return cmath.exp(complex(expo) * cmath.log(base))


def _whittaker_params(zp: ZParams):
    z, zq = _zkey(zp)
    S = as_real(z + zq)
    mu = (z - zq) / 2
    zz = as_real(z * zq)
    return S, mu, zz


def two_point_avg_tilde(u, v, zp: ZParams, policy=DEFAULT_POLICY):
    """<H(u)E(v)> over the cone, as a product of Whittaker functions:

        e^{-(u+v)/2} [ (-v)^{-(S+1)/2} W_{(S+1)/2,μ}(-v) (-u)^{(S-1)/2} W_{(1-S)/2,μ}(-u)
                       + zz' (-v)^{-(S+1)/2} W_{(S-1)/2,μ}(-v) (-u)^{(S-1)/2} W_{-(S+1)/2,μ}(-u) ]

    with S = z + z' and μ = (z - z')/2.
    """
    S, mu, zz = _whittaker_params(zp)
    mu_c, mv_c = -complex(u), -complex(v)
    pv = _cpow(mv_c, -(S + 1) / 2)
    pu = _cpow(mu_c, (S - 1) / 2)
    W = lambda k, x: complex(whittaker_w(k, mu, x, policy))  # noqa: E731
    first = W((S + 1) / 2, mv_c) * W((1 - S) / 2, mu_c)
    second = zz * W((S - 1) / 2, mv_c) * W(-(S + 1) / 2, mu_c)
    val = cmath.exp(-(complex(u) + complex(v)) / 2) * pv * pu * (first + second)
    return _realify(val, u, v)


@lru_cache(maxsize=65536)
def _w_entry(z, zq, i, j, u, deriv, policy):
    S = as_real(z + zq)
    mu = (z - zq) / 2
    rz = math.sqrt(as_real(z * zq))
    if (i, j) in ((1, 1), (2, 1)):
        # u^{-(S+1)/2} e^{u/2} W_{k,μ}(u)
        kappa = (S + 1) / 2 if (i, j) == (1, 1) else (S - 1) / 2
        coef = 1.0 if (i, j) == (1, 1) else -rz
        alpha = -(S + 1) / 2
        base = _cpow(u, alpha) * cmath.exp(u / 2)
        if not deriv:
            return coef * base * complex(whittaker_w(kappa, mu, u, policy))
        w, dw = whittaker_w_with_derivative(kappa, mu, u, policy)
        return coef * base * (complex(w) * (alpha / u + 0.5) + complex(dw))
    # (-u)^{(S-1)/2} e^{-u/2} W_{k,μ}(-u)
    kappa = (-S - 1) / 2 if (i, j) == (1, 2) else (1 - S) / 2
    coef = rz if (i, j) == (1, 2) else 1.0
    beta = (S - 1) / 2
    base = _cpow(-u, beta) * cmath.exp(-u / 2)
    if not deriv:
        return coef * base * complex(whittaker_w(kappa, mu, -u, policy))
    w, dw = whittaker_w_with_derivative(kappa, mu, -u, policy)
    return coef * base * (complex(w) * (beta / u - 0.5) - complex(dw))


def whittaker_m_entry(i: int, j: int, u, zp: ZParams, deriv: bool = False, policy=DEFAULT_POLICY):
    """Entries of the continuous matrix (S = z + z', μ = (z - z')/2):

        m11(u) = u^{-(S+1)/2} e^{u/2} W_{(S+1)/2,μ}(u)
        m12(u) = sqrt(zz') (-u)^{(S-1)/2} e^{-u/2} W_{-(S+1)/2,μ}(-u)
        m21(u) = -sqrt(zz') u^{-(S+1)/2} e^{u/2} W_{(S-1)/2,μ}(u)
        m22(u) = (-u)^{(S-1)/2} e^{-u/2} W_{(1-S)/2,μ}(-u)

    At real u only the entries whose Whittaker argument is positive are
    defined (m11, m21 for u > 0; m12, m22 for u < 0).
    """
    z, zq = _zkey(zp)
    return _w_entry(z, zq, i, j, complex(u), bool(deriv), policy)


def whittaker_m_matrix(u, zp: ZParams, policy=DEFAULT_POLICY) -> MMatrix:
    vals = [whittaker_m_entry(i, j, u, zp, policy=policy) for i, j in ((1, 1), (1, 2), (2, 1), (2, 2))]
    return MMatrix(*vals, u=complex(u), regime="whittaker")


def h_whittaker(x, zp: ZParams) -> float:
    """x > 0: (zz')^{1/4} x^{S/2} e^{-x/2} / sqrt(Γ(z+1)Γ(z'+1));
    x < 0: (zz')^{1/4} (-x)^{-S/2} e^{x/2} / sqrt(Γ(1-z)Γ(1-z'))."""
    x = float(x)
    if x == 0:
        raise ValueError("h is defined on the punctured line")
    z, zq = _zkey(zp)
    S = as_real(z + zq)
    zz = as_real(z * zq)
    if x > 0:
        lg = as_real(loggamma(z + 1) + loggamma(zq + 1), 1e-9)
        log_h = 0.25 * math.log(zz) + 0.5 * S * math.log(x) - x / 2 - 0.5 * lg
    else:
        lg = as_real(loggamma(1 - z) + loggamma(1 - zq), 1e-9)
        log_h = 0.25 * math.log(zz) - 0.5 * S * math.log(-x) + x / 2 - 0.5 * lg
    return math.exp(log_h)


def kernel_whittaker(x, y, zp: ZParams, policy=DEFAULT_POLICY) -> float:
    """Whittaker kernel on R* x R* in the symmetric gauge; the diagonal is the
    derivative of the block numerator in the first argument."""
    x, y = float(x), float(y)
    if x == 0 or y == 0:
        raise ValueError("kernel is defined on the punctured line")

    def m(i, j, t, deriv):
        return whittaker_m_entry(i, j, t, zp, deriv, policy)

    if x != y:
        num = _numerator(m, x, y)
        return as_real(h_whittaker(x, zp) * h_whittaker(y, zp) * num / (x - y), 1e-8)
    return as_real(h_whittaker(x, zp) ** 2 * _numerator(m, x, x, dx=True), 1e-8)


def rho1_whittaker(x, zp: ZParams, policy=DEFAULT_POLICY) -> float:
    return kernel_whittaker(x, x, zp, policy)


def he_factorized_whittaker(v, u, zp: ZParams, policy=DEFAULT_POLICY):
    """m11(v) m22(u) - m21(v) m12(u) in the continuous regime, to be compared
    with <E(-v)H(u)> over the cone."""
    m = lambda i, j, t: whittaker_m_entry(i, j, t, zp, policy=policy)  # noqa: E731
    return m(1, 1, v) * m(2, 2, u) - m(2, 1, v) * m(1, 2, u)
