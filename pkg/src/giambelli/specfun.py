"""Special functions: Pochhammer symbols, Gauss 2F1 at xi/(xi-1), residues of 2F1
in its lower parameter, the two-variable F3 series and Whittaker W.

All series share one termination rule (``PrecisionPolicy``): stop once three
consecutive terms are below ``rtol * |partial sum|``, never before
``min_terms`` terms.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number

import numpy as np
from scipy import integrate, special


class PoleError(ValueError):
    """Evaluation requested at a pole."""


class ConvergenceError(ArithmeticError):
    """A series or quadrature did not reach the requested accuracy."""


@dataclass(frozen=True)
class PrecisionPolicy:
    rtol: float = 1e-13
    max_terms: int = 200_000
    min_terms: int = 16
    quad_rtol: float = 1e-12
    quad_limit: int = 400

    def __post_init__(self):
        if not self.rtol > 0:
            raise ValueError("rtol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")

    def to_dict(self) -> dict:
        return {
            "rtol": self.rtol,
            "max_terms": self.max_terms,
            "min_terms": self.min_terms,
            "quad_rtol": self.quad_rtol,
        }


DEFAULT_POLICY = PrecisionPolicy()


def _c(x) -> complex:
    return complex(x)


def _is_real(*xs) -> bool:
    return all(not isinstance(x, complex) or x.imag == 0 for x in xs)


def _out(value: complex, real: bool):
    return value.real if real else value


def is_nonpositive_integer(c) -> bool:
    c = complex(c)
    return c.imag == 0 and c.real <= 0 and c.real == math.floor(c.real)


def pochhammer(a, k: int):
    """Rising factorial (a)_k, in the arithmetic of ``a``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = 1 if isinstance(a, (int, Fraction)) else a * 0 + 1
    for j in range(k):
        out *= a + j
    return out


def loggamma(x):
    """Principal branch of log Gamma for real or complex arguments."""
    return complex(special.loggamma(complex(x)))


def _sum_series(first: complex, ratio, policy: PrecisionPolicy) -> complex:
    """Sum t_0 + t_1 + ... with t_{k+1} = t_k * ratio(k)."""
    term = first
    total = first
    small = 0
    for k in range(policy.max_terms):
        term = term * ratio(k)
        total += term
        if abs(term) <= policy.rtol * abs(total):
            small += 1
            if small >= 3 and k + 2 >= policy.min_terms:
                return total
        else:
            small = 0
    raise ConvergenceError(f"series not converged after {policy.max_terms} terms")


def hyp2f1_series(a, b, c, x, policy: PrecisionPolicy = DEFAULT_POLICY, deriv: int = 0):
    """Direct Gauss series (and its term-wise derivatives) for |x| < 1."""
    a, b, c, x = _c(a), _c(b), _c(c), _c(x)
    if is_nonpositive_integer(c):
        raise PoleError(f"2F1 lower parameter at a pole: c={c}")
    if abs(x) >= 1:
        raise ValueError(f"direct series needs |x| < 1, got {x}")
    # d^r/dx^r F(a,b;c;x) = (a)_r (b)_r/(c)_r F(a+r,b+r;c+r;x)
    pref = pochhammer(a, deriv) * pochhammer(b, deriv) / pochhammer(c, deriv)
    a, b, c = a + deriv, b + deriv, c + deriv
    val = _sum_series(1 + 0j, lambda k: (a + k) * (b + k) / ((c + k) * (k + 1)) * x, policy)
    return pref * val


def gauss_2f1_xi(a, b, c, xi, policy: PrecisionPolicy = DEFAULT_POLICY):
    """F(a, b; c; xi/(xi-1)) for 0 < xi < 1 via the Pfaff transformation

        F(a, b; c; xi/(xi-1)) = (1-xi)^a F(a, c-b; c; xi).
    """
    real = _is_real(a, b, c)
    xi = float(xi)
    if not 0 <= xi < 1:
        raise ValueError(f"xi must lie in [0, 1), got {xi}")
    a, b, c = _c(a), _c(b), _c(c)
    if is_nonpositive_integer(c):
        raise PoleError(f"2F1 lower parameter at a pole: c={c}")
    cb = c - b
    val = _sum_series(1 + 0j, lambda k: (a + k) * (cb + k) / ((c + k) * (k + 1)) * xi, policy)
    return _out(cmath.exp(a * math.log1p(-xi)) * val, real)


def gauss_2f1_xi_dc(a, b, c, xi, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Derivative in c of F(a, b; c; xi/(xi-1)), from the term-wise differentiated
    Pfaff series.

    With t_k the series terms and r_k = t_{k+1}/t_k, the derivative terms obey
    d_{k+1} = d_k r_k + t_k (a+k) b xi / ((k+1)(c+k)^2), which stays finite when
    c - b + k vanishes.
    """
    real = _is_real(a, b, c)
    xi = float(xi)
    a, b, c = _c(a), _c(b), _c(c)
    if is_nonpositive_integer(c):
        raise PoleError(f"2F1 lower parameter at a pole: c={c}")
    cb = c - b
    t, d = 1 + 0j, 0j
    total_t, total_d = 1 + 0j, 0j
    small = 0
    for k in range(policy.max_terms):
        r = (a + k) * (cb + k) / ((c + k) * (k + 1)) * xi
        d = d * r + t * (a + k) * b * xi / ((k + 1) * (c + k) ** 2)
        t = t * r
        total_t += t
        total_d += d
        if abs(d) <= policy.rtol * abs(total_d) and abs(t) <= policy.rtol * abs(total_t):
            small += 1
            if small >= 3 and k + 2 >= policy.min_terms:
                return _out(cmath.exp(a * math.log1p(-xi)) * total_d, real)
        else:
            small = 0
    raise ConvergenceError(f"series not converged after {policy.max_terms} terms")


def hyp2f1(a, b, c, zeta, policy: PrecisionPolicy = DEFAULT_POLICY):
    """F(a, b; c; zeta) for Re zeta < 1/2 (Pfaff) or |zeta| < 1 (direct)."""
    real = _is_real(a, b, c, zeta)
    a, b, c, zeta = _c(a), _c(b), _c(c), _c(zeta)
    if is_nonpositive_integer(c):
        raise PoleError(f"2F1 lower parameter at a pole: c={c}")
    if zeta.real < 0.5:
        x = zeta / (zeta - 1)
        val = _sum_series(1 + 0j, lambda k: (a + k) * (c - b + k) / ((c + k) * (k + 1)) * x, policy)
        val *= cmath.exp(-a * cmath.log(1 - zeta))
    elif abs(zeta) < 1:
        val = hyp2f1_series(a, b, c, zeta, policy)
    else:
        raise ValueError(f"argument {zeta} outside the supported region")
    return _out(val, real)


def residue_2f1_c(a, b, n: int, zeta, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Residue of c -> F(a, b; c; zeta) at c = -n:

        (-1)^n zeta^(n+1) (a)_{n+1} (b)_{n+1} / (n! (n+1)!) F(a+n+1, b+n+1; n+2; zeta).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    real = _is_real(a, b, zeta)
    a, b, zeta = _c(a), _c(b), _c(zeta)
    coef = pochhammer(a, n + 1) * pochhammer(b, n + 1)
    if coef == 0:
        return 0.0 if real else 0j
    coef *= (-1) ** n * zeta ** (n + 1) / (math.factorial(n) * math.factorial(n + 1))
    val = coef * _c(hyp2f1(a + n + 1, b + n + 1, n + 2, zeta, policy))
    return _out(val, real)


def f3(a, a2, b, b2, c, x, y, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Appell-type double series

        sum_{m,n} (a)_m (a2)_n (b)_m (b2)_n / ((c)_{m+n} m! n!) x^m y^n

    summed by total degree, for |x| < 1 and |y| < 1.
    """
    real = _is_real(a, a2, b, b2, c, x, y)
    a, a2, b, b2, c, x, y = map(_c, (a, a2, b, b2, c, x, y))
    if abs(x) >= 1 or abs(y) >= 1:
        raise ValueError("f3 series needs |x| < 1 and |y| < 1")
    if is_nonpositive_integer(c):
        raise PoleError(f"F3 lower parameter at a pole: c={c}")
    A, B = [1 + 0j], [1 + 0j]
    cinv = 1 + 0j
    total = 1 + 0j
    small = 0
    for D in range(1, policy.max_terms):
        m = D - 1
        A.append(A[m] * (a + m) * (b + m) / (m + 1) * x)
        B.append(B[m] * (a2 + m) * (b2 + m) / (m + 1) * y)
        cinv /= c + m
        block = cinv * sum(A[i] * B[D - i] for i in range(D + 1))
        total += block
        if abs(block) <= policy.rtol * abs(total):
            small += 1
            if small >= 3 and D + 1 >= policy.min_terms:
                return _out(total, real)
        else:
            small = 0
    raise ConvergenceError(f"f3 not converged by total degree {policy.max_terms}")


# --- Whittaker W -----------------------------------------------------------


def _u_integral(a: complex, b: complex, x: complex, policy: PrecisionPolicy) -> complex:
    """Tricomi U(a, b, x) = (1/Gamma(a)) int_0^inf e^{-xt} t^{a-1} (1+t)^{b-a-1} dt,
    Re a > 0, with the ray of integration rotated by -arg(x)."""
    phi = cmath.phase(x)
    r = abs(x)
    rot = cmath.exp(-1j * phi)

    def integrand(s):
        t = s * rot
        return cmath.exp(-r * s + (a - 1) * cmath.log(t) + (b - a - 1) * cmath.log(1 + t)) * rot

    opts = dict(epsabs=0.0, epsrel=policy.quad_rtol, limit=policy.quad_limit)
    # split at the scale where the exponential starts to bite
    edge = max(1.0, 10.0 / r)
    # quad warns when one real/imaginary piece is tiny relative to its own
    # size; judge the error against the whole value instead
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re1, e1 = integrate.quad(lambda s: integrand(s).real, 0, edge, **opts)
        im1, e2 = integrate.quad(lambda s: integrand(s).imag, 0, edge, **opts)
        re2, e3 = integrate.quad(lambda s: integrand(s).real, edge, np.inf, **opts)
        im2, e4 = integrate.quad(lambda s: integrand(s).imag, edge, np.inf, **opts)
    val = complex(re1 + re2, im1 + im2)
    err = e1 + e2 + e3 + e4
    if not err <= 1e3 * policy.quad_rtol * abs(val):
        raise ConvergenceError(f"U integral inaccurate: error {err:.2e} for value {abs(val):.2e}")
    return val / complex(special.gamma(a))


def _u_polynomial(n: int, b: complex, x: complex) -> complex:
    """U(-n, b, x) = (-1)^n Σ_s (b)_n (-n)_s / ((b)_s s!) x^s, a polynomial of degree n."""
    total = 0j
    term = complex(pochhammer(b, n))
    for s in range(n + 1):
        total += term
        term = term * (-n + s) / ((b + s) * (s + 1)) * x
    return (-1) ** n * total


def _tricomi_pair(a: complex, b: complex, x: complex, policy: PrecisionPolicy):
    """U(a, b, x) and U(a-1, b, x); quadrature at Re a in [1, 2), then the
    three-term recurrence U(a-1) = -(b-2a-x) U(a) - a(a-b+1) U(a+1) downwards.
    For a in {0, -1, -2, ...} both values are polynomials and are summed directly."""
    if a.imag == 0 and a.real <= 0 and a.real == math.floor(a.real) and not is_nonpositive_integer(b):
        n = int(-a.real)
        return _u_polynomial(n, b, x), _u_polynomial(n + 1, b, x)
    shift = max(0, math.ceil(1 - a.real))
    top = a + shift
    u_hi = _u_integral(top + 1, b, x, policy)
    u = _u_integral(top, b, x, policy)
    cur = top
    # walk down until cur == a - 1
    for _ in range(shift + 1):
        u_lo = -(b - 2 * cur - x) * u - cur * (cur - b + 1) * u_hi
        u_hi, u = u, u_lo
        cur = cur - 1
    # now u = U(a-1), u_hi = U(a)
    return u_hi, u


def tricomi_u(a, b, x, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    x = _c(x)
    if x == 0 or (x.imag == 0 and x.real < 0):
        raise ValueError(f"tricomi_u needs x off (-inf, 0], got {x}")
    return _tricomi_pair(_c(a), _c(b), x, policy)[0]


def _whittaker_pair(kappa, mu, x, policy):
    kappa, mu, x = _c(kappa), _c(mu), _c(x)
    if x == 0 or (x.imag == 0 and x.real < 0):
        raise ValueError(f"whittaker_w needs x off (-inf, 0], got {x}")
    if mu.real < 0:
        mu = -mu  # W is even in mu; this choice maximises Re a
    a = 0.5 + mu - kappa
    b = 1 + 2 * mu
    u, u_lower = _tricomi_pair(a, b, x, policy)
    pref = cmath.exp(-x / 2 + (mu + 0.5) * cmath.log(x))
    # lowering a by one raises kappa by one
    return pref * u, pref * u_lower


def _whittaker_out(val: complex, kappa, mu, x):
    mu = complex(mu)
    real_case = _is_real(kappa, x) and complex(x).real > 0 and (mu.imag == 0 or mu.real == 0)
    if real_case:
        if abs(val.imag) > 1e-8 * max(abs(val), 1e-300):
            raise ConvergenceError(f"unexpected imaginary part in W: {val}")
        return val.real
    return val


def whittaker_w(kappa, mu, x, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Whittaker W_{kappa,mu}(x) = e^{-x/2} x^{mu+1/2} U(1/2+mu-kappa, 1+2mu, x).

    ``x`` may be complex off the negative real axis.  Real results are returned
    as floats when kappa and x are real and mu is real or purely imaginary.
    """
    w, _ = _whittaker_pair(kappa, mu, x, policy)
    return _whittaker_out(w, kappa, mu, x)


def whittaker_w_with_derivative(kappa, mu, x, policy: PrecisionPolicy = DEFAULT_POLICY):
    """(W, dW/dx) using x W'_{k,m}(x) = (x/2 - k) W_{k,m}(x) - W_{k+1,m}(x)."""
    w, w_up = _whittaker_pair(kappa, mu, x, policy)
    xc = _c(x)
    dw = ((xc / 2 - _c(kappa)) * w - w_up) / xc
    return _whittaker_out(w, kappa, mu, x), _whittaker_out(dw, kappa, mu, x)


def is_number(x) -> bool:
    return isinstance(x, Number)
