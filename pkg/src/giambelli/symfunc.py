"""Evaluations of symmetric functions.

Every evaluation goes through an algebra morphism of Λ, fixed by the images of
the power sums p_k or of the complete homogeneous functions h_k:

* points x_1..x_N (ordinary Schur polynomials),
* a partition λ, where p_k(λ) = Σ a_i^k + (-1)^(k-1) Σ b_i^k over modified
  Frobenius coordinates,
* a point ω = (α, β, δ) of the cone over the Thoma simplex, with p_1(ω) = δ.

Schur values come from the Jacobi-Trudi determinant; multiparameter Schur
functions s_{μ;a} from the shifted determinant of the h_{k;a}.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from .linalg import det, is_exact
from .partition import Partition, dim_skew, falling_factorial, hook
from .specfun import PoleError


# --- parameter sequences ----------------------------------------------------


@dataclass(frozen=True)
class ParameterSequence:
    """An integer-indexed sequence a_i given by a closed form.

    ``kind`` is one of "affine" (a_i = slope*i + intercept), "table" (explicit
    values with a default), "shift" or "dual"; the last two wrap another
    sequence.  Instances are hashable, so derived tables can be cached.
    """

    kind: str
    params: tuple

    @staticmethod
    def affine(slope, intercept) -> "ParameterSequence":
        return ParameterSequence("affine", (slope, intercept))

    @staticmethod
    def zero() -> "ParameterSequence":
        return ParameterSequence.affine(0, 0)

    @staticmethod
    def constant(c) -> "ParameterSequence":
        return ParameterSequence.affine(0, c)

    @staticmethod
    def frobenius() -> "ParameterSequence":
        """a_i = i - 1/2."""
        return ParameterSequence.affine(1, Fraction(-1, 2))

    @staticmethod
    def from_values(values: Mapping[int, object], default=0) -> "ParameterSequence":
        return ParameterSequence("table", (tuple(sorted(values.items())), default))

    def __call__(self, i: int):
        kind, prm = self.kind, self.params
        if kind == "affine":
            return prm[0] * i + prm[1]
        if kind == "table":
            return dict(prm[0]).get(i, prm[1])
        if kind == "shift":
            return prm[0](i + prm[1])
        if kind == "dual":
            return -prm[0](1 - i)
        raise ValueError(f"unknown sequence kind {kind}")

    def values(self, start: int, stop: int) -> list:
        return [self(i) for i in range(start, stop)]

    def shift(self, r: int) -> "ParameterSequence":
        """τ^r a, with (τ^r a)_i = a_{i+r}."""
        if r == 0:
            return self
        if self.kind == "affine":
            s, b = self.params
            return ParameterSequence.affine(s, b + s * r)
        if self.kind == "shift":
            inner, r0 = self.params
            return inner.shift(r0 + r)
        return ParameterSequence("shift", (self, r))

    def dual(self) -> "ParameterSequence":
        """â_i = -a_{1-i}."""
        if self.kind == "affine":
            s, b = self.params
            return ParameterSequence.affine(s, -s - b)
        if self.kind == "dual":
            return self.params[0]
        return ParameterSequence("dual", (self,))


# --- Newton identities ------------------------------------------------------


def _divide(x, k: int):
    return Fraction(x, k) if isinstance(x, int) else x / k


def h_from_power_sums(p: Callable[[int], object], kmax: int) -> list:
    """h_0..h_kmax from k h_k = Σ_{i=1}^k p_i h_{k-i}."""
    pk = [None] + [p(i) for i in range(1, kmax + 1)]
    h = [1]
    for k in range(1, kmax + 1):
        h.append(_divide(sum(pk[i] * h[k - i] for i in range(1, k + 1)), k))
    return h


def e_from_power_sums(p: Callable[[int], object], kmax: int) -> list:
    """e_0..e_kmax from k e_k = Σ_{i=1}^k (-1)^(i-1) p_i e_{k-i}."""
    pk = [None] + [p(i) for i in range(1, kmax + 1)]
    e = [1]
    for k in range(1, kmax + 1):
        e.append(_divide(sum((-1) ** (i - 1) * pk[i] * e[k - i] for i in range(1, k + 1)), k))
    return e


def jacobi_trudi(lam: Partition, h: Sequence) -> object:
    """det[h_{λ_i - i + j}] for a list h = [h_0, h_1, ...] of images."""
    n = len(lam)
    if n == 0:
        return 1

    def hk(k):
        return 0 if k < 0 else h[k]

    return det([[hk(lam[i] - i + j) for j in range(n)] for i in range(n)])


# --- Schur polynomials in finitely many variables ----------------------------


class RepeatedPointsError(ValueError):
    """The bialternant formula is 0/0 at repeated points."""


def h_at_points(xs: Sequence, kmax: int) -> list:
    return h_from_power_sums(lambda k: sum(x**k for x in xs), kmax)


def schur_bialternant(lam: Partition, xs: Sequence):
    """det(x_i^{λ_j+N-j}) / det(x_i^{N-j})."""
    n = len(xs)
    if len(lam) > n:
        return 0
    if len(set(xs)) != n:
        raise RepeatedPointsError("bialternant formula needs distinct points")
    num = det([[x ** (lam[j] + n - 1 - j) for j in range(n)] for x in xs])
    den = det([[x ** (n - 1 - j) for j in range(n)] for x in xs])
    return num / den


def schur_at_points(lam: Partition, xs: Sequence, method: str = "jacobi_trudi"):
    """s_λ(x_1, ..., x_N); zero when λ has more than N rows."""
    if len(lam) > len(xs):
        return 0
    if method == "bialternant":
        try:
            return schur_bialternant(lam, xs)
        except RepeatedPointsError:
            pass
    elif method != "jacobi_trudi":
        raise ValueError(f"unknown method {method}")
    return jacobi_trudi(lam, h_at_points(xs, lam.size))


# --- multiparameter Schur functions ------------------------------------------


@lru_cache(maxsize=None)
def _transition(a: ParameterSequence, kmax: int) -> tuple:
    """Rows T[n] with h_{n;a} = Σ_j T[n][j] h_j, for n <= kmax.

    Comes from h_n = Σ_{j=1}^n h_{n-j}(a_1, ..., a_j) h_{j;a}, the u^{-n}
    coefficient of Σ_j h_{j;a} / ((u-a_1)...(u-a_j)) = Σ_n h_n u^{-n}.
    """
    avals = [a(i) for i in range(1, kmax + 1)]
    # hom[j][m] = h_m(a_1..a_j)
    hom = [[1] + [0] * kmax]
    for j in range(1, kmax + 1):
        row = [1]
        for m in range(1, kmax + 1):
            row.append(hom[j - 1][m] + avals[j - 1] * row[m - 1])
        hom.append(row)
    T = [[1] + [0] * kmax]
    for n in range(1, kmax + 1):
        row = [0] * (kmax + 1)
        row[n] = 1
        for j in range(1, n):
            coef = hom[j][n - j]
            if coef:
                for i in range(1, j + 1):
                    row[i] -= coef * T[j][i]
        T.append(row)
    return tuple(tuple(r) for r in T)


def multiparam_h(k: int, a: ParameterSequence, hvals) -> object:
    """Image of h_{k;a} given the images hvals[j] of h_j, j = 1..k."""
    if k < 0:
        return 0
    if k == 0:
        return 1
    row = _transition(a, k)[k]
    total = 0
    for j in range(1, k + 1):
        if row[j]:
            try:
                hj = hvals[j]
            except (KeyError, IndexError) as exc:
                raise ValueError(f"missing image of h_{j}") from exc
            total += row[j] * hj
    return total


def multiparam_schur(mu: Partition, a: ParameterSequence, hvals) -> object:
    """s_{μ;a} = det[h_{μ_i - i + j; τ^{1-j} a}]."""
    n = len(mu)
    if n == 0:
        return 1
    rows = [[multiparam_h(mu[i] - i + j, a.shift(-j), hvals) for j in range(n)] for i in range(n)]
    return det(rows)


def frobenius_schur_at(mu: Partition, lam: Partition) -> Fraction:
    """Fs_μ(λ) = dim(μ, λ) n(n-1)...(n-m+1) / dim λ with n = |λ|, m = |μ|."""
    n, m = lam.size, mu.size
    if n < m:
        return Fraction(0)
    return Fraction(dim_skew(mu, lam) * falling_factorial(n, m), lam.dim)


def giambelli_matrix(lam: Partition, value: Callable[[Partition], object]) -> list:
    """[value((p_i | q_j))] over the Frobenius coordinates of λ."""
    fc = lam.frobenius
    return [[value(hook(p, q)) for q in fc.q] for p in fc.p]


# --- specialization at partitions --------------------------------------------


def power_sum_at_partition(k: int, lam: Partition) -> Fraction:
    if k < 1:
        raise ValueError("k must be positive")
    a, b = lam.modified_frobenius
    sign = 1 if k % 2 == 1 else -1
    return sum((x**k for x in a), Fraction(0)) + sign * sum((y**k for y in b), Fraction(0))


def h_at_partition(lam: Partition, kmax: int) -> list:
    return h_from_power_sums(lambda k: power_sum_at_partition(k, lam), kmax)


def _pole_check(den, where):
    if den == 0:
        raise PoleError(f"pole hit at {where}")


def H_at(u, target):
    """H(u) = Π (u + b_i)/(u - a_i) on a partition, or
    e^{γ/u} Π (1 + β_i/u)/(1 - α_i/u) on an OmegaPoint."""
    if isinstance(target, OmegaPoint):
        out = cmath.exp(target.gamma / u) if target.gamma else 1
        for x in target.alpha:
            _pole_check(1 - x / u, u)
            out = out / (1 - x / u)
        for y in target.beta:
            out = out * (1 + y / u)
        return out
    a, b = target.modified_frobenius
    out = 1
    for x, y in zip(a, b):
        _pole_check(u - x, u)
        out = out * (u + y) / (u - x)
    return out


def E_at(v, target):
    """E(v) = Π (v + a_i)/(v - b_i) on a partition, or
    e^{γ/v} Π (1 + α_i/v)/(1 - β_i/v) on an OmegaPoint."""
    if isinstance(target, OmegaPoint):
        out = cmath.exp(target.gamma / v) if target.gamma else 1
        for y in target.beta:
            _pole_check(1 - y / v, v)
            out = out / (1 - y / v)
        for x in target.alpha:
            out = out * (1 + x / v)
        return out
    a, b = target.modified_frobenius
    out = 1
    for x, y in zip(a, b):
        _pole_check(v - y, v)
        out = out * (v + x) / (v - y)
    return out


# --- specialization at points of the Thoma cone -------------------------------


@dataclass(frozen=True)
class OmegaPoint:
    """ω = (α, β, δ) with finitely many nonzero α_i, β_i."""

    alpha: tuple = ()
    beta: tuple = ()
    delta: float = 0.0
    gamma: float = field(init=False)

    def __post_init__(self):
        alpha = tuple(float(x) for x in self.alpha)
        beta = tuple(float(x) for x in self.beta)
        for name, seq in (("alpha", alpha), ("beta", beta)):
            if any(x < 0 for x in seq):
                raise ValueError(f"{name} must be nonnegative")
            if any(seq[i] < seq[i + 1] for i in range(len(seq) - 1)):
                raise ValueError(f"{name} must be nonincreasing")
        delta = float(self.delta)
        gamma = delta - sum(alpha) - sum(beta)
        if gamma < -1e-12 * max(1.0, delta):
            raise ValueError("sum of alpha and beta exceeds delta")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "gamma", max(gamma, 0.0))

    @staticmethod
    def from_partition(lam: Partition, n: int | None = None, scale: float = 1.0) -> "OmegaPoint":
        """(scale * a/n, scale * b/n, scale) with n = |λ| by default."""
        n = lam.size if n is None else n
        if n == 0:
            return OmegaPoint((), (), scale)
        a, b = lam.modified_frobenius
        return OmegaPoint(
            tuple(scale * float(x) / n for x in a), tuple(scale * float(y) / n for y in b), scale
        )


def power_sum_at_omega(k: int, omega: OmegaPoint) -> float:
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return omega.delta
    sign = 1 if k % 2 == 1 else -1
    return sum(x**k for x in omega.alpha) + sign * sum(y**k for y in omega.beta)


def h_at_omega(omega: OmegaPoint, kmax: int) -> list:
    return h_from_power_sums(lambda k: power_sum_at_omega(k, omega), kmax)


def schur_at_omega(lam: Partition, omega: OmegaPoint) -> float:
    return jacobi_trudi(lam, h_at_omega(omega, lam.size))


def schur_at_partition(lam: Partition, target: Partition):
    """Ordinary s_λ under the partition specialization (exact)."""
    return jacobi_trudi(lam, h_at_partition(target, lam.size))


__all__ = [
    "ParameterSequence",
    "OmegaPoint",
    "RepeatedPointsError",
    "h_from_power_sums",
    "e_from_power_sums",
    "jacobi_trudi",
    "h_at_points",
    "schur_bialternant",
    "schur_at_points",
    "multiparam_h",
    "multiparam_schur",
    "frobenius_schur_at",
    "giambelli_matrix",
    "power_sum_at_partition",
    "h_at_partition",
    "H_at",
    "E_at",
    "power_sum_at_omega",
    "h_at_omega",
    "schur_at_omega",
    "schur_at_partition",
    "is_exact",
]
