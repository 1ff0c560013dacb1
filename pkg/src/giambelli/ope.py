"""Orthogonal polynomial ensembles over finitely supported measures, in exact
rational arithmetic.

A configuration is an unordered N-subset X of the atoms with probability
proportional to V(X)^2 Π_{x in X} w(x), where V is the Vandermonde product.
For an N-subset this normalisation constant equals det(A_{i+j})_{i,j<N} in
terms of the moments A_n (Heine), which is used as a cross-check.

On such configurations H(u)(X) = Π u/(u - x_i) and E(v)(X) = Π (v + x_i)/v.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .linalg import det_exact, solve_exact
from .partition import Partition, hook
from .symfunc import schur_at_points


def _rational(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class DiscreteMeasure:
    atoms: tuple[Fraction, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        atoms = tuple(_rational(t) for t in self.atoms)
        weights = tuple(_rational(w) for w in self.weights)
        if len(atoms) != len(weights):
            raise ValueError("atoms and weights differ in length")
        if not atoms:
            raise ValueError("measure has no atoms")
        if len(set(atoms)) != len(atoms):
            raise ValueError("atoms must be distinct")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @staticmethod
    def uniform(atoms: Iterable) -> "DiscreteMeasure":
        atoms = tuple(atoms)
        return DiscreteMeasure(atoms, (1,) * len(atoms))

    def __len__(self) -> int:
        return len(self.atoms)

    def weight(self, x) -> Fraction:
        x = _rational(x)
        try:
            return self.weights[self.atoms.index(x)]
        except ValueError:
            raise ValueError(f"{x} is not an atom") from None

    def to_dict(self) -> dict:
        return {"atoms": [str(t) for t in self.atoms], "weights": [str(w) for w in self.weights]}


def measure_from_json(data) -> DiscreteMeasure:
    """Accepts {"atoms": [...], "weights": [...]} or [[atom, weight], ...], as an
    object or a JSON string.  Numbers may be given as strings like "2/3"."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if isinstance(data, dict):
        return DiscreteMeasure(tuple(data["atoms"]), tuple(data["weights"]))
    pairs = list(data)
    return DiscreteMeasure(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))


def measure_from_csv(source) -> DiscreteMeasure:
    """Two columns, atom and weight; an optional header row is skipped."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).exists()):
        text = Path(source).read_text()
    else:
        text = str(source)
    atoms, weights = [], []
    for row in csv.reader(io.StringIO(text)):
        if not row or row[0].lstrip().startswith("#"):
            continue
        try:
            a, w = Fraction(row[0].strip()), Fraction(row[1].strip())
        except (ValueError, IndexError):
            if not atoms:
                continue  # header
            raise ValueError(f"bad row {row!r}") from None
        atoms.append(a)
        weights.append(w)
    return DiscreteMeasure(tuple(atoms), tuple(weights))


def moment(alpha: DiscreteMeasure, n: int) -> Fraction:
    if n < 0:
        raise ValueError("moment order must be nonnegative")
    return sum((w * t**n for t, w in zip(alpha.atoms, alpha.weights)), Fraction(0))


def vandermonde(xs: Sequence) -> Fraction:
    out = Fraction(1)
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            out *= xs[i] - xs[j]
    return out


@dataclass(frozen=True)
class EnsembleSpec:
    measure: DiscreteMeasure
    N: int
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if not 1 <= self.N <= len(self.measure):
            raise ValueError(f"need 1 <= N <= {len(self.measure)}, got N={self.N}")

    @cached_property
    def configurations(self) -> tuple[tuple[tuple[Fraction, ...], Fraction], ...]:
        """Every N-subset with its probability."""
        alpha = self.measure
        raw = []
        for idx in combinations(range(len(alpha)), self.N):
            xs = tuple(alpha.atoms[i] for i in idx)
            wt = vandermonde(xs) ** 2
            for i in idx:
                wt *= alpha.weights[i]
            raw.append((xs, wt))
        Z = sum((w for _, w in raw), Fraction(0))
        return tuple((xs, w / Z) for xs, w in raw)

    @cached_property
    def partition_function(self) -> Fraction:
        """Σ over N-subsets of V^2 Π w."""
        alpha = self.measure
        total = Fraction(0)
        for idx in combinations(range(len(alpha)), self.N):
            xs = [alpha.atoms[i] for i in idx]
            wt = vandermonde(xs) ** 2
            for i in idx:
                wt *= alpha.weights[i]
            total += wt
        return total

    def hankel_det(self, shift: int = 0) -> Fraction:
        """det(A_{i+j+shift})_{i,j<N}."""
        N = self.N
        return det_exact([[moment(self.measure, i + j + shift) for j in range(N)] for i in range(N)])

    def to_dict(self) -> dict:
        out = self.measure.to_dict()
        out["N"] = self.N
        return out


def ensemble_prob(X: Sequence, spec: EnsembleSpec) -> Fraction:
    """P(X) for a list of N atoms; 0 if an atom repeats."""
    xs = [_rational(x) for x in X]
    if len(xs) != spec.N:
        raise ValueError(f"configuration must have {spec.N} points")
    for x in xs:
        spec.measure.weight(x)
    if len(set(xs)) != len(xs):
        return Fraction(0)
    key = set(xs)
    for c, p in spec.configurations:
        if set(c) == key:
            return p
    raise AssertionError("unreachable")


def avg_schur(lam: Partition, spec: EnsembleSpec) -> Fraction:
    """<s_λ> = det(A_{λ_i+N-i+N-j}) / det(A_{2N-i-j}), i, j = 1..N."""
    N = spec.N
    if len(lam) > N:
        return Fraction(0)
    A = lambda n: moment(spec.measure, n)  # noqa: E731
    num = det_exact([[A(lam[i] + 2 * N - 2 - i - j) for j in range(N)] for i in range(N)])
    den = det_exact([[A(2 * N - 2 - i - j) for j in range(N)] for i in range(N)])
    return num / den


def avg_schur_enum(lam: Partition, spec: EnsembleSpec) -> Fraction:
    """Σ_X P(X) s_λ(X), by enumeration."""
    return sum((p * schur_at_points(lam, list(xs)) for xs, p in spec.configurations), Fraction(0))


def giambelli_check_ope(lam: Partition, spec: EnsembleSpec) -> Fraction:
    """|<s_λ> - det[<s_{(p_i|q_j)}>]|."""
    fc = lam.frobenius
    rows = [[avg_schur(hook(p, q), spec) for q in fc.q] for p in fc.p]
    return abs(avg_schur(lam, spec) - det_exact(rows))


def he_average(us: Sequence, vs: Sequence, spec: EnsembleSpec) -> Fraction:
    """<Π H(u_i) Π E(v_j)> for rational u, v off the atoms (H) and nonzero (E)."""
    total = Fraction(0)
    for xs, p in spec.configurations:
        total += p * _he(us, vs, xs)
    return total


def _he(us, vs, xs) -> Fraction:
    val = Fraction(1)
    for u in us:
        u = _rational(u)
        for x in xs:
            val *= u / (u - x)
    for v in vs:
        v = _rational(v)
        for x in xs:
            val *= (v + x) / v
    return val


def determinantal_identity_ope(us: Sequence, vs: Sequence, spec: EnsembleSpec) -> Fraction:
    """|<det[H(u_i)E(v_j)/(u_i+v_j)]> - det[<H(u_i)E(v_j)>/(u_i+v_j)]|, exactly."""
    us = [_rational(u) for u in us]
    vs = [_rational(v) for v in vs]
    lhs = Fraction(0)
    for xs, p in spec.configurations:
        lhs += p * det_exact([[_he([u], [v], xs) / (u + v) for v in vs] for u in us])
    rhs = det_exact([[he_average([u], [v], spec) / (u + v) for v in vs] for u in us])
    return abs(lhs - rhs)


# --- orthogonal polynomials and kernels ------------------------------------------


def orthopoly(alpha: DiscreteMeasure, k: int) -> list[Fraction]:
    """Monic orthogonal polynomial of degree k, coefficients from degree 0 up."""
    if not 0 <= k < len(alpha):
        raise ValueError(f"degree must lie in [0, {len(alpha) - 1}]")
    if k == 0:
        return [Fraction(1)]
    A = [moment(alpha, n) for n in range(2 * k)]
    # Σ_j c_j A_{i+j} = -A_{i+k} for i < k
    c = solve_exact([[A[i + j] for j in range(k)] for i in range(k)], [-A[i + k] for i in range(k)])
    return list(c) + [Fraction(1)]


def poly_eval(coeffs: Sequence, x):
    out = Fraction(0)
    for c in reversed(coeffs):
        out = out * x + c
    return out


def inner(alpha: DiscreteMeasure, f: Sequence, g: Sequence) -> Fraction:
    return sum((w * poly_eval(f, t) * poly_eval(g, t) for t, w in zip(alpha.atoms, alpha.weights)), Fraction(0))


def cd_kernel(x, y, spec: EnsembleSpec) -> Fraction:
    """w(y) Σ_{k<N} π_k(x) π_k(y) / ||π_k||^2.

    This is the projection kernel in the gauge that keeps it rational; the
    symmetric version multiplies by sqrt(w(x)/w(y)), which leaves every
    correlation determinant unchanged.
    """
    alpha = spec.measure
    x, y = _rational(x), _rational(y)
    alpha.weight(x)
    wy = alpha.weight(y)
    polys = spec._cache.get("orthopolys")
    if polys is None:
        polys = [orthopoly(alpha, k) for k in range(spec.N)]
        polys = [(p, inner(alpha, p, p)) for p in polys]
        spec._cache["orthopolys"] = polys
    return wy * sum((poly_eval(p, x) * poly_eval(p, y) / nrm for p, nrm in polys), Fraction(0))


def residue_kernel(x, y, spec: EnsembleSpec) -> Fraction:
    """Res_{u=y} <E(-x)H(u)>/(x-y).

    <E(-x)H(u)> = Σ_X P(X) (u/x)^N Π(x - x_i)/(u - x_i); at u = y only the
    configurations containing y contribute, and the factor x - y cancels:

        K(x, y) = (y/x)^N Σ_{X ∋ y} P(X) Π_{x_i != y} (x - x_i)/(y - x_i).

    The expression is continuous at x = y, where it reduces to ρ_1(y).
    Atom 0 is excluded since E(-x) and the residue at 0 degenerate there.
    """
    alpha = spec.measure
    x, y = _rational(x), _rational(y)
    alpha.weight(x)
    alpha.weight(y)
    if x == 0 or y == 0:
        raise ValueError("the residue kernel is not defined at atom 0")
    total = Fraction(0)
    for xs, p in spec.configurations:
        if y not in xs:
            continue
        term = p
        for xi in xs:
            if xi != y:
                term *= (x - xi) / (y - xi)
        total += term
    return (y / x) ** spec.N * total


def brute_rho(points: Sequence, spec: EnsembleSpec) -> Fraction:
    """P(X contains all points)."""
    pts = {_rational(x) for x in points}
    return sum((p for xs, p in spec.configurations if pts <= set(xs)), Fraction(0))


def rho_det(points: Sequence, spec: EnsembleSpec, kernel=cd_kernel) -> Fraction:
    pts = [_rational(x) for x in points]
    return det_exact([[kernel(a, b, spec) for b in pts] for a in pts])


__all__ = [
    "DiscreteMeasure",
    "EnsembleSpec",
    "measure_from_json",
    "measure_from_csv",
    "moment",
    "vandermonde",
    "ensemble_prob",
    "avg_schur",
    "avg_schur_enum",
    "giambelli_check_ope",
    "he_average",
    "determinantal_identity_ope",
    "orthopoly",
    "poly_eval",
    "inner",
    "cd_kernel",
    "residue_kernel",
    "brute_rho",
    "rho_det",
]
