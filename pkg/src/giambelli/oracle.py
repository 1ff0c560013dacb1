"""Independent verification engines.

* Truncated sums over all partitions with |λ| <= N, with an upper bound on the
  discarded mass.  Weights here come from the Frobenius-coordinate form

      M(λ)/(1-ξ)^{zz'} = ξ^n (zz')^d Π_i (z+1)_{p_i}(z'+1)_{p_i}(1-z)_{q_i}(1-z')_{q_i} / (p_i! q_i!)^2
                         * det[1/(p_i+q_j+1)]^2,

  not from the content product used in ``zmeasure``, so the two routes check
  each other.
* Brute-force correlation functions: the probability that X(λ) contains a
  given finite set.
* Monte Carlo averages over images of large random partitions in the Thoma
  simplex (or in the cone, after a Gamma(zz') scaling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .linalg import det
from .partition import Partition, as_half_integer, enumerate_partitions, falling_factorial, successors
from .symfunc import OmegaPoint
from .zmeasure import MixedZParams, ZParams, sample_fixed_size, as_real

MAX_LEVEL = 42


@dataclass(frozen=True)
class TruncationReport:
    N_max: int
    value: complex | float
    tail_bound: float
    converged: bool

    def to_dict(self) -> dict:
        v = self.value
        value = {"re": v.real, "im": v.imag} if isinstance(v, complex) else float(v)
        return {"value": value, "bound": self.tail_bound, "N_max": self.N_max, "converged": self.converged}


# --- tail bounds ----------------------------------------------------------------


def _log_level_mass(n: int, zz: float, xi: float) -> float:
    """log of (1-ξ)^{zz'} (zz')_n ξ^n / n!."""
    return (
        zz * math.log1p(-xi)
        + math.lgamma(zz + n)
        - math.lgamma(zz)
        + n * math.log(xi)
        - math.lgamma(n + 1)
    )


def tail_bound(mp: MixedZParams, m: int, N: int) -> float:
    """Upper bound on (1-ξ)^{zz'} Σ_{n>N} n^m (zz')_n ξ^n / n!.

    The term ratio t_{n+1}/t_n = ((n+1)/n)^m (zz'+n) ξ/(n+1) is bounded for all
    n > N by r = ((N+2)/(N+1))^m max(1, (zz'+N+1)/(N+2)) ξ; once r < 1 the tail
    is at most t_{N+1}/(1-r).
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    zz, xi = float(mp.zz), float(mp.xi)
    r = ((N + 2) / (N + 1)) ** m * max(1.0, (zz + N + 1) / (N + 2)) * xi
    if r >= 1:
        raise ValueError(f"term ratio bound {r:.3g} >= 1 at N={N}; increase N")
    first = math.exp(m * math.log(N + 1) + _log_level_mass(N + 1, zz, xi))
    return first / (1 - r) * (1 + 1e-12)


def tail_from_growth(mp: MixedZParams, growth: Callable[[int], float], N: int, horizon: int = 4000) -> float:
    """Σ_{n>N} growth(n) P(n) for a per-level bound ``growth`` on |f|.

    Terms are summed explicitly until they are negligible and the term ratio
    has settled below 1; the remainder is closed by a geometric series with
    the last observed ratio (exact for a non-increasing ratio, which holds for
    the polynomial and sub-exponential growth functions used here).
    """
    zz, xi = float(mp.zz), float(mp.xi)
    total = 0.0
    prev = None
    for n in range(N + 1, N + 1 + horizon):
        g = growth(n)
        if g == 0:
            prev = None
            continue
        term = math.exp(math.log(g) + _log_level_mass(n, zz, xi))
        total += term
        if prev is not None and prev > 0:
            ratio = term / prev
            if ratio < 0.99 and term < 1e-6 * max(total, 1e-300):
                return (total + term * ratio / (1 - ratio)) * (1 + 1e-9)
        prev = term
    raise ValueError("tail sum did not settle; growth too fast for this ξ")


def polynomial_growth(m: int) -> Callable[[int], float]:
    return lambda n: float(n) ** m


def _lattice_distances(w: complex, count: int) -> list[float]:
    """The ``count`` smallest distances from w to distinct points of Z'_+ (sorted)."""
    w = complex(w)
    centre = max(0, int(math.floor(w.real - 0.5)))
    lo = max(0, centre - count - 1)
    cands = [abs(w - (k + 0.5)) for k in range(lo, centre + count + 2)]
    cands.sort()
    return cands[:count]


def he_growth(h_points: Sequence, e_points: Sequence) -> Callable[[int], float]:
    """Per-level bound on |Π_i H(u_i)(λ) Π_j E(v_j)(λ)| over |λ| = n.

    With d the number of diagonal boxes, the a_i are distinct points of Z'_+ and
    Σ(a_i + b_i) = n, so |Π (u + b_i)| <= (|u| + n/d)^d and |Π 1/(u - a_i)| is at
    most the reciprocal product of the d smallest distances from u to Z'_+.
    The bound is maximised over d <= sqrt(n).
    """
    pts = [complex(u) for u in h_points] + [complex(v) for v in e_points]
    dmax_cache: dict[int, list[list[float]]] = {}

    def growth(n: int) -> float:
        dmax = math.isqrt(n)
        if dmax not in dmax_cache:
            dmax_cache[dmax] = [_lattice_distances(w, dmax) for w in pts]
        dist = dmax_cache[dmax]
        best = 1.0
        for d in range(1, dmax + 1):
            logb = 0.0
            for w, ds in zip(pts, dist):
                logb += d * math.log(abs(w) + n / d) - sum(math.log(x) for x in ds[:d])
            best = max(best, math.exp(logb))
        return best

    return growth


def determinant_growth(us: Sequence, vs: Sequence) -> Callable[[int], float]:
    """Bound for |det[H(u_i)E(v_j)/(u_i+v_j)]|: d! Π|H(u_i)| Π|E(v_j)| / min|u_i+v_j|^d."""
    k = len(us)
    gmin = min(abs(complex(u) + complex(v)) for u in us for v in vs)
    base = he_growth(us, vs)
    return lambda n: math.factorial(k) * base(n) / gmin**k


def he_bound(u, delta: float, eps: float) -> float:
    """e^{C δ |1/u|} with C = 3 + 2 log(2/sin ε), valid for ε < |arg u| < π - ε
    and any (α, β) with Σ(α_i + β_i) <= δ."""
    u = complex(u)
    arg = abs(math.atan2(u.imag, u.real))
    if not eps < arg < math.pi - eps:
        raise ValueError(f"|arg u| = {arg:.4f} outside ({eps}, π - {eps})")
    C = 3 + 2 * math.log(2 / math.sin(eps))
    return math.exp(C * delta / abs(u))


# --- enumeration table --------------------------------------------------------------


class PartitionTable:
    """All partitions with |λ| <= N, with modified Frobenius data as padded arrays."""

    def __init__(self, N: int):
        if N > MAX_LEVEL:
            raise ValueError(f"enumeration beyond |λ| = {MAX_LEVEL} is not supported")
        self.N = N
        parts, p_list, q_list = [], [], []
        for n in range(N + 1):
            for lam in enumerate_partitions(n):
                fc = lam.frobenius
                parts.append(lam)
                p_list.append(fc.p)
                q_list.append(fc.q)
        self.partitions = parts
        self.size = np.array([lam.size for lam in parts], dtype=np.int64)
        self.d = np.array([len(p) for p in p_list], dtype=np.int64)
        D = int(self.d.max()) if parts else 0
        self.P = np.zeros((len(parts), max(D, 1)), dtype=np.int64)
        self.Q = np.zeros_like(self.P)
        mask = np.zeros(self.P.shape, dtype=bool)
        for i, (p, q) in enumerate(zip(p_list, q_list)):
            self.P[i, : len(p)] = p
            self.Q[i, : len(q)] = q
            mask[i, : len(p)] = True
        self.mask = mask
        # a = p + 1/2, b = q + 1/2 on the occupied slots, 0 elsewhere
        self.A = np.where(mask, self.P + 0.5, 0.0)
        self.B = np.where(mask, self.Q + 0.5, 0.0)
        self._p, self._q = p_list, q_list

    def __len__(self) -> int:
        return len(self.partitions)

    def level_slice(self, n: int) -> slice:
        lo = int(np.searchsorted(self.size, n, side="left"))
        hi = int(np.searchsorted(self.size, n, side="right"))
        return slice(lo, hi)

    def weights(self, mp: MixedZParams) -> np.ndarray:
        """Mixed z-measure weights, from the Frobenius-coordinate formula."""
        zp = mp.base
        N = self.N
        zz = float(mp.zz)
        xi = float(mp.xi)
        # logs of (z+1)_p(z'+1)_p / p!^2 and (1-z)_q(1-z')_q / q!^2
        logP = np.zeros(N + 1)
        logQ = np.zeros(N + 1)
        signP = np.ones(N + 1)
        signQ = np.ones(N + 1)
        for k in range(1, N + 1):
            a = float(zp.pair(k))
            b = float(zp.pair(-k))
            logP[k] = logP[k - 1] + math.log(abs(a)) - 2 * math.log(k)
            logQ[k] = logQ[k - 1] + math.log(abs(b)) - 2 * math.log(k)
            signP[k] = signP[k - 1] * math.copysign(1, a)
            signQ[k] = signQ[k - 1] * math.copysign(1, b)
        out = np.empty(len(self))
        log_pref = zz * math.log1p(-xi)
        for i, (p, q) in enumerate(zip(self._p, self._q)):
            d = len(p)
            n = int(self.size[i])
            logw = log_pref + n * math.log(xi) + d * math.log(zz)
            sign = 1.0
            for x in p:
                logw += logP[x]
                sign *= signP[x]
            for y in q:
                logw += logQ[y]
                sign *= signQ[y]
            # Cauchy determinant det[1/(p_i+q_j+1)]
            num = 1.0
            for i1 in range(d):
                for i2 in range(i1 + 1, d):
                    num *= (p[i1] - p[i2]) * (q[i1] - q[i2])
            den = 1.0
            for x in p:
                for y in q:
                    den *= x + y + 1
            out[i] = sign * math.exp(logw) * (num / den) ** 2
        return out

    def codes(self) -> list[frozenset]:
        """X(λ) encoded as odd integers 2x."""
        return [
            frozenset([2 * x + 1 for x in p] + [-(2 * y + 1) for y in q])
            for p, q in zip(self._p, self._q)
        ]

    def H(self, u) -> np.ndarray:
        u = complex(u)
        return np.prod(np.where(self.mask, (u + self.B) / (u - self.A), 1.0), axis=1)

    def E(self, v) -> np.ndarray:
        v = complex(v)
        return np.prod(np.where(self.mask, (v + self.A) / (v - self.B), 1.0), axis=1)


@lru_cache(maxsize=4)
def partition_table(N: int) -> PartitionTable:
    return PartitionTable(N)


# --- evaluators -----------------------------------------------------------------------


class Evaluator:
    """A function of λ, evaluated on a whole ``PartitionTable`` at once, with a
    per-level bound on its absolute value."""

    def values(self, table: PartitionTable) -> np.ndarray:
        raise NotImplementedError

    def growth(self, n: int) -> float:
        raise NotImplementedError


class Constant(Evaluator):
    def __init__(self, c=1.0):
        self.c = c

    def values(self, table):
        return np.full(len(table), self.c, dtype=complex if isinstance(self.c, complex) else float)

    def growth(self, n):
        return abs(self.c)


class PerPartition(Evaluator):
    """Wrap a plain callable λ -> value with a caller-supplied growth bound."""

    def __init__(self, fn: Callable[[Partition], object], growth: Callable[[int], float]):
        self.fn = fn
        self._growth = growth

    def values(self, table):
        return np.array([complex(self.fn(lam)) for lam in table.partitions])

    def growth(self, n):
        return self._growth(n)


class FrobeniusSchurEvaluator(Evaluator):
    """Fs_μ(λ) = dim(μ,λ) n^{↓m} / dim λ, with dim(μ, ·) propagated level by level
    up the Young graph; |Fs_μ(λ)| <= n^m."""

    def __init__(self, mu: Partition):
        self.mu = mu

    def values(self, table):
        mu = self.mu
        m = mu.size
        counts = {mu.parts: 1}
        out = np.zeros(len(table))
        index = {lam.parts: i for i, lam in enumerate(table.partitions)}
        for n in range(m, table.N + 1):
            nxt: dict = {}
            for parts, c in counts.items():
                lam = Partition(parts)
                out[index[parts]] = c * falling_factorial(n, m) / lam.dim
                if n < table.N:
                    for nu, _ in successors(lam):
                        nxt[nu.parts] = nxt.get(nu.parts, 0) + c
            counts = nxt
        return out

    def growth(self, n):
        return float(n) ** self.mu.size


class HEProduct(Evaluator):
    """Π_i H(u_i)(λ) Π_j E(v_j)(λ)."""

    def __init__(self, us: Sequence, vs: Sequence):
        self.us, self.vs = list(us), list(vs)
        self._g = he_growth(self.us, self.vs)

    def values(self, table):
        out = np.ones(len(table), dtype=complex)
        for u in self.us:
            out *= table.H(u)
        for v in self.vs:
            out *= table.E(v)
        return out

    def growth(self, n):
        return self._g(n)


class HEDeterminant(Evaluator):
    """det[H(u_i)(λ) E(v_j)(λ) / (u_i + v_j)]."""

    def __init__(self, us: Sequence, vs: Sequence):
        if len(us) != len(vs):
            raise ValueError("us and vs must have equal length")
        self.us, self.vs = [complex(u) for u in us], [complex(v) for v in vs]
        if any(u + v == 0 for u in self.us for v in self.vs):
            raise ValueError("u_i + v_j must not vanish")
        self._g = determinant_growth(self.us, self.vs)

    def values(self, table):
        k = len(self.us)
        Hs = [table.H(u) for u in self.us]
        Es = [table.E(v) for v in self.vs]
        mats = np.empty((len(table), k, k), dtype=complex)
        for i in range(k):
            for j in range(k):
                mats[:, i, j] = Hs[i] * Es[j] / (self.us[i] + self.vs[j])
        return np.linalg.det(mats)

    def growth(self, n):
        return self._g(n)


def choose_level(mp: MixedZParams, growth: Callable[[int], float], tol: float, start: int = 8) -> tuple[int, float]:
    """Smallest N <= MAX_LEVEL with tail bound below tol."""
    for N in range(start, MAX_LEVEL + 1):
        try:
            t = tail_from_growth(mp, growth, N)
        except ValueError:
            continue
        if t < tol:
            return N, t
    raise ValueError(f"tolerance {tol} not reachable with |λ| <= {MAX_LEVEL}")


def brute_expect(f: Evaluator, mp: MixedZParams, tol: float = 1e-10, N: int | None = None) -> TruncationReport:
    """Σ_{|λ|<=N} f(λ) M(λ) with N chosen so that the tail bound is below tol."""
    if N is None:
        N, tail = choose_level(mp, f.growth, tol)
    else:
        tail = tail_from_growth(mp, f.growth, N)
    table = partition_table(N)
    vals = f.values(table)
    w = table.weights(mp)
    # fixed-order reduction level by level
    terms = vals * w
    total = 0j
    for n in range(N + 1):
        sl = table.level_slice(n)
        total += complex(np.sum(terms[sl]))
    value = total.real if not np.iscomplexobj(vals) or abs(total.imag) <= 1e-15 * max(1, abs(total)) else total
    bound = tail + _roundoff(float(np.sum(np.abs(terms))), len(table))
    return TruncationReport(N, value, bound, tail < tol)


def _roundoff(abs_sum: float, count: int) -> float:
    """Floating-point error allowance for a sum of ``count`` computed terms
    whose absolute values add up to ``abs_sum``; each weight carries a few
    dozen rounding errors from its product form."""
    return abs_sum * np.finfo(float).eps * (64 + 2 * math.log2(max(count, 2)))


def brute_corr(points, mp: MixedZParams, tol: float = 1e-10) -> TruncationReport:
    """P(X(λ) contains all given points), truncated at |λ| <= N."""
    codes = frozenset(int(2 * as_half_integer(x)) for x in points)
    if len(codes) != len(list(points)):
        raise ValueError("points must be distinct")
    N, tail = choose_level(mp, lambda n: 1.0, tol)
    table = partition_table(N)
    w = table.weights(mp)
    total = 0.0
    for c, wt in zip(table.codes(), w):
        if codes <= c:
            total += wt
    return TruncationReport(N, total, tail + _roundoff(1.0, len(table)), tail < tol)


def brute_rho_all(points, mp: MixedZParams, max_m: int, tol: float = 1e-10) -> tuple[dict, TruncationReport]:
    """Brute-force ρ_m for every subset of ``points`` of size 1..max_m.

    Returns {subset (tuple of Fractions): value} and the shared truncation data.
    """
    pts = [as_half_integer(x) for x in points]
    N, tail = choose_level(mp, lambda n: 1.0, tol)
    table = partition_table(N)
    w = table.weights(mp)
    bit = {int(2 * x): 1 << k for k, x in enumerate(pts)}
    masks = np.zeros(len(table), dtype=np.int64)
    for i, c in enumerate(table.codes()):
        m = 0
        for code in c:
            m |= bit.get(code, 0)
        masks[i] = m
    out = {}
    for size in range(1, max_m + 1):
        for sub in combinations(range(len(pts)), size):
            sm = sum(1 << k for k in sub)
            out[tuple(pts[k] for k in sub)] = float(np.sum(w[(masks & sm) == sm]))
    return out, TruncationReport(N, float(np.sum(w)), tail + _roundoff(1.0, len(table)), tail < tol)


@dataclass(frozen=True)
class DeterminantalCheck:
    residual: float
    lhs: TruncationReport
    rhs: complex

    @property
    def tail_bound(self) -> float:
        return self.lhs.tail_bound


def determinantal_identity_check(us, vs, mp: MixedZParams, tol: float = 1e-10) -> DeterminantalCheck:
    """|<det[H(u_i)E(v_j)/(u_i+v_j)]> - det[<H(u_i)E(v_j)>/(u_i+v_j)]|, the left side by
    brute force and the right side from the closed-form two-point average."""
    from .kernels import two_point_avg_discrete

    lhs = brute_expect(HEDeterminant(us, vs), mp, tol)
    rows = [[complex(two_point_avg_discrete(u, v, mp)) / (complex(u) + complex(v)) for v in vs] for u in us]
    rhs = complex(det(rows))
    return DeterminantalCheck(abs(complex(lhs.value) - rhs), lhs, rhs)


# --- Monte Carlo over the Thoma simplex / cone ------------------------------------------


@dataclass(frozen=True)
class MCEstimate:
    mean: complex | float
    stderr: float
    stderr_imag: float
    samples: int

    def zscore(self, target) -> float:
        """Largest of the real/imaginary deviations in units of their standard errors."""
        t = complex(target)
        m = complex(self.mean)
        zr = abs(m.real - t.real) / self.stderr if self.stderr > 0 else (0.0 if m.real == t.real else math.inf)
        zi = abs(m.imag - t.imag) / self.stderr_imag if self.stderr_imag > 0 else (0.0 if abs(m.imag - t.imag) < 1e-12 else math.inf)
        return max(zr, zi)

    def to_dict(self) -> dict:
        m = complex(self.mean)
        return {"mean": {"re": m.real, "im": m.imag}, "stderr": self.stderr, "stderr_imag": self.stderr_imag, "samples": self.samples}


def sample_omega(zp: ZParams, n: int, samples: int, seed: int, tilde: bool = False, workers: int = 1) -> list[OmegaPoint]:
    """Images (a/n, b/n, 1) of draws from M^(n); with ``tilde`` the image is scaled
    by an independent r ~ Gamma(zz'), giving (r a/n, r b/n, r)."""
    parts = sample_fixed_size(zp, n, samples, seed, workers)
    if not tilde:
        return [OmegaPoint.from_partition(lam, n) for lam in parts]
    # the scaling uses a separate key so it does not overlap the chain's stream
    rng = np.random.Generator(np.random.Philox(key=np.random.SeedSequence([seed, 1]).generate_state(2, np.uint64)))
    rs = rng.gamma(float(zp.zz), size=samples)
    return [OmegaPoint.from_partition(lam, n, scale=float(r)) for lam, r in zip(parts, rs)]


def mc_expect_omega(
    f: Callable[[OmegaPoint], complex],
    zp: ZParams,
    n: int = 400,
    samples: int = 20000,
    seed: int = 0,
    tilde: bool = False,
    points: list[OmegaPoint] | None = None,
) -> MCEstimate:
    """Sample mean and standard error of f over finite-n images of the z-measure."""
    if points is None:
        points = sample_omega(zp, n, samples, seed, tilde)
    vals = np.array([complex(f(w)) for w in points])
    k = len(vals)
    mean = vals.mean()
    se_r = float(vals.real.std(ddof=1) / math.sqrt(k)) if k > 1 else 0.0
    se_i = float(vals.imag.std(ddof=1) / math.sqrt(k)) if k > 1 else 0.0
    mean_out = mean.real if np.all(vals.imag == 0) else complex(mean)
    return MCEstimate(mean_out, se_r, se_i, k)


def hook_average_omega(p: int, q: int, zp: ZParams):
    """<s_{(p|q)}> over the Thoma simplex:
    (z+1)_p (z'+1)_p (1-z)_q (1-z')_q / ((zz'+1)_{p+q} p! q! (p+q+1))."""
    num = 1
    for j in range(p):
        num *= zp.pair(1 + j)
    for j in range(q):
        num *= zp.pair(-1 - j)
    zz = zp.zz
    den = 1
    for j in range(p + q):
        den *= zz + 1 + j
    return num / (den * math.factorial(p) * math.factorial(q) * (p + q + 1))


def hook_series_omega(u, v, zp: ZParams, order: int = 200) -> complex:
    """1 + (u+v) Σ_{p,q} <s_{(p|q)}> / (u^{p+1} v^{q+1}), truncated at p, q < order."""
    u, v = complex(u), complex(v)
    fz = zp.as_float()
    zz = float(fz.zz)
    total = 0j
    # row factor (z+1)_p (z'+1)_p / (p! (zz'+1)_p u^{p+1}), updated by ratios to stay in range
    row = 1 / u
    for p in range(order):
        if p > 0:
            row *= complex(fz.pair(p)) / (p * (zz + p) * u)
        term = row / v
        for q in range(order - p):
            if q > 0:
                term *= complex(fz.pair(-q)) / (q * (zz + p + q) * v)
            total += term / (p + q + 1)
    return 1 + (u + v) * total


def asymptotic_2f0(a, b, x, max_terms: int = 200) -> complex:
    """Divergent series Σ (a)_k (b)_k x^k / k!, stopped before its smallest term."""
    a, b, x = complex(a), complex(b), complex(x)
    term = 1 + 0j
    total = 1 + 0j
    for k in range(max_terms):
        nxt = term * (a + k) * (b + k) / (k + 1) * x
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
    return total


def two_point_avg_tilde_asymptotic(u, v, zp: ZParams) -> complex:
    """2F0(z,z';1/u) 2F0(-z,-z';1/v) + zz'/(uv) 2F0(z+1,z'+1;1/u) 2F0(1-z,1-z';1/v)."""
    z, zq = complex(zp.z), complex(zp.zp)
    u, v = complex(u), complex(v)
    zz = as_real(z * zq)
    return asymptotic_2f0(z, zq, 1 / u) * asymptotic_2f0(-z, -zq, 1 / v) + zz / (u * v) * asymptotic_2f0(
        z + 1, zq + 1, 1 / u
    ) * asymptotic_2f0(1 - z, 1 - zq, 1 / v)


__all__ = [
    "TruncationReport",
    "tail_bound",
    "tail_from_growth",
    "choose_level",
    "polynomial_growth",
    "determinant_growth",
    "he_growth",
    "he_bound",
    "PartitionTable",
    "partition_table",
    "Evaluator",
    "Constant",
    "PerPartition",
    "FrobeniusSchurEvaluator",
    "HEProduct",
    "HEDeterminant",
    "brute_expect",
    "brute_corr",
    "determinantal_identity_check",
    "MCEstimate",
    "sample_omega",
    "mc_expect_omega",
    "hook_average_omega",
    "hook_series_omega",
    "two_point_avg_tilde_asymptotic",
    "asymptotic_2f0",
    "brute_rho_all",
    "DeterminantalCheck",
]
