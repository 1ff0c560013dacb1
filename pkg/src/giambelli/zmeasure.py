"""z-measures on partitions and their mixtures over the size n.

For admissible (z, z') the measure on partitions of n is

    M^(n)(λ) = Π_{boxes} (z+c)(z'+c) / (zz')_n * (dim λ)^2 / n!,

with c = j - i the content of box (i, j).  The mixed measure weighs level n by
the negative binomial law (1-ξ)^{zz'} (zz')_n ξ^n / n!.

Quantities free of the (1-ξ)^{zz'} prefactor are computed exactly in
``Fraction`` arithmetic when z, z', ξ are rational.  Principal-series
parameters (z' = conj z) are handled in complex arithmetic; results are checked
to be real before the imaginary part is dropped.
"""

from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

import numpy as np

from . import _chain
from .linalg import det
from .partition import Partition, hook, successors
from .specfun import pochhammer

Scalar = Union[Fraction, float, complex]


def parse_scalar(text) -> Scalar:
    """Parse "1/2", "0.25", "3" exactly and "0.5+1i", "1/2-1j" as complex."""
    if isinstance(text, (Fraction, float, complex)):
        return _normalize(text)
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip().replace(" ", "")
    try:
        return Fraction(s)
    except ValueError:
        pass
    try:
        return _normalize(complex(s.replace("i", "j")))
    except ValueError:
        pass
    m = _COMPLEX_RE.match(s)
    if m:
        re_part = Fraction(m.group(1)) if m.group(1) else Fraction(0)
        im_text = m.group(2)
        im_part = Fraction(im_text + "1") if im_text in ("+", "-", "") else Fraction(im_text)
        return _normalize(complex(float(re_part), float(im_part)))
    raise ValueError(f"cannot parse number {text!r}")


_NUM = r"[0-9]+(?:\.[0-9]*)?(?:/[0-9]+)?"
_COMPLEX_RE = re.compile(rf"^([+-]?{_NUM})?([+-](?:{_NUM})?)[ij]$")


def _normalize(x) -> Scalar:
    if isinstance(x, complex):
        return x.real if x.imag == 0 else x
    if isinstance(x, Rational):
        return Fraction(x)
    return x


def as_real(x, tol: float = 1e-12):
    """Drop a negligible imaginary part; complain about a large one."""
    if isinstance(x, complex):
        if abs(x.imag) > tol * max(1.0, abs(x)):
            raise ArithmeticError(f"expected a real value, got {x}")
        return x.real
    return x


def scalar_str(x) -> str:
    """Exact rendering for rationals, repr-style for floats."""
    if isinstance(x, Rational):
        return str(Fraction(x))
    if isinstance(x, complex):
        return f"{x.real!r}{'+' if x.imag >= 0 else '-'}{abs(x.imag)!r}i"
    return repr(float(x))


def _is_integer(x) -> bool:
    c = complex(x)
    return c.imag == 0 and c.real == math.floor(c.real)


@dataclass(frozen=True)
class ZParams:
    z: Scalar
    zp: Scalar

    def __post_init__(self):
        z, zp = parse_scalar(self.z), parse_scalar(self.zp)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "zp", zp)
        self.series_type  # raises when inadmissible

    @property
    def series_type(self) -> str:
        z, zp = complex(self.z), complex(self.zp)
        if zp == z.conjugate() and not _is_integer(z):
            return "principal"
        if z.imag == 0 and zp.imag == 0:
            m = math.floor(z.real)
            if m < z.real < m + 1 and m < zp.real < m + 1:
                return "complementary"
        raise ValueError(f"inadmissible parameters z={self.z}, z'={self.zp}")

    @property
    def exact(self) -> bool:
        return isinstance(self.z, Fraction) and isinstance(self.zp, Fraction)

    def pair(self, c):
        """(z + c)(z' + c), real for admissible parameters."""
        if self.exact:
            return (self.z + c) * (self.zp + c)
        return as_real((self.z + c) * (self.zp + c))

    @property
    def zz(self):
        return self.pair(0)

    @property
    def s(self):
        """z + z'."""
        return as_real(self.z + self.zp)

    def as_float(self) -> "ZParams":
        return ZParams(_to_float(self.z), _to_float(self.zp))

    def to_dict(self) -> dict:
        return {"z": scalar_str(self.z), "zp": scalar_str(self.zp), "series": self.series_type}


def _to_float(x):
    return complex(x) if isinstance(x, complex) else float(x)


@dataclass(frozen=True)
class MixedZParams:
    base: ZParams
    xi: Scalar

    def __post_init__(self):
        xi = parse_scalar(self.xi)
        if isinstance(xi, complex) or not 0 < xi < 1:
            raise ValueError(f"xi must lie in (0, 1), got {self.xi}")
        object.__setattr__(self, "xi", xi)

    @staticmethod
    def of(z, zp, xi) -> "MixedZParams":
        return MixedZParams(ZParams(z, zp), xi)

    @property
    def z(self):
        return self.base.z

    @property
    def zp(self):
        return self.base.zp

    @property
    def zz(self):
        return self.base.zz

    @property
    def exact(self) -> bool:
        return self.base.exact and isinstance(self.xi, Fraction)

    @property
    def prefactor(self) -> float:
        """(1-ξ)^{zz'} = exp(zz' log(1-ξ))."""
        return math.exp(float(self.zz) * math.log1p(-float(self.xi)))

    def as_float(self) -> "MixedZParams":
        return MixedZParams(self.base.as_float(), float(self.xi))

    def to_dict(self) -> dict:
        out = self.base.to_dict()
        out["xi"] = scalar_str(self.xi)
        return out


def content_product(lam: Partition, zp: ZParams):
    out = Fraction(1) if zp.exact else 1.0
    for c in lam.contents():
        out *= zp.pair(c)
    return out


def weight_n(lam: Partition, zp: ZParams):
    """M^(n)(λ); exact when z, z' are rational."""
    n = lam.size
    num = content_product(lam, zp) * lam.dim**2
    den = pochhammer(zp.zz, n) * math.factorial(n)
    return num / den


def harmonic_phi(lam: Partition, zp: ZParams):
    """φ(λ) = M^(n)(λ)/dim λ, harmonic on the Young graph."""
    return weight_n(lam, zp) / lam.dim


def size_ratio(n: int, mp: MixedZParams):
    """(zz')_n ξ^n / n!, the level-n weight without the (1-ξ)^{zz'} factor."""
    return pochhammer(mp.zz, n) * mp.xi**n / math.factorial(n)


def size_pmf(n: int, mp: MixedZParams) -> float:
    if n < 150:
        return mp.prefactor * float(size_ratio(n, mp))
    # (zz')_n / n! = Γ(zz'+n) / (Γ(zz') n!), in log space to avoid overflow
    from scipy.special import gammaln

    zz = float(mp.zz)
    log_r = gammaln(zz + n) - gammaln(zz) - gammaln(n + 1.0) + n * math.log(float(mp.xi))
    return mp.prefactor * math.exp(log_r)


def mixed_ratio(lam: Partition, mp: MixedZParams):
    """M_{z,z',ξ}(λ) / M_{z,z',ξ}(∅) = Π (z+c)(z'+c) (dim λ)^2 ξ^n / (n!)^2."""
    n = lam.size
    return content_product(lam, mp.base) * lam.dim**2 * mp.xi**n / math.factorial(n) ** 2


def weight_mixed(lam: Partition, mp: MixedZParams) -> float:
    return mp.prefactor * float(mixed_ratio(lam, mp))


def expect_fs(mu: Partition, mp: MixedZParams):
    """Closed form of the Frobenius-Schur average

        <Fs_μ> = (ξ/(1-ξ))^m Π_{boxes of μ} (z+c)(z'+c) dim μ / m!,  m = |μ|.
    """
    m = mu.size
    ratio = mp.xi / (1 - mp.xi)
    return ratio**m * content_product(mu, mp.base) * mu.dim / math.factorial(m)


def giambelli_expectation_check(lam: Partition, mp: MixedZParams):
    """|<Fs_λ> - det[<Fs_{(p_i|q_j)}>]|; exactly 0 in rational mode."""
    fc = lam.frobenius
    rows = [[expect_fs(hook(p, q), mp) for q in fc.q] for p in fc.p]
    return abs(expect_fs(lam, mp) - det(rows))


def transition_prob(mu: Partition, lam: Partition, zp: ZParams):
    """q(μ -> λ) = φ(λ)/φ(μ) = (z+c)(z'+c) dim λ / (dim μ (zz'+n)(n+1))."""
    for nu, c in successors(mu):
        if nu == lam:
            n = mu.size
            return zp.pair(c) * Fraction(lam.dim, mu.dim) / ((zp.zz + n) * (n + 1))
    raise ValueError(f"{lam} is not obtained from {mu} by adding one box")


# --- sampling ------------------------------------------------------------------


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for sample ``index``: Philox keyed by ``seed`` with the
    sample index in the top counter word."""
    key = np.random.SeedSequence(seed).generate_state(2, np.uint64)
    counter = np.array([0, 0, 0, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def grow_partition(zp: ZParams, n: int, rng: np.random.Generator) -> Partition:
    """Run the harmonic growth chain for n steps; the result has law M^(n)."""
    uniforms = rng.random(n)
    rows = _chain.grow(n, float(zp.s), float(zp.zz), uniforms)
    return Partition(rows.tolist())


def _draw_size(mp: MixedZParams, rng: np.random.Generator) -> int:
    return int(rng.negative_binomial(float(mp.zz), 1.0 - float(mp.xi)))


def sample(mp: MixedZParams, seed: int, index: int = 0) -> Partition:
    """One draw from the mixed z-measure: n from the negative binomial law, then
    n steps of the growth chain."""
    rng = substream(seed, index)
    return grow_partition(mp.base, _draw_size(mp, rng), rng)


def _parallel(fn, count: int, workers: int) -> list:
    if workers <= 1 or count < 2 * workers:
        return [fn(i) for i in range(count)]
    blocks = np.array_split(np.arange(count), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(lambda idx: [fn(int(i)) for i in idx], blocks)
        return [x for block in parts for x in block]


def sample_many(mp: MixedZParams, count: int, seed: int, workers: int = 1) -> list[Partition]:
    """Draws 0..count-1; draw i depends only on (seed, i), not on ``workers``."""
    return _parallel(lambda i: sample(mp, seed, i), count, workers)


def sample_fixed_size(zp: ZParams, n: int, count: int, seed: int, workers: int = 1) -> list[Partition]:
    """Draws from M^(n) via the growth chain, one substream per draw."""
    return _parallel(lambda i: grow_partition(zp, n, substream(seed, i)), count, workers)
