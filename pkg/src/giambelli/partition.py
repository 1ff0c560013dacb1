"""Young diagrams, Frobenius coordinates and the Young graph.

A partition is stored as a tuple of positive nonincreasing parts.  Half-integer
points of the shifted lattice Z' = Z + 1/2 are represented by ``Fraction``
values; ``Partition.lattice_config`` and ``from_lattice_config`` implement the
bijection between partitions and balanced point configurations on Z'.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import factorial
from typing import Iterable, Iterator, Sequence

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class FrobeniusCoords:
    """Arm and leg lengths along the main diagonal, written (p | q)."""

    p: tuple[int, ...]
    q: tuple[int, ...]

    def __post_init__(self):
        p, q = tuple(int(x) for x in self.p), tuple(int(x) for x in self.q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        if len(p) != len(q):
            raise ValueError(f"p and q must have equal length, got {p} and {q}")
        for name, seq in (("p", p), ("q", q)):
            if any(x < 0 for x in seq):
                raise ValueError(f"{name} must be nonnegative: {seq}")
            if any(seq[i] <= seq[i + 1] for i in range(len(seq) - 1)):
                raise ValueError(f"{name} must be strictly decreasing: {seq}")

    @property
    def d(self) -> int:
        return len(self.p)

    @property
    def a(self) -> tuple[Fraction, ...]:
        """Modified coordinates a_i = p_i + 1/2."""
        return tuple(x + HALF for x in self.p)

    @property
    def b(self) -> tuple[Fraction, ...]:
        """Modified coordinates b_i = q_i + 1/2."""
        return tuple(x + HALF for x in self.q)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.p)) + " | " + ",".join(map(str, self.q)) + ")"


@dataclass(frozen=True)
class LatticeConfiguration:
    """A finite set of points of Z' = Z + 1/2, kept sorted ascending."""

    points: tuple[Fraction, ...]

    def __post_init__(self):
        pts = tuple(sorted(as_half_integer(x) for x in self.points))
        if len(set(pts)) != len(pts):
            raise ValueError(f"repeated points in configuration: {pts}")
        object.__setattr__(self, "points", pts)

    @property
    def positive(self) -> tuple[Fraction, ...]:
        return tuple(x for x in self.points if x > 0)

    @property
    def negative(self) -> tuple[Fraction, ...]:
        return tuple(x for x in self.points if x < 0)

    @property
    def is_balanced(self) -> bool:
        return len(self.positive) == len(self.negative)

    def __contains__(self, x) -> bool:
        return as_half_integer(x) in self.points

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.points)

    def to_json(self) -> list[str]:
        return [str(x) for x in self.points]


def as_half_integer(x) -> Fraction:
    """Coerce ``x`` (int, float, Fraction or string such as "-3/2") to a point of Z'."""
    if isinstance(x, str):
        x = Fraction(x.strip())
    else:
        x = Fraction(x)
    if x.denominator != 2:
        raise ValueError(f"{x} is not a half-integer")
    return x


class Partition:
    """A Young diagram given by its row lengths."""

    __slots__ = ("parts", "__dict__")

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(x) for x in parts)
        if any(x <= 0 for x in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be nonincreasing: {parts}")
        self.parts = parts

    def __repr__(self) -> str:
        return f"Partition({list(self.parts)})"

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")" if self.parts else "∅"

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(("Partition", self.parts))

    def __lt__(self, other: "Partition") -> bool:
        return (self.size, self.parts) < (other.size, other.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        """Row length λ_{i+1} (0-based), zero past the last row."""
        return self.parts[i] if i < len(self.parts) else 0

    @cached_property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @cached_property
    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(sum(1 for x in self.parts if x > j) for j in range(self.parts[0]))

    @cached_property
    def frobenius(self) -> FrobeniusCoords:
        cols = self.conjugate.parts
        d = sum(1 for i, x in enumerate(self.parts) if x > i)
        return FrobeniusCoords(
            tuple(self.parts[i] - i - 1 for i in range(d)),
            tuple(cols[i] - i - 1 for i in range(d)),
        )

    @property
    def modified_frobenius(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        f = self.frobenius
        return f.a, f.b

    def boxes(self) -> Iterator[tuple[int, int]]:
        """Boxes (i, j), 1-based row and column."""
        for i, row in enumerate(self.parts, start=1):
            for j in range(1, row + 1):
                yield i, j

    def contents(self) -> list[int]:
        return [j - i for i, j in self.boxes()]

    def hook_lengths(self) -> list[int]:
        cols = self.conjugate.parts
        return [self.parts[i - 1] - j + cols[j - 1] - i + 1 for i, j in self.boxes()]

    @cached_property
    def dim(self) -> int:
        """Number of standard tableaux, from the hook length formula."""
        prod = 1
        for h in self.hook_lengths():
            prod *= h
        return factorial(self.size) // prod

    def contains(self, other: "Partition") -> bool:
        """True when the diagram of ``other`` fits inside this one."""
        return len(other.parts) <= len(self.parts) and all(
            x <= y for x, y in zip(other.parts, self.parts)
        )

    @property
    def is_hook(self) -> bool:
        return len(self.parts) == 0 or len(self.parts) < 2 or self.parts[1] <= 1

    def lattice_config(self) -> LatticeConfiguration:
        a, b = self.modified_frobenius
        return LatticeConfiguration(tuple(-x for x in b) + a)

    def to_json(self) -> list[int]:
        return list(self.parts)


EMPTY = Partition()


def from_parts(parts: Sequence[int]) -> Partition:
    """Canonical partition from a nonincreasing sequence, trailing zeros dropped."""
    parts = [int(x) for x in parts]
    if any(x < 0 for x in parts):
        raise ValueError(f"negative entry in {parts}")
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise ValueError(f"sequence is not nonincreasing: {parts}")
    return Partition(x for x in parts if x > 0)


def frobenius(lam: Partition) -> FrobeniusCoords:
    return lam.frobenius


def from_frobenius(p: Sequence[int], q: Sequence[int] | None = None) -> Partition:
    """Inverse of ``frobenius``; accepts a FrobeniusCoords or two sequences."""
    fc = p if isinstance(p, FrobeniusCoords) else FrobeniusCoords(tuple(p), tuple(q or ()))
    d = fc.d
    if d == 0:
        return EMPTY
    # rows i < d are p_i + i + 1; rows below the diagonal come from the legs
    rows = [fc.p[i] + i + 1 for i in range(d)]
    below = [sum(1 for j in range(d) if fc.q[j] + j + 1 > i) for i in range(d, d + fc.q[0] + 1)]
    return Partition(rows + [x for x in below if x > 0])


def hook(p: int, q: int) -> Partition:
    """The hook (p | q) = (p+1, 1^q)."""
    return Partition([p + 1] + [1] * q)


def from_lattice_config(config: LatticeConfiguration | Iterable) -> Partition:
    if not isinstance(config, LatticeConfiguration):
        config = LatticeConfiguration(tuple(config))
    if not config.is_balanced:
        raise ValueError(f"configuration is not balanced: {config.to_json()}")
    a = sorted(config.positive, reverse=True)
    b = sorted((-x for x in config.negative), reverse=True)
    return from_frobenius([int(x - HALF) for x in a], [int(x - HALF) for x in b])


def lattice_config(lam: Partition) -> LatticeConfiguration:
    return lam.lattice_config()


def _partitions(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def enumerate_partitions(n: int) -> list[Partition]:
    """All partitions of n in reverse lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return [Partition(t) for t in _partitions(n, n)]


def partitions_up_to(nmax: int) -> Iterator[Partition]:
    for n in range(nmax + 1):
        yield from enumerate_partitions(n)


def successors(mu: Partition) -> list[tuple[Partition, int]]:
    """Diagrams obtained by adding one box, with the content of that box."""
    parts = list(mu.parts)
    out = []
    for i in range(len(parts) + 1):
        row = parts[i] if i < len(parts) else 0
        if i == 0 or parts[i - 1] > row:
            new = parts[:i] + [row + 1] + parts[i + 1:]
            out.append((Partition(new), row - i))
    return out


def predecessors(lam: Partition) -> list[Partition]:
    """Diagrams obtained by removing one corner box."""
    parts = list(lam.parts)
    out = []
    for i, row in enumerate(parts):
        if i == len(parts) - 1 or parts[i + 1] < row:
            out.append(from_parts(parts[:i] + [row - 1] + parts[i + 1:]))
    return out


@lru_cache(maxsize=None)
def _dim_skew(mu: tuple[int, ...], lam: tuple[int, ...]) -> int:
    if mu == lam:
        return 1
    if sum(lam) <= sum(mu):
        return 0
    total = 0
    for nu in predecessors(Partition(lam)):
        if nu.contains(Partition(mu)):
            total += _dim_skew(mu, nu.parts)
    return total


def dim_skew(mu: Partition, lam: Partition) -> int:
    """Number of monotone paths mu -> lam in the Young graph."""
    if not lam.contains(mu):
        return 0
    return _dim_skew(mu.parts, lam.parts)


def falling_factorial(n: int, m: int) -> int:
    """n (n-1) ... (n-m+1)."""
    out = 1
    for k in range(m):
        out *= n - k
    return out
