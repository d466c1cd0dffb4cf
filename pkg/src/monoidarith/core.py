"""Monoid elements as canonical factorizations, plus the pointwise arithmetic
functions omega, Omega, mu and the h-free / h-full predicates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

# Norms (dense grid) must fit in 128 bits.
MAX_NORM = 2**128 - 1


class ConsistencyError(RuntimeError):
    """A mathematical cross-check failed (exact identity or two independent routes disagree)."""


class BudgetError(MemoryError):
    """Requested enumeration or sieve exceeds the configured budget."""


@dataclass(frozen=True, order=True)
class Grid:
    """Norm grid: dense (all integers) when ``q`` is None, else the powers of ``q``."""

    q: int | None = None

    def __post_init__(self):
        if self.q is not None and self.q < 2:
            raise ValueError(f"graded grid base must be >= 2, got {self.q}")

    @property
    def graded(self) -> bool:
        return self.q is not None

    def __str__(self):
        return "dense" if self.q is None else f"q={self.q}"


DENSE = Grid()


@dataclass(frozen=True, order=True)
class NormKey:
    """A point of the grid: the norm itself (dense) or a degree d meaning q**d (graded)."""

    value: int
    grid: Grid = DENSE

    def __post_init__(self):
        if self.grid.graded:
            if self.value < 0:
                raise ValueError("graded degree must be >= 0")
        elif self.value < 1:
            raise ValueError("dense norm must be >= 1")

    @property
    def norm(self) -> int:
        return self.grid.q**self.value if self.grid.graded else self.value

    def __mul__(self, other: NormKey) -> NormKey:
        if self.grid != other.grid:
            raise ValueError("cannot combine norm keys from different grids")
        if self.grid.graded:
            return NormKey(self.value + other.value, self.grid)
        return NormKey(_checked(self.value * other.value), self.grid)


def _checked(n: int) -> int:
    if n > MAX_NORM:
        raise OverflowError(f"norm {n} exceeds the 128-bit range")
    return n


@dataclass(frozen=True, order=True)
class PrimeHandle:
    """A prime element: its ordinal in norm order and its norm on the grid.

    ``norm_key`` is the integer norm (>= 2) on a dense grid or the degree (>= 1)
    on a graded one.
    """

    index: int
    norm_key: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("prime index must be >= 0")
        if self.norm_key < 1:
            raise ValueError("prime norm key must be >= 1")


@dataclass(frozen=True)
class Factorization:
    """Canonical element s1*p1 + ... + sr*pr, terms sorted by prime index.

    The empty factorization is the identity (norm 1).
    """

    terms: tuple[tuple[PrimeHandle, int], ...] = ()
    grid: Grid = field(default=DENSE, compare=True)

    def __post_init__(self):
        prev = -1
        for p, s in self.terms:
            if not isinstance(s, int) or s < 1:
                raise ValueError(f"multiplicity must be a positive integer, got {s!r}")
            if p.index <= prev:
                raise ValueError("terms must have strictly increasing prime indices")
            if not self.grid.graded and p.norm_key < 2:
                raise ValueError("dense prime norms must be >= 2")
            prev = p.index
        if not self.grid.graded:
            n = 1
            for p, s in self.terms:
                n = _checked(n * p.norm_key**s)

    @classmethod
    def of(cls, terms, grid: Grid = DENSE) -> Factorization:
        """Build from (prime, multiplicity) pairs in any order; duplicate primes are rejected."""
        terms = sorted(((p, s) for p, s in terms), key=lambda t: t[0].index)
        for (a, _), (b, _) in itertools.pairwise(terms):
            if a.index == b.index:
                raise ValueError(f"duplicate prime index {a.index}")
        return cls(tuple(terms), grid)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(s for _, s in self.terms)

    @property
    def norm_key(self) -> NormKey:
        if self.grid.graded:
            return NormKey(sum(p.norm_key * s for p, s in self.terms), self.grid)
        n = 1
        for p, s in self.terms:
            n *= p.norm_key**s
        return NormKey(n, self.grid)

    @property
    def norm(self) -> int:
        return self.norm_key.norm

    def is_identity(self) -> bool:
        return not self.terms

    def __add__(self, other: Factorization) -> Factorization:
        """Monoid operation (multiplication of the underlying objects)."""
        if self.grid != other.grid:
            raise ValueError("grid mismatch")
        acc: dict[PrimeHandle, int] = {}
        for p, s in self.terms + other.terms:
            acc[p] = acc.get(p, 0) + s
        return Factorization.of(acc.items(), self.grid)

    def scale(self, k: int) -> Factorization:
        if k < 0:
            raise ValueError("scale must be >= 0")
        if k == 0:
            return Factorization((), self.grid)
        return Factorization(tuple((p, s * k) for p, s in self.terms), self.grid)


def omega(f: Factorization) -> int:
    return len(f.terms)


def big_omega(f: Factorization) -> int:
    return sum(s for _, s in f.terms)


def _check_h(h: int) -> None:
    if h < 2:
        raise ValueError(f"h must be >= 2, got {h}")


def is_h_free(f: Factorization, h: int) -> bool:
    _check_h(h)
    return all(s <= h - 1 for _, s in f.terms)


def is_h_full(f: Factorization, h: int) -> bool:
    _check_h(h)
    return all(s >= h for _, s in f.terms)


def moebius(f: Factorization) -> int:
    if any(s > 1 for _, s in f.terms):
        return 0
    return -1 if len(f.terms) % 2 else 1


def divisors(f: Factorization, bound=None):
    """All divisors d of f; ``bound(p, s)`` caps the multiplicity of p in d."""
    ranges = [range((bound(p, s) if bound else s) + 1) for p, s in f.terms]
    for exps in itertools.product(*ranges):
        yield Factorization(
            tuple((p, e) for (p, _), e in zip(f.terms, exps) if e), f.grid
        )


def moebius_identity_check(f: Factorization, h: int) -> bool:
    """Sum of mu(d) over d with h*d | f equals the h-free indicator of f."""
    _check_h(h)
    total = sum(moebius(d) for d in divisors(f, bound=lambda p, s: s // h))
    return total == int(is_h_free(f, h))


def split_free_full(f: Factorization, h: int) -> tuple[Factorization, Factorization]:
    """Split f into its h-free part (multiplicities < h) and h-full part (>= h).

    The two parts share no prime and sum back to f.
    """
    _check_h(h)
    free = tuple((p, s) for p, s in f.terms if s < h)
    full = tuple((p, s) for p, s in f.terms if s >= h)
    return Factorization(free, f.grid), Factorization(full, f.grid)
