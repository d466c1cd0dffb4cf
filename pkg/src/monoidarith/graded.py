"""Monoids graded by degree on the grid {q^n}: monic polynomials over F_q and
synthetic instances given by their prime counts per degree.

Norms are never materialized; everything works with degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator

from .core import BudgetError, Factorization, Grid, PrimeHandle

ENUMERATION_BUDGET = 2_000_000


def _mobius_int(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def irreducible_count(q: int, d: int) -> int:
    """Number of monic irreducible polynomials of degree d over F_q."""
    q, d = int(q), int(d)
    if q < 2 or d < 1:
        raise ValueError("need q >= 2 and d >= 1")
    total = sum(_mobius_int(e) * q ** (d // e) for e in range(1, d + 1) if d % e == 0)
    assert total % d == 0
    return total // d


@dataclass
class GradedInstance:
    """Prime elements counted per degree; an element of degree n has norm q**n.

    ``pi_func`` (if given) supplies pi_d for every degree; otherwise ``pi``
    lists pi_1..pi_D and higher degrees are unknown.
    """

    q: int
    pi: list[int] = field(default_factory=list)
    kappa: float = 1.0
    theta: float = 0.0
    name: str = "graded"
    pi_func: Callable[[int], int] | None = None

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("q must be >= 2")
        if any(c < 0 for c in self.pi):
            raise ValueError("prime counts must be >= 0")
        self.grid = Grid(self.q)
        self._pi_cache: dict[int, int] = {}

    @property
    def d_max(self) -> int | None:
        return None if self.pi_func else len(self.pi)

    def pi_d(self, d: int) -> int:
        d = int(d)
        if d < 1:
            raise ValueError("degree must be >= 1")
        if self.pi_func is not None:
            if d not in self._pi_cache:
                self._pi_cache[d] = self.pi_func(d)
            return self._pi_cache[d]
        if d > len(self.pi):
            raise ValueError(f"prime counts known only up to degree {len(self.pi)}")
        return self.pi[d - 1]

    def pi_list(self, n: int) -> list[int]:
        """[pi_1, ..., pi_n] (pi_0 slot omitted)."""
        return [self.pi_d(d) for d in range(1, n + 1)]

    def element_counts(self, n: int) -> list[int]:
        """Elements per degree 0..n: coefficients of prod_d (1 - u^d)^(-pi_d)."""
        c = [1] + [0] * n
        for d in range(1, n + 1):
            pi = self.pi_d(d)
            if pi == 0:
                continue
            # (1 - u^d)^(-pi) = sum_j C(pi + j - 1, j) u^(dj)
            factor = [math.comb(pi + j - 1, j) for j in range(n // d + 1)]
            c = [
                sum(factor[j] * c[m - d * j] for j in range(m // d + 1))
                for m in range(n + 1)
            ]
        return c

    def prime_stream(self, n_max: int) -> list[PrimeHandle]:
        """Anonymous handles, degree-ascending, for every prime of degree <= n_max."""
        handles, idx = [], 0
        for d in range(1, n_max + 1):
            for _ in range(self.pi_d(d)):
                handles.append(PrimeHandle(idx, d))
                idx += 1
        return handles

    def pi_tail_const(self) -> float:
        """c with pi_d <= c q^d / d over the known degrees (used for tail bounds)."""
        if self.pi_func is not None:
            return 1.0
        return max([1.0] + [c * d / self.q**d for d, c in enumerate(self.pi, 1)])

    def __repr__(self):
        return f"GradedInstance(name={self.name!r}, q={self.q})"


def polynomial_instance(q: int) -> GradedInstance:
    """Monic polynomials over F_q: kappa = q/(q-1), theta = 0."""
    if q < 2:
        raise ValueError("q must be >= 2")
    return GradedInstance(
        q=q,
        kappa=q / (q - 1),
        theta=0.0,
        name=f"f{q}",
        pi_func=lambda d: irreducible_count(q, d),
    )


def graded_element_count(inst: GradedInstance, n: int) -> int:
    if n < 0:
        raise ValueError("degree must be >= 0")
    return inst.element_counts(n)[n]


def graded_enumerate(
    inst: GradedInstance, n_max: int, budget: int = ENUMERATION_BUDGET
) -> Iterator[Factorization]:
    """Every element of degree <= n_max exactly once (multiset composition over the prime stream)."""
    total = sum(inst.element_counts(n_max))
    if total > budget:
        raise BudgetError(f"{total} elements of degree <= {n_max} exceed budget {budget}")
    primes = inst.prime_stream(n_max)
    grid = inst.grid

    def rec(start: int, room: int, terms: tuple) -> Iterator[Factorization]:
        yield Factorization(terms, grid)
        for j in range(start, len(primes)):
            p = primes[j]
            if p.norm_key > room:
                break
            for s in range(1, room // p.norm_key + 1):
                yield from rec(j + 1, room - s * p.norm_key, terms + ((p, s),))

    yield from rec(0, n_max, ())


def read_synthetic(path: str | Path) -> GradedInstance:
    """Parse a synthetic instance file.

    Lines: ``q <base>``, ``kappa <value>``, ``theta <value>``, ``d <degree> <count>``;
    blank lines and ``#`` comments are ignored. Missing degrees count 0.
    """
    q, kappa, theta, counts = None, None, 0.0, {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0].lower()
        try:
            if key == "q" and len(parts) == 2:
                q = int(parts[1])
            elif key == "kappa" and len(parts) == 2:
                kappa = float(parts[1])
            elif key == "theta" and len(parts) == 2:
                theta = float(parts[1])
            elif key == "d" and len(parts) == 3:
                d, c = int(parts[1]), int(parts[2])
                if d < 1 or c < 0 or d in counts:
                    raise ValueError
                counts[d] = c
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"{path}:{lineno}: cannot parse {raw!r}") from None
    if q is None:
        raise ValueError(f"{path}: missing 'q' header")
    if not counts:
        raise ValueError(f"{path}: no 'd' lines")
    pi = [counts.get(d, 0) for d in range(1, max(counts) + 1)]
    return GradedInstance(
        q=q, pi=pi, kappa=1.0 if kappa is None else kappa, theta=theta, name=Path(path).stem
    )


def write_synthetic(inst: GradedInstance, path: str | Path, n_max: int | None = None) -> None:
    n = n_max if n_max is not None else inst.d_max
    if n is None:
        raise ValueError("n_max required for instances with unbounded prime counts")
    lines = [f"q {inst.q}", f"kappa {inst.kappa!r}", f"theta {inst.theta!r}"]
    lines += [f"d {d} {inst.pi_d(d)}" for d in range(1, n + 1)]
    Path(path).write_text("\n".join(lines) + "\n")
