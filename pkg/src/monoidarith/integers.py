"""The multiplicative monoid of positive integers (kappa = 1, theta = 0).

Primes come from a segmented odd-only sieve; factorizations from a segmented
least-prime-factor table.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .core import DENSE, BudgetError, Factorization, PrimeHandle

DEFAULT_SEGMENT = 2**22
PRIME_BUDGET = 10**9
LPF_BUDGET = 10**8

_prime_cache = np.array([2, 3, 5, 7], dtype=np.int64)
_prime_cache_limit = 10


def _small_primes(limit: int) -> np.ndarray:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def primes_upto(limit: int, segment: int = DEFAULT_SEGMENT) -> np.ndarray:
    """All primes <= limit as int64, ascending. Results are cached."""
    global _prime_cache, _prime_cache_limit
    if limit > PRIME_BUDGET:
        raise BudgetError(f"prime sieve limit {limit} exceeds budget {PRIME_BUDGET}")
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    if limit <= _prime_cache_limit:
        return _prime_cache[: np.searchsorted(_prime_cache, limit, side="right")]
    base = _small_primes(math.isqrt(limit) + 1)[1:]  # odd base primes
    chunks = [np.array([2], dtype=np.int64)]
    lo = 3
    while lo <= limit:
        hi = min(lo + 2 * segment, limit + 1)  # odd numbers in [lo, hi)
        count = (hi - lo + 1) // 2
        mark = np.ones(count, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, -(-lo // p) * p)
            if start % 2 == 0:
                start += p
            mark[(start - lo) // 2 :: p] = False
        chunks.append(lo + 2 * np.flatnonzero(mark).astype(np.int64))
        lo = hi if hi % 2 else hi + 1
    primes = np.concatenate(chunks)
    _prime_cache, _prime_cache_limit = primes, limit
    return primes


def prime_count(limit: int) -> int:
    return len(primes_upto(limit))


def segment_stats(lo: int, hi: int, base: np.ndarray):
    """Factor statistics for every n in [lo, hi).

    Returns (lpf, omega, big_omega, min_exp, max_exp). ``base`` must hold every
    prime up to sqrt(hi - 1). For n = 1: lpf 0, omega 0, min_exp 127, max_exp 0.
    """
    size = hi - lo
    rem = np.arange(lo, hi, dtype=np.int64)
    lpf = np.zeros(size, dtype=np.int64)
    om = np.zeros(size, dtype=np.int8)
    big = np.zeros(size, dtype=np.int8)
    mn = np.full(size, 127, dtype=np.int8)
    mx = np.zeros(size, dtype=np.int8)
    for p in base:
        p = int(p)
        if p * p >= hi:
            break
        start = -(-lo // p) * p
        if start >= hi:
            continue
        idx = np.arange(start - lo, size, p)
        n = idx + lo
        e = np.ones(len(idx), dtype=np.int8)
        pk = p * p
        while pk < hi:
            e += (n % pk == 0).astype(np.int8)
            pk *= p
        fresh = lpf[idx] == 0
        lpf[idx[fresh]] = p
        om[idx] += 1
        big[idx] += e
        mn[idx] = np.minimum(mn[idx], e)
        mx[idx] = np.maximum(mx[idx], e)
        rem[idx] //= np.power(p, e.astype(np.int64))
    tail = rem > 1
    lpf[tail & (lpf == 0)] = rem[tail & (lpf == 0)]
    om[tail] += 1
    big[tail] += 1
    mn[tail] = np.minimum(mn[tail], 1)
    mx[tail] = np.maximum(mx[tail], 1)
    return lpf, om, big, mn, mx


def _density_term(g, u: float, stretch: float) -> float:
    """g(e^(stretch u)) e^u / u with overflow treated as a vanishing term."""
    with np.errstate(all="ignore"):
        v = float(g(np.float64(math.exp(stretch * u)))) * math.exp(u) / u
    return v if math.isfinite(v) else 0.0


class DenseInstance:
    """A monoid on the dense grid, described by its prime-element norm stream."""

    grid = DENSE
    name = "dense"
    kappa = 1.0
    theta = 0.0
    # max number of prime elements sharing one integer norm (tail bounds)
    per_norm = 1

    def prime_norms(self, bound: int) -> np.ndarray:
        """Norms of all prime elements with norm <= bound, ascending, with repetition."""
        raise NotImplementedError

    def prime_stream(self, bound: int) -> list[PrimeHandle]:
        return [PrimeHandle(i, int(n)) for i, n in enumerate(self.prime_norms(bound))]

    def element_counts(self, bound: int) -> np.ndarray:
        """a[n] = number of elements of norm n, for 0 <= n <= bound (a[0] = 0).

        Generated by multiplying the local factors 1/(1 - v) over the prime stream.
        """
        a = np.zeros(bound + 1, dtype=np.int64)
        if bound >= 1:
            a[1] = 1
        norms = self.prime_norms(bound)
        for N in norms:
            N = int(N)
            old = a[: bound // N + 1].copy()
            pk = N
            while pk <= bound:
                m = bound // pk
                a[pk : m * pk + 1 : pk] += old[1 : m + 1]
                pk *= N
        return a

    def prime_density_tail(self, g, X: float) -> float:
        """Model estimate of sum of g(N(p)) over prime elements with N(p) > X."""
        from scipy.integrate import IntegrationWarning, quad

        # the integrand decays exponentially in u; 700 keeps exp() finite
        # a model estimate only; the rigorous tail bound is computed separately
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            val, _ = quad(lambda u: _density_term(g, u, 1.0), math.log(X), 700.0, limit=400)
        return val

    def __repr__(self):
        return f"{type(self).__name__}()"


class IntegerInstance(DenseInstance):
    """(N, *) with the rational primes; lpf table up to ``limit``."""

    name = "z"

    def __init__(self, limit: int = 10**6, segment: int = DEFAULT_SEGMENT):
        if limit < 2:
            raise ValueError("limit must be >= 2")
        self.limit = limit
        self.segment = segment
        self._lpf = None

    @property
    def lpf_table(self) -> np.ndarray:
        if self._lpf is None:
            if self.limit > LPF_BUDGET:
                raise BudgetError(f"lpf table limit {self.limit} exceeds budget {LPF_BUDGET}")
            base = primes_upto(math.isqrt(self.limit) + 1)
            table = np.zeros(self.limit + 1, dtype=np.uint32)
            lo = 1
            while lo <= self.limit:
                hi = min(lo + self.segment, self.limit + 1)
                table[lo:hi] = segment_stats(lo, hi, base)[0]
                lo = hi
            self._lpf = table
        return self._lpf

    def prime_norms(self, bound: int) -> np.ndarray:
        return primes_upto(bound)

    def element_counts(self, bound: int) -> np.ndarray:
        a = np.ones(bound + 1, dtype=np.int64)
        a[0] = 0
        return a

    def handle(self, p: int) -> PrimeHandle:
        primes = primes_upto(max(p, 2))
        i = int(np.searchsorted(primes, p))
        if i >= len(primes) or primes[i] != p:
            raise ValueError(f"{p} is not prime")
        return PrimeHandle(i, p)

    def factorize(self, n: int) -> Factorization:
        return int_factorize(n, self)


def int_prime_stream(limit: int) -> list[PrimeHandle]:
    if limit < 2:
        raise ValueError("limit must be >= 2")
    return [PrimeHandle(i, int(p)) for i, p in enumerate(primes_upto(limit))]


def int_factorize(n: int, inst: IntegerInstance) -> Factorization:
    if n < 1 or n > inst.limit:
        raise ValueError(f"n must satisfy 1 <= n <= {inst.limit}, got {n}")
    table = inst.lpf_table
    primes = primes_upto(inst.limit)
    terms = []
    while n > 1:
        p = int(table[n])
        s = 0
        while n % p == 0:
            n //= p
            s += 1
        terms.append((PrimeHandle(int(np.searchsorted(primes, p)), p), s))
    return Factorization(tuple(terms))
