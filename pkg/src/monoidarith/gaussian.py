"""Ideals of Z[i]: prime ideals from the splitting of rational primes.

kappa = pi/4 from the class number formula; theta = 1 - 2/(n_K + 1) = 1/3.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .core import PrimeHandle
from .integers import DenseInstance, _density_term, primes_upto


def class_number_density(r1: int, r2: int, h: int, regulator: float, nu: int, disc: int) -> float:
    """Residue density 2^r1 (2 pi)^r2 h R / (nu sqrt|d|) of the ideal count."""
    return 2**r1 * (2 * math.pi) ** r2 * h * regulator / (nu * math.sqrt(abs(disc)))


class GaussianInstance(DenseInstance):
    name = "gaussian"
    kappa = class_number_density(r1=0, r2=1, h=1, regulator=1.0, nu=4, disc=-4)
    theta = 1.0 / 3.0
    per_norm = 2

    def __init__(self, limit: int = 10**6):
        if limit < 2:
            raise ValueError("limit must be >= 2")
        self.limit = limit

    def prime_norms(self, bound: int) -> np.ndarray:
        p = primes_upto(max(bound, 2))
        p = p[p <= bound]
        split = p[p % 4 == 1]
        inert = p[p % 4 == 3]
        inert_sq = inert[inert <= math.isqrt(bound)] ** 2
        norms = np.concatenate([p[p == 2], split, split, inert_sq])
        return np.sort(norms, kind="stable")

    def prime_density_tail(self, g, X: float) -> float:
        # split ideals: 2 per p = 1 mod 4, density 1/log t overall;
        # inert ideals: norm p^2 for p = 3 mod 4, density 1/(2 log p) in p.
        from scipy.integrate import IntegrationWarning, quad

        split = super().prime_density_tail(g, X)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            inert, _ = quad(
                lambda u: 0.5 * _density_term(g, u, 2.0),
                0.5 * math.log(X),
                350.0,
                limit=400,
            )
        return split + inert


def gaussian_prime_stream(limit: int) -> list[PrimeHandle]:
    """Prime ideals with norm <= limit; the two conjugates over a split p get consecutive indices."""
    if limit < 2:
        raise ValueError("limit must be >= 2")
    return GaussianInstance(limit).prime_stream(limit)


def gaussian_ideal_count(x: int) -> int:
    """Exact number of ideals of Z[i] with norm <= x (the unit ideal included)."""
    if x < 1:
        raise ValueError("x must be >= 1")
    return int(GaussianInstance(max(x, 2)).element_counts(x).sum())

