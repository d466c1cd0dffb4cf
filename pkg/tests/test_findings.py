"""Characterization of behaviour that departs from the stated asymptotics.

Each test pins a measured fact so a regression (or a fix) is noticed.
"""

import math
from fractions import Fraction

import pytest

from monoidarith import census as cz
from monoidarith import constants as C
from monoidarith import series as S
from monoidarith import verify as V
from monoidarith.graded import polynomial_instance
from monoidarith.integers import IntegerInstance

F2 = polynomial_instance(2)


def test_graded_double_prime_sum_offset_is_loglog_q_squared():
    """With log log x = log(n log q), the Saidak-type sum misses by -(log log q)^2, not 0."""
    n = 640
    lhs = V._lemma_lhs("saidakeq", F2, n)
    rhs, _ = V._lemma_rhs("saidakeq", F2, n)
    offset = -math.log(math.log(2)) ** 2
    assert lhs - rhs == pytest.approx(offset, abs=0.02)
    assert abs(lhs - rhs - offset) < abs(lhs - rhs) / 5


def parity_limits(q):
    """Both poles u = +-q^(-1/2) of (1 - q u^6) / ((1 - q u^2)(1 - q u^3)(1 - u)) contribute."""
    u0 = q**-0.5
    P = lambda u: (1 - q * u**6) / ((1 - q * u**3) * (1 - u))
    return (P(u0) + P(-u0)) / 2, (P(u0) - P(-u0)) / 2


@pytest.mark.parametrize("q,top", [(2, 80), (3, 50), (5, 36)])
def test_graded_hfull_counts_oscillate_with_parity(q, top):
    inst = polynomial_instance(q)
    F = S.hfull_series(inst, 2, top)
    ratio = lambda n: F(n) / q ** (n / 2)
    even, odd = parity_limits(q)
    assert ratio(top) == pytest.approx(even, rel=1e-3)
    assert ratio(top - 1) == pytest.approx(odd, rel=1e-3)
    lead = inst.kappa * C.gamma_h(inst, 2).value
    assert (even + odd) / 2 == pytest.approx(lead * (math.sqrt(q) + 1) / (2 * math.sqrt(q)), rel=1e-9)
    assert ratio(top) < lead and ratio(top - 1) < lead


def test_squarefree_violation_fraction_not_monotone():
    r = cz.CensusRequest(IntegerInstance(10**5), (10**4, 10**5), subset="hfree", statistic="violation")
    a, b = cz.census(r).values
    assert (a, b) == (Fraction(1687, 6081), Fraction(8783, 30396)) and b > a


def test_D1_does_not_diverge_with_h():
    """L_h(h+1) grows like log h and cancels the -log h term."""
    Z = IntegerInstance(10**6)
    la = [C.L_h_value(Z, h, h + 1, 10**6).value for h in (3, 6, 12)]
    assert all(b - a > 0.5 * math.log(2) for a, b in zip(la, la[1:]))


def test_hfree_count_residuals_are_noise():
    Z = IntegerInstance(10**6)
    t = V.residual_table("hfree-count", Z, 2, (10**3, 10**4, 10**5, 10**6))
    v = t.normalized()
    assert max(map(abs, v)) < 2 and not V.is_bounded(v)
