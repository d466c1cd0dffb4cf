import numpy as np
from hypothesis import given, settings, strategies as st

import oracles
from monoidarith.integers import IntegerInstance, prime_count, primes_upto, segment_stats


def test_prime_counts_match_known_values():
    assert [prime_count(10**k) for k in range(1, 8)] == [4, 25, 168, 1229, 9592, 78498, 664579]


def test_segmented_sieve_matches_single_pass():
    assert np.array_equal(primes_upto(10**6, segment=1000), primes_upto(10**6))


@settings(max_examples=200)
@given(st.integers(1, 10**5))
def test_factorize_matches_trial_division(n):
    inst = IntegerInstance(10**5)
    f = inst.factorize(n)
    assert {p.norm_key: s for p, s in f.terms} == oracles.factor(n)


def test_segment_stats_columns():
    base = primes_upto(400)
    lpf, w, big, mn, mx = segment_stats(90000, 90500, base)
    for i, n in enumerate(range(90000, 90500)):
        f = oracles.factor(n)
        assert lpf[i] == min(f) and w[i] == len(f) and big[i] == sum(f.values())
        assert mn[i] == min(f.values()) and mx[i] == max(f.values())


def test_handle_is_prime_ordinal():
    inst = IntegerInstance(100)
    assert inst.handle(2).index == 0 and inst.handle(97).index == 24
