import pytest
from hypothesis import given, strategies as st

from monoidarith.core import (
    DENSE, Factorization, Grid, NormKey, PrimeHandle, big_omega, divisors, is_h_free,
    is_h_full, moebius, moebius_identity_check, omega, split_free_full,
)

PRIMES = [2, 3, 5, 7, 11, 13]


@st.composite
def factorizations(draw, graded=False):
    picks = draw(st.lists(st.tuples(st.integers(0, 5), st.integers(1, 4)),
                          max_size=4, unique_by=lambda t: t[0]))
    if graded:
        return Factorization.of([(PrimeHandle(i, i + 1), s) for i, s in picks], Grid(2))
    return Factorization.of([(PrimeHandle(i, PRIMES[i]), s) for i, s in picks])


def test_identity_is_both_free_and_full():
    e = Factorization()
    assert e.norm == 1 and is_h_free(e, 2) and is_h_full(e, 2)
    assert omega(e) == big_omega(e) == 0 and moebius(e) == 1


def test_norm_and_counts():
    f = Factorization.of([(PrimeHandle(1, 3), 2), (PrimeHandle(0, 2), 3)])
    assert f.norm == 72 and omega(f) == 2 and big_omega(f) == 5
    assert f.multiplicities == (3, 2)


def test_graded_norm_is_power_of_q():
    f = Factorization.of([(PrimeHandle(0, 1), 2), (PrimeHandle(3, 2), 1)], Grid(3))
    assert f.norm_key == NormKey(4, Grid(3)) and f.norm == 81


def test_invalid_inputs():
    with pytest.raises(ValueError):
        Factorization.of([(PrimeHandle(0, 2), 1), (PrimeHandle(0, 2), 1)])
    with pytest.raises(ValueError):
        Factorization(((PrimeHandle(0, 2), 0),))
    with pytest.raises(ValueError):
        is_h_free(Factorization(), 1)
    with pytest.raises(OverflowError):
        Factorization.of([(PrimeHandle(0, 2), 129)])
    with pytest.raises(ValueError):
        NormKey(1, Grid(2)) * NormKey(1, DENSE)


@given(factorizations(), factorizations())
def test_monoid_operation_adds_multiplicities(a, b):
    c = a + b
    assert c.norm == a.norm * b.norm
    assert big_omega(c) == big_omega(a) + big_omega(b)
    assert c == b + a


@given(factorizations(), st.integers(2, 5))
def test_split_is_coprime_and_recombines(f, h):
    free, full = split_free_full(f, h)
    assert is_h_free(free, h) and is_h_full(full, h)
    assert not {p for p, _ in free.terms} & {p for p, _ in full.terms}
    assert free + full == f


@given(factorizations(), st.integers(2, 5))
def test_free_and_full_overlap_only_at_identity(f, h):
    if is_h_free(f, h) and is_h_full(f, h):
        assert f.is_identity()


@given(factorizations(), st.integers(2, 4))
def test_moebius_identity(f, h):
    assert moebius_identity_check(f, h)


@given(factorizations(graded=True), st.integers(2, 4))
def test_moebius_identity_graded(f, h):
    assert moebius_identity_check(f, h)


@given(factorizations())
def test_divisor_count(f):
    expected = 1
    for _, s in f.terms:
        expected *= s + 1
    ds = list(divisors(f))
    assert len(ds) == expected and len(set(ds)) == expected
