import math

import numpy as np
import pytest

import oracles
from monoidarith.gaussian import GaussianInstance, class_number_density, gaussian_ideal_count


def test_kappa_is_pi_over_four():
    assert GaussianInstance.kappa == pytest.approx(math.pi / 4, rel=1e-15)
    assert class_number_density(0, 1, 1, 1.0, 4, -4) == pytest.approx(math.pi / 4)


def test_prime_norms_split_inert_ramified():
    norms = GaussianInstance(50).prime_norms(50).tolist()
    assert norms == [2, 5, 5, 9, 13, 13, 17, 17, 29, 29, 37, 37, 41, 41, 49]


def test_small_count_is_nine():
    # norms 1, 2, 4, 5 (twice), 8, 9, 10 (twice)
    assert gaussian_ideal_count(10) == oracles.FROZEN["gaussian_ideals_10"] == 9


def test_ideal_counts_match_character_sum_everywhere():
    a = GaussianInstance(3000).element_counts(3000)
    cum = np.cumsum(a)
    for x in range(1, 3001, 37):
        assert cum[x] == oracles.character_divisor_count(x)
    assert gaussian_ideal_count(10**4) == oracles.FROZEN["gaussian_ideals_1e4"]
