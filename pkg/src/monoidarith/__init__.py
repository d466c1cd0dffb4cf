"""h-free and h-full elements of free abelian monoids with a norm."""

from .core import (
    DENSE,
    BudgetError,
    ConsistencyError,
    Factorization,
    Grid,
    NormKey,
    PrimeHandle,
    big_omega,
    is_h_free,
    is_h_full,
    omega,
)
from .gaussian import GaussianInstance
from .graded import GradedInstance, polynomial_instance, read_synthetic
from .integers import IntegerInstance

__all__ = [
    "DENSE", "BudgetError", "ConsistencyError", "Factorization", "Grid", "NormKey",
    "PrimeHandle", "big_omega", "is_h_free", "is_h_full", "omega", "GaussianInstance",
    "GradedInstance", "polynomial_instance", "read_synthetic", "IntegerInstance",
]
