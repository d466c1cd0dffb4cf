"""Numerical constants of the moment theorems, each with a truncation bound.

Prime sums run over the instance's prime-element stream in fixed blocks and
merge with ``math.fsum`` (exactly rounded, so block order cannot matter).
Dense-grid sums add a prime-density model of the tail; the reported
``tail_bound`` is the comparison bound sum_{n > X} c n^-alpha <= c X^(1-alpha)/(alpha-1),
which covers both the truncated tail and the model.
On a graded grid ``cutoff`` is a degree and log log x means log(n log q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BLOCK = 2**16
DENSE_CUTOFF = 10**7
MERTENS_CUTOFF = 10**8
GRADED_MAX_DEGREE = 400
MIN_PRIMES = 100


@dataclass(frozen=True)
class ConstantEstimate:
    name: str
    value: float
    tail_bound: float
    cutoff: int
    rigorous: bool = True
    converged: bool = True

    def __float__(self):
        return self.value


def _fsum_blocks(values: np.ndarray) -> float:
    partials = [math.fsum(values[i : i + BLOCK]) for i in range(0, len(values), BLOCK)]
    return math.fsum(partials)


def _graded_degree_cap(q: int) -> int:
    return min(GRADED_MAX_DEGREE, int(300 / math.log10(q)))


def _default_cutoff(inst, alpha: float = 1.5) -> int:
    """Dense: 10^7. Graded: first degree whose tail bound drops below 1e-16."""
    if not inst.grid.graded:
        return DENSE_CUTOFF
    cap = _graded_degree_cap(inst.q)
    if inst.d_max is not None:
        return min(inst.d_max, cap)
    for D in range(1, cap + 1):
        if _graded_tail(inst, D, alpha, 1.0) < 1e-16:
            return D
    return cap


def _graded_tail(inst, D: int, alpha: float, scale: float) -> float:
    q = inst.q
    c = inst.pi_tail_const()
    r = q ** (1 - alpha)
    return c * scale * r ** (D + 1) / ((D + 1) * (1 - r))


def _graded_arrays(inst, D: int):
    """Degrees 1..D, prime counts (float), norms (float)."""
    d = np.arange(1, D + 1, dtype=np.float64)
    pi = np.array([float(inst.pi_d(k)) for k in range(1, D + 1)])
    return d, pi, np.power(float(inst.q), d)


def prime_sum(inst, g, alpha: float, scale: float, cutoff: int | None = None,
              name: str = "prime_sum") -> ConstantEstimate:
    """Sum of g(N(p)) over all prime elements, with |g(N)| <= scale*N^-alpha beyond the cutoff."""
    if alpha <= 1:
        raise ValueError("tail exponent must exceed 1")
    X = _default_cutoff(inst, alpha) if cutoff is None else int(cutoff)
    if inst.grid.graded:
        if inst.d_max is not None and X > inst.d_max:
            raise ValueError(f"cutoff degree {X} beyond known prime counts ({inst.d_max})")
        _, pi, N = _graded_arrays(inst, X)
        mask = pi > 0
        value = _fsum_blocks(pi[mask] * g(N[mask]))
        tail = _graded_tail(inst, X, alpha, scale)
        rigorous = inst.pi_func is not None
        return ConstantEstimate(name, value, tail, X, rigorous)
    if X < 2:
        raise ValueError("cutoff must be >= 2")
    N = inst.prime_norms(X).astype(np.float64)
    value = _fsum_blocks(g(N)) + inst.prime_density_tail(g, X)
    tail = inst.per_norm * scale * X ** (1 - alpha) / (alpha - 1)
    return ConstantEstimate(name, value, tail, X)


def _loglog(inst, x: float) -> float:
    """log log x on the instance grid; for graded grids x is the degree n."""
    if inst.grid.graded:
        return math.log(x * math.log(inst.q))
    return math.log(math.log(x))


def zeta_value(inst, s: float, cutoff: int | None = None) -> ConstantEstimate:
    """zeta of the monoid at real s > 1 via the Euler product (log-summed)."""
    if s <= 1:
        raise ValueError("zeta needs s > 1")
    est = prime_sum(inst, lambda N: -np.log1p(-np.power(N, -s)), s, 2.0, cutoff, "log_zeta")
    value = math.exp(est.value)
    return ConstantEstimate(f"zeta({s:g})", value, value * math.expm1(est.tail_bound),
                            est.cutoff, est.rigorous)


def _mertens_raw(inst, X: int, norms=None) -> tuple[float, int]:
    if inst.grid.graded:
        _, pi, N = _graded_arrays(inst, X)
        return _fsum_blocks(pi / N) - _loglog(inst, X), int(pi.sum())
    N = inst.prime_norms(X).astype(np.float64) if norms is None else norms[norms <= X]
    return _fsum_blocks(1.0 / N) - _loglog(inst, X), len(N)


def mertens_A(inst, cutoff: int | None = None) -> ConstantEstimate:
    """Mertens-type constant by two-point extrapolation in 1/log x (heuristic error).

    The second cutoff is x^(7/8) (degree floor(7D/8) on a graded grid). When the
    raw values at the two cutoffs differ by more than 1/log of the smaller one
    the sum is flagged non-convergent.
    """
    if inst.grid.graded:
        X2 = cutoff if cutoff is not None else (inst.d_max or 60)
        X1 = (7 * X2) // 8
        if X1 < 1:
            raise ValueError("cutoff degree too small")
        L1, L2 = X1 * math.log(inst.q), X2 * math.log(inst.q)
        A1, _ = _mertens_raw(inst, X1)
        A2, count = _mertens_raw(inst, X2)
    else:
        X2 = MERTENS_CUTOFF if cutoff is None else int(cutoff)
        X1 = int(round(X2 ** 0.875))
        if X1 < 3:
            raise ValueError("cutoff too small")
        norms = inst.prime_norms(X2).astype(np.float64)
        L1, L2 = math.log(X1), math.log(X2)
        A1, _ = _mertens_raw(inst, X1, norms)
        A2, count = _mertens_raw(inst, X2, norms)
    if abs(A2 - A1) > 1.0 / L1:
        return ConstantEstimate("A", A2, math.inf, X2, rigorous=False, converged=False)
    if count < MIN_PRIMES:
        raise ValueError(f"only {count} prime elements below the cutoff; need {MIN_PRIMES}")
    value = (A2 * L2 - A1 * L1) / (L2 - L1)
    return ConstantEstimate("A", value, abs(value - A2), X2, rigorous=False)


def mertens_A_prime(inst, cutoff: int | None = None) -> ConstantEstimate:
    """kappa + integral_1^inf (I(y) - kappa y) y^-2 dy, dense grids only.

    On a graded grid I(y) is a step function against a continuous kappa*y, so the
    integral diverges; the constant is not defined there.
    """
    if inst.grid.graded:
        raise ValueError("the constant A' is defined on the dense grid only")
    X = 10**6 if cutoff is None else int(cutoff)
    kappa = inst.kappa
    n = np.arange(1, X, dtype=np.float64)
    if inst.name == "z":
        I = n
    else:
        I = np.cumsum(inst.element_counts(X - 1))[1:].astype(np.float64)
    terms = I / (n * (n + 1)) - kappa * np.log1p(1.0 / n)
    value = kappa + _fsum_blocks(terms)
    # I(y) - kappa*y on [n, n+1) lies between these two endpoint values
    half = slice(len(n) // 2, None)
    window = np.maximum(np.abs(I[half] - kappa * n[half]), np.abs(I[half] - kappa * (n[half] + 1)))
    bound = 2.0 * float(window.max()) / X
    return ConstantEstimate("A'", value, bound, X, rigorous=False)


def const_B(inst) -> float:
    """-pi^2/6 on the dense grid, (log log q)^2 - pi^2/6 on a graded grid."""
    if inst.grid.graded:
        return math.log(math.log(inst.q)) ** 2 - math.pi**2 / 6
    return -math.pi**2 / 6


def _combine(name, value, err, cutoff, *parts):
    return ConstantEstimate(name, value, err, cutoff,
                            all(p.rigorous for p in parts), all(p.converged for p in parts))


def _check_h(h):
    if h < 2:
        raise ValueError("h must be >= 2")


def const_C(inst, h: int, cutoff: int | None = None, A: ConstantEstimate | None = None):
    """(C1, C2): the secondary constants of the h-free moment asymptotics."""
    _check_h(h)
    A = mertens_A(inst) if A is None else A
    s1 = prime_sum(inst, lambda N: (N - 1) / (N * (N**h - 1)), h, 1.0, cutoff, "C1_sum")
    s2 = prime_sum(inst, lambda N: ((N ** (h - 1) - 1) / (N**h - 1)) ** 2, 2, 1.0, cutoff, "C2_sum")
    c1 = A.value - s1.value
    e1 = A.tail_bound + s1.tail_bound
    c2 = math.fsum([c1 * c1, c1, const_B(inst), -s2.value])
    e2 = abs(2 * c1 + 1) * e1 + e1 * e1 + s2.tail_bound
    return (_combine("C1", c1, e1, s1.cutoff, A, s1),
            _combine("C2", c2, e2, s2.cutoff, A, s1, s2))


def _root(N, h):
    return np.power(N, 1.0 / h)


def gamma_h(inst, h: int, cutoff: int | None = None) -> ConstantEstimate:
    """Euler product prod (1 + (N - N^(1/h)) / (N^2 (N^(1/h) - 1))) for the h-full density."""
    _check_h(h)

    def g(N):
        r = _root(N, h)
        return np.log1p((N - r) / (N * N * (r - 1)))

    X = cutoff
    if X is not None and not inst.grid.graded and X < 2**h:
        raise ValueError(f"cutoff must be >= {2**h}")
    est = prime_sum(inst, g, 1 + 1 / h, 2.0, X, "log_gamma")
    value = math.exp(est.value)
    return ConstantEstimate(f"gamma_{h}", value, value * math.expm1(est.tail_bound),
                            est.cutoff, est.rigorous)


def L_h_value(inst, h: int, r: float, cutoff: int | None = None) -> ConstantEstimate:
    """sum_p 1 / (N^(r/h - 1) (N - N^(1 - 1/h) + 1)), convergent for r > h."""
    _check_h(h)
    if r <= h:
        raise ValueError("the sum diverges for r <= h")

    def g(N):
        return 1.0 / (np.power(N, r / h - 1) * (N - np.power(N, 1 - 1 / h) + 1))

    est = prime_sum(inst, g, r / h, 2.0, cutoff, f"L_{h}({r:g})")
    return est


def const_D(inst, h: int, cutoff: int | None = None, A: ConstantEstimate | None = None):
    """(D1, D2): the secondary constants of the h-full moment asymptotics."""
    _check_h(h)
    A = mertens_A(inst) if A is None else A
    la = L_h_value(inst, h, h + 1, cutoff)
    lb = L_h_value(inst, h, 2 * h, cutoff)
    s2 = prime_sum(inst, lambda N: (1.0 / (N - np.power(N, 1 - 1 / h) + 1)) ** 2,
                   2, 4.0, cutoff, "D2_sum")
    d1 = math.fsum([A.value, -math.log(h), la.value, -lb.value])
    e1 = A.tail_bound + la.tail_bound + lb.tail_bound
    d2 = math.fsum([d1 * d1, d1, const_B(inst), -s2.value])
    e2 = abs(2 * d1 + 1) * e1 + e1 * e1 + s2.tail_bound
    return (_combine("D1", d1, e1, la.cutoff, A, la, lb),
            _combine("D2", d2, e2, s2.cutoff, A, la, lb, s2))


def all_constants(inst, h: int, cutoff: int | None = None) -> list[ConstantEstimate]:
    """Every constant entering the theorems, for the CLI table."""
    A = mertens_A(inst)
    out = [zeta_value(inst, h, cutoff), A]
    if not inst.grid.graded:
        out.append(mertens_A_prime(inst, min(cutoff or 10**6, 10**7)))
    out.append(ConstantEstimate("B", const_B(inst), 0.0, 0))
    out += list(const_C(inst, h, cutoff, A))
    out.append(gamma_h(inst, h, cutoff))
    out += [L_h_value(inst, h, h + 1, cutoff), L_h_value(inst, h, 2 * h, cutoff)]
    out += list(const_D(inst, h, cutoff, A))
    return out
