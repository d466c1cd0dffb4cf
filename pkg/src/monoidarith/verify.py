"""Theorem predictions, residual tables against exact censuses, fitted error
exponents, and numeric checks of the analytic lemmas."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import median

import numpy as np

from . import constants as C
from .census import (COUNT, S1W, S2W, CensusRequest, run_census)
from .constants import ConstantEstimate

THEOREMS = {
    # id: (subset, statistic column, shape family)
    "hfree-count": ("hfree", COUNT),
    "hfull-count": ("hfull", COUNT),
    "hfree-omega1": ("hfree", S1W),
    "hfree-omega2": ("hfree", S2W),
    "hfull-omega1": ("hfull", S1W),
    "hfull-omega2": ("hfull", S2W),
}
LEMMAS = ("mertens-part4", "saidakeq", "sumplogp", "sumnwpx2", "boundnm-part5")


# ---------------------------------------------------------------------------
# grid semantics


def _log_x(inst, x: int) -> float:
    return x * math.log(inst.q) if inst.grid.graded else math.log(x)


def _loglog(inst, x: int) -> float:
    return math.log(_log_x(inst, x))


def _power(inst, x: int, e: float) -> float:
    """x^e where x is a norm (dense) or the degree of q^x (graded)."""
    return math.exp(e * _log_x(inst, x))


def shape_value(shape: str, inst, x: int, h: int) -> float:
    ll = _loglog(inst, x)
    base, _, tail = shape.partition("*")
    b = _power(inst, x, 1.0 if base == "x" else 1.0 / h)
    if tail == "":
        return b
    if tail == "LL":
        return b * ll
    if tail == "LL^2":
        return b * ll * ll
    raise ValueError(f"unknown shape {shape!r}")


def _theta(inst) -> Fraction:
    return Fraction(inst.theta).limit_denominator(1000)


def error_envelope(name: str, inst, x: int, h: int) -> float:
    """Error shapes named as in the theorem statements."""
    lx = _log_x(inst, x)
    th = _theta(inst)
    if name == "R_S":
        if th > Fraction(1, h):
            return _power(inst, x, float(th))
        if th == Fraction(1, h):
            return _power(inst, x, 1 / h) * lx
        return _power(inst, x, 1 / h)
    if name == "R_N":
        if th > Fraction(h, h + 1):
            return _power(inst, x, float(th) / h)
        if any(th == Fraction(h, h + i) for i in range(1, h)):
            return _power(inst, x, 1 / (h + 1)) * lx
        return _power(inst, x, 1 / (h + 1))
    if name == "x/logx":
        return _power(inst, x, 1.0) / lx
    if name == "x*LL/logx":
        return _power(inst, x, 1.0) * _loglog(inst, x) / lx
    if name == "x^1/h/logx":
        return _power(inst, x, 1 / h) / lx
    if name == "x^1/h*LL/logx":
        return _power(inst, x, 1 / h) * _loglog(inst, x) / lx
    if name == "1/logx":
        return 1.0 / lx
    if name == "LL/logx":
        return _loglog(inst, x) / lx
    if name == "x^(theta-1)":
        return _power(inst, x, float(th) - 1.0)
    raise ValueError(f"unknown error shape {name!r}")


# ---------------------------------------------------------------------------
# predictions


@dataclass
class Prediction:
    theorem: str
    h: int
    main_terms: list[tuple[ConstantEstimate, str]]
    error_shape: str
    inst: object = field(repr=False, default=None)

    def evaluate(self, x: int) -> float:
        """Sum of main terms at x, compensated."""
        return math.fsum(c.value * shape_value(s, self.inst, x, self.h) for c, s in self.main_terms)

    def envelope(self, x: int) -> float:
        return error_envelope(self.error_shape, self.inst, x, self.h)

    def coefficient_error(self, x: int) -> float:
        """Propagated constant uncertainty at x (tail bounds times shapes)."""
        return math.fsum(c.tail_bound * shape_value(s, self.inst, x, self.h) for c, s in self.main_terms)


_CACHE: dict = {}


def _key(inst, *extra):
    if inst.grid.graded:
        sig = (inst.name, inst.q, tuple(inst.pi), inst.kappa, inst.theta)
    else:
        sig = (type(inst).__name__, inst.name)
    return sig + extra


def _cached(name, inst, fn, *args):
    k = _key(inst, name, *args)
    if k not in _CACHE:
        _CACHE[k] = fn()
    return _CACHE[k]


def _mertens(inst) -> ConstantEstimate:
    return _cached("A", inst, lambda: C.mertens_A(inst))


def _require_convergent(inst) -> None:
    probe = _cached("A-probe", inst,
                    lambda: C.mertens_A(inst, None if inst.grid.graded else 10**6))
    if not probe.converged:
        raise ValueError(f"instance {inst.name!r} has a non-convergent prime sum; "
                         "predictions refused")


def _restriction_factor(theorem: str, inst, h: int, excluded) -> float:
    f = 1.0
    for p in excluded:
        N = float(inst.q) ** p.norm_key if inst.grid.graded else float(p.norm_key)
        if theorem.startswith("hfree"):
            f *= (N**h - N ** (h - 1)) / (N**h - 1)
        else:
            f /= 1 + (1 / N) / (1 - N ** (-1 / h))
    return f


def predict(theorem: str, inst, h: int, excluded=()) -> Prediction:
    """Main terms of a counting or moment theorem for the instance.

    Graded grids read log log x as log(n log q); this is the theorem form and
    equals the shifted corollary form for h-free elements.
    """
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; choose from {sorted(THEOREMS)}")
    if h < 2:
        raise ValueError("h must be >= 2")
    if excluded and theorem not in ("hfree-count", "hfull-count"):
        raise ValueError("excluded primes apply to the count theorems only")
    _require_convergent(inst)
    kappa = inst.kappa * _restriction_factor(theorem, inst, h, excluded)

    def scaled(est: ConstantEstimate, factor: float, name: str) -> ConstantEstimate:
        return ConstantEstimate(name, est.value * factor, abs(factor) * est.tail_bound,
                                est.cutoff, est.rigorous, est.converged)

    if theorem.startswith("hfree"):
        z = _cached("zeta", inst, lambda: C.zeta_value(inst, h), h)
        lead = ConstantEstimate("kappa/zeta(h)", kappa / z.value,
                                kappa * z.tail_bound / z.value**2, z.cutoff, z.rigorous)
        shape = "x"
    else:
        g = _cached("gamma", inst, lambda: C.gamma_h(inst, h), h)
        lead = scaled(g, kappa, "kappa*gamma_h")
        shape = "x^1/h"
    if theorem.endswith("count"):
        err = "R_S" if theorem.startswith("hfree") else "R_N"
        return Prediction(theorem, h, [(lead, shape)], err, inst)
    A = _mertens(inst)
    if theorem.startswith("hfree"):
        s1, s2 = _cached("C", inst, lambda: C.const_C(inst, h, A=A), h)
    else:
        s1, s2 = _cached("D", inst, lambda: C.const_D(inst, h, A=A), h)
    one = lead
    if theorem.endswith("omega1"):
        terms = [(one, shape + "*LL"), (_product(lead, s1), shape)]
        err = "x/logx" if shape == "x" else "x^1/h/logx"
    else:
        mid = _product(lead, ConstantEstimate("2c+1", 2 * s1.value + 1, 2 * s1.tail_bound,
                                              s1.cutoff, s1.rigorous))
        terms = [(one, shape + "*LL^2"), (mid, shape + "*LL"), (_product(lead, s2), shape)]
        err = "x*LL/logx" if shape == "x" else "x^1/h*LL/logx"
    return Prediction(theorem, h, terms, err, inst)


def _product(a: ConstantEstimate, b: ConstantEstimate) -> ConstantEstimate:
    return ConstantEstimate(f"{a.name}*{b.name}", a.value * b.value,
                            abs(a.value) * b.tail_bound + abs(b.value) * a.tail_bound,
                            max(a.cutoff, b.cutoff), a.rigorous and b.rigorous,
                            a.converged and b.converged)


# ---------------------------------------------------------------------------
# residual tables


@dataclass(frozen=True)
class ResidualRow:
    x: int
    exact: float | int
    predicted: float
    residual: float
    normalized: float


@dataclass
class ResidualTable:
    label: str
    error_shape: str
    rows: list[ResidualRow]
    graded: bool = False
    q: int | None = None

    def normalized(self) -> list[float]:
        return [r.normalized for r in self.rows]

    def log_x(self, r: ResidualRow) -> float:
        return r.x * math.log(self.q) if self.graded else math.log(r.x)


def _residual_rows(pred_fn, env_fn, xs, exact_values) -> list[ResidualRow]:
    rows = []
    for x, ex in zip(xs, exact_values):
        pv = pred_fn(x)
        res = math.fsum([ex, -pv]) if isinstance(ex, int) and abs(ex) < 2**53 else float(ex - pv)
        norm = res / env_fn(x)
        if not math.isfinite(norm):
            raise ArithmeticError(f"normalized residual not finite at x={x}")
        rows.append(ResidualRow(x, ex, pv, res, norm))
    return rows


def residual_table(theorem: str, inst, h: int, checkpoints, excluded=(), workers: int = 1,
                   tally=None) -> ResidualTable:
    """Exact census minus the theorem's main terms, normalized by its error envelope."""
    pred = predict(theorem, inst, h, excluded)
    subset, col = THEOREMS[theorem]
    if tally is None:
        req = CensusRequest(inst, tuple(checkpoints), subset=subset, h=h, excluded=tuple(excluded))
        tally = run_census(req, workers)
    exact = tally.column(col)
    rows = _residual_rows(pred.evaluate, pred.envelope, list(tally.checkpoints), exact)
    return ResidualTable(f"{theorem}:{inst.name}:h={h}", pred.error_shape, rows,
                         inst.grid.graded, getattr(inst, "q", None))


def fit_error_exponent(table: ResidualTable) -> float:
    """Least-squares slope of log|residual| against log x; -inf when every residual is zero."""
    rows = table.rows
    if len(rows) < 4:
        raise ValueError("need at least 4 checkpoints")
    span = (table.log_x(rows[-1]) - table.log_x(rows[0])) / math.log(10)
    if span < 3 - 1e-9:
        raise ValueError("checkpoints must span at least 3 decades")
    pts = [(table.log_x(r), math.log(abs(r.residual))) for r in rows if r.residual != 0]
    if not pts:
        return -math.inf
    if len(pts) < 2:
        raise ValueError("need at least two nonzero residuals")
    lx, ly = np.array(pts).T
    slope, _ = np.polyfit(lx, ly, 1)
    return float(slope)


def is_bounded(values, margin: float = 3.0) -> bool:
    """No growth trend: max |v| <= margin * median |v|, or |v| never increases."""
    a = [abs(v) for v in values]
    if not a:
        return True
    if all(b <= c for c, b in zip(a, a[1:])):
        return True
    return max(a) <= margin * median(a)


# ---------------------------------------------------------------------------
# lemma checks


def _prime_data(inst, x: int):
    """Sorted norms (dense, float) or (degrees, counts) of primes up to x."""
    if inst.grid.graded:
        d = np.arange(1, x + 1)
        pi = np.array([float(inst.pi_d(k)) for k in d])
        return d, pi
    return inst.prime_norms(x).astype(np.float64), None


def _lemma_lhs(lemma: str, inst, x: int) -> float:
    graded = inst.grid.graded
    if lemma == "boundnm-part5":
        if graded:
            raise ValueError("the harmonic-sum lemma is checked on dense grids only")
        if inst.name == "z":
            n = np.arange(1, x + 1, dtype=np.float64)
            return C._fsum_blocks(1.0 / n)
        a = inst.element_counts(x).astype(np.float64)
        n = np.arange(x + 1, dtype=np.float64)
        return C._fsum_blocks(a[1:] / n[1:])
    N, pi = _prime_data(inst, x)
    if graded:
        q = float(inst.q)
        w = pi * q ** (-N.astype(np.float64))  # per-degree weight sum 1/N(p)
        if lemma == "mertens-part4":
            return math.fsum(w)
        if lemma == "saidakeq":
            cum = np.concatenate([[0.0], np.cumsum(w)])
            return math.fsum(w[i] * cum[x - d] for i, d in enumerate(N) if x - d >= 1)
        top = N <= x - 1  # N(p) <= x/q
        rest = (x - N[top]) * math.log(q)
        if lemma == "sumplogp":
            return math.fsum(w[top] / rest)
        if lemma == "sumnwpx2":
            return math.fsum(w[top] * np.log(rest))
    else:
        inv = 1.0 / N
        if lemma == "mertens-part4":
            return C._fsum_blocks(inv)
        if lemma == "saidakeq":
            # ordered pairs with N(p) N(q) <= x; N(q) >= 2 forces N(p) <= x/2
            prefix = np.concatenate([[0.0], np.cumsum(inv)])
            first = N <= x / 2
            idx = np.searchsorted(N, np.floor(x / N[first]), side="right")
            return math.fsum(inv[first] * prefix[idx])
        top = N <= x / 2
        rest = np.log(x / N[top])
        if lemma == "sumplogp":
            return C._fsum_blocks(inv[top] / rest)
        if lemma == "sumnwpx2":
            return C._fsum_blocks(inv[top] * np.log(rest))
    raise ValueError(f"unknown lemma {lemma!r}")


def _lemma_rhs(lemma: str, inst, x: int) -> tuple[float, str]:
    ll = _loglog(inst, x)
    if lemma == "boundnm-part5":
        Ap = _cached("Aprime", inst, lambda: C.mertens_A_prime(inst, 10**7 if inst.name == "z" else 10**6))
        return math.fsum([inst.kappa * math.log(x), Ap.value]), "x^(theta-1)"
    A = _mertens(inst).value
    B = C.const_B(inst)
    if lemma == "mertens-part4":
        return ll + A, "1/logx"
    if lemma == "saidakeq":
        return math.fsum([ll * ll, 2 * A * ll, A * A, B]), "LL/logx"
    if lemma == "sumplogp":
        return 0.0, "LL/logx"
    if lemma == "sumnwpx2":
        return math.fsum([ll * ll, A * ll, B]), "LL/logx"
    raise ValueError(f"unknown lemma {lemma!r}")


def lemma_check(lemma: str, inst, checkpoints) -> ResidualTable:
    """Left side computed directly, minus the stated right side, normalized by the stated error."""
    if lemma not in LEMMAS:
        raise ValueError(f"unknown lemma {lemma!r}; choose from {LEMMAS}")
    xs = [int(c) for c in checkpoints]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("checkpoints must be strictly ascending")
    rows = []
    shape = ""
    h = 2
    for x in xs:
        lhs = _lemma_lhs(lemma, inst, x)
        rhs, shape = _lemma_rhs(lemma, inst, x)
        res = lhs - rhs
        rows.append(ResidualRow(x, lhs, rhs, res, res / error_envelope(shape, inst, x, h)))
    return ResidualTable(f"{lemma}:{inst.name}", shape, rows, inst.grid.graded,
                         getattr(inst, "q", None))
