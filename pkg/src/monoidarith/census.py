"""Exact censuses: subset counts, omega / Omega moments and normal-order
violation fractions at a list of checkpoints.

Routes
------
sieve      integers, segmented factor statistics (all / h-free / h-full)
tuples     integers, h-full elements from m = a0^h a1^(h+1) ... a_{h-1}^(2h-1)
euler      any dense instance, distribution of omega/Omega per norm from the Euler product
series     graded instances, the same distribution per degree
enumerate  graded instances, explicit factorizations (small degrees)

Every route produces the same integer tally, so results are exact and
independent of how the work is partitioned.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from .core import BudgetError, PrimeHandle, big_omega, is_h_free, is_h_full, omega
from .graded import graded_enumerate
from .integers import DEFAULT_SEGMENT, IntegerInstance, primes_upto, segment_stats

SUBSETS = ("all", "hfree", "hfull")
STATISTICS = ("count", "omega", "bigomega", "violation")
SIEVE_BUDGET = 2 * 10**9
EULER_BUDGET = 2 * 10**7
TUPLE_LIMIT = 2**62

# tally columns
COUNT, S1W, S2W, S1B, S2B, ELIGIBLE, VIOL_W, VIOL_B = range(8)
NCOL = 8


@dataclass(frozen=True)
class CensusRequest:
    """What to count. ``checkpoints`` are norms (dense) or degrees (graded)."""

    instance: Any
    checkpoints: tuple[int, ...]
    subset: str = "all"
    h: int = 2
    statistic: str = "count"
    k: int = 1
    epsilon: float = 0.5
    function: str = "omega"
    excluded: tuple[PrimeHandle, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "checkpoints", tuple(int(c) for c in self.checkpoints))
        object.__setattr__(self, "excluded", tuple(self.excluded))
        if not self.checkpoints:
            raise ValueError("at least one checkpoint required")
        if any(b <= a for a, b in zip(self.checkpoints, self.checkpoints[1:])):
            raise ValueError("checkpoints must be strictly ascending")
        low = 0 if self.instance.grid.graded else 1
        if self.checkpoints[0] < low:
            raise ValueError(f"checkpoints must be >= {low}")
        if self.subset not in SUBSETS:
            raise ValueError(f"subset must be one of {SUBSETS}")
        if self.statistic not in STATISTICS:
            raise ValueError(f"statistic must be one of {STATISTICS}")
        if self.h < 2:
            raise ValueError("h must be >= 2")
        if self.k not in (1, 2):
            raise ValueError("moment order k must be 1 or 2")
        if self.function not in ("omega", "bigomega"):
            raise ValueError("function must be omega or bigomega")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")
        idx = [p.index for p in self.excluded]
        if len(set(idx)) != len(idx):
            raise ValueError("excluded primes must be distinct")

    @property
    def omega_factor(self) -> int:
        """Normal-order multiplier: Omega over h-full elements concentrates at h log log N."""
        return self.h if self.subset == "hfull" else 1


@dataclass
class Tally:
    """Cumulative integer statistics per checkpoint (rows) in the column order above."""

    checkpoints: tuple[int, ...]
    table: np.ndarray  # object dtype, exact Python ints
    route: str = ""

    def column(self, col: int) -> list[int]:
        return [int(v) for v in self.table[:, col]]


@dataclass(frozen=True)
class CensusResult:
    request: CensusRequest
    values: tuple
    route: str = ""

    def rows(self):
        return list(zip(self.request.checkpoints, self.values))


# ---------------------------------------------------------------------------
# shared helpers


def _excluded_norms(req: CensusRequest) -> list[int]:
    return sorted(p.norm_key for p in req.excluded)


def _loglog_dense(n: np.ndarray) -> np.ndarray:
    out = np.full(n.shape, np.nan)
    ok = n >= 3
    out[ok] = np.log(np.log(n[ok].astype(np.float64)))
    return out


def _violates(f: np.ndarray, ll: np.ndarray, eps: float, factor: int) -> np.ndarray:
    target = factor * ll
    with np.errstate(invalid="ignore"):
        return (f < (1 - eps) * target) | (f > (1 + eps) * target)


def _tally_elements(norms, w, big, ll, cps, eps, factor) -> np.ndarray:
    """Per-checkpoint-interval increments for a batch of elements (int64, NCOL columns)."""
    out = np.zeros((len(cps), NCOL), dtype=np.int64)
    if len(norms) == 0:
        return out
    bins = np.searchsorted(cps, norms, side="left")
    keep = bins < len(cps)
    if not keep.all():
        bins, w, big, ll = bins[keep], w[keep], big[keep], ll[keep]
    w = w.astype(np.int64)
    big = big.astype(np.int64)
    elig = ~np.isnan(ll)
    m = len(cps)

    def add(col, weights=None):
        out[:, col] = np.rint(np.bincount(bins, weights=weights, minlength=m)[:m]).astype(np.int64)

    add(COUNT)
    add(S1W, w)
    add(S2W, w * w)
    add(S1B, big)
    add(S2B, big * big)
    add(ELIGIBLE, elig.astype(np.int64))
    add(VIOL_W, (elig & _violates(w, ll, eps, 1)).astype(np.int64))
    add(VIOL_B, (elig & _violates(big, ll, eps, factor)).astype(np.int64))
    return out


def _cumulate(increments: np.ndarray) -> np.ndarray:
    return np.cumsum(increments.astype(object), axis=0)


def _run_parallel(fn, jobs, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs)))


# ---------------------------------------------------------------------------
# integers: segmented sieve


def _sieve_block(lo, hi, cps, subset, h, excl, eps, factor):
    base = primes_upto(math.isqrt(hi) + 1)
    _, w, big, mn, mx = segment_stats(lo, hi, base)
    n = np.arange(lo, hi, dtype=np.int64)
    if subset == "hfree":
        keep = mx <= h - 1
    elif subset == "hfull":
        keep = mn >= h
    else:
        keep = np.ones(len(n), dtype=bool)
    for ell in excl:
        keep &= n % ell != 0
    n, w, big = n[keep], w[keep], big[keep]
    return _tally_elements(n, w, big, _loglog_dense(n), cps, eps, factor)


def _sieve_route(req: CensusRequest, workers: int, segment: int) -> np.ndarray:
    x = req.checkpoints[-1]
    if x > SIEVE_BUDGET:
        raise BudgetError(f"sieve to {x} exceeds budget {SIEVE_BUDGET}")
    cps = np.array(req.checkpoints, dtype=np.int64)
    excl = _excluded_norms(req)
    if workers > 1:
        segment = min(segment, max(2**16, -(-x // workers)))
    jobs = [
        (lo, min(lo + segment, x + 1), cps, req.subset, req.h, excl, req.epsilon, req.omega_factor)
        for lo in range(1, x + 1, segment)
    ]
    parts = _run_parallel(_sieve_block, jobs, workers)
    return _cumulate(sum(parts))


# ---------------------------------------------------------------------------
# integers: h-full tuple enumeration


def _iroot(x: int, k: int) -> int:
    r = int(round(x ** (1.0 / k)))
    while r > 0 and r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def _small_factor_table(limit: int):
    """For 1..limit: squarefree flag and the list of prime factors (limit is small)."""
    lpf = np.zeros(limit + 1, dtype=np.int64)
    for p in primes_upto(max(limit, 2)):
        p = int(p)
        sel = lpf[p :: p] == 0
        lpf[p :: p][sel] = p
    factors: list[tuple[int, ...]] = [()] * (limit + 1)
    sqfree = [True] * (limit + 1)
    for n in range(2, limit + 1):
        p = int(lpf[n])
        rest = n // p
        factors[n] = (p,) + factors[rest] if (rest % p) else factors[rest]
        sqfree[n] = sqfree[rest] and rest % p != 0
    return sqfree, factors


def _tuples(h: int, x: int, sqfree, factors, excl: set[int], outer: int | None = None):
    """(R, primes of r, sum_i (h+i) omega(a_i)) for squarefree, pairwise coprime a_1..a_{h-1}.

    The outermost component a_{h-1} may be pinned to ``outer``.
    """
    out = []

    def rec(i, R, used, big):
        if i == 0:
            out.append((R, tuple(sorted(used)), big))
            return
        e = h + i
        top = _iroot(x // R, e)
        values = [outer] if (outer is not None and i == h - 1) else range(1, top + 1)
        for a in values:
            if a > top or not sqfree[a]:
                continue
            fs = factors[a]
            if any(p in used or p in excl for p in fs):
                continue
            rec(i - 1, R * a**e, used | set(fs), big + e * len(fs))

    rec(h - 1, 1, frozenset(), 0)
    return out


def _tuple_block(outers, x, h, cps, excl, eps, factor):
    x = int(x)
    a0_max = _iroot(x, h)
    sq_limit = max(_iroot(x, h + 1), 2)
    sqfree, factors = _small_factor_table(sq_limit)
    base = primes_upto(math.isqrt(a0_max + 1) + 1)
    _, w0, b0, _, _ = segment_stats(1, a0_max + 1, base)
    a0_all = np.arange(1, a0_max + 1, dtype=np.int64)
    a0_ok = np.ones(a0_max, dtype=bool)
    for ell in excl:
        a0_ok &= a0_all % ell != 0
    total = np.zeros((len(cps), NCOL), dtype=np.int64)
    tuples = []
    for o in outers:
        tuples += _tuples(h, x, sqfree, factors, set(excl), o)
    for R, ps, big_r in tuples:
        A = _iroot(x // R, h)
        a0 = a0_all[:A]
        sel = a0_ok[:A]
        a0 = a0[sel]
        w = w0[:A][sel].astype(np.int64) + len(ps)
        for p in ps:
            w -= (a0 % p == 0).astype(np.int64)
        big = h * b0[:A][sel].astype(np.int64) + big_r
        m = a0**h * R
        total += _tally_elements(m, w, big, _loglog_dense(m), cps, eps, factor)
    return total


def _tuple_route(req: CensusRequest, workers: int) -> np.ndarray:
    x, h = req.checkpoints[-1], req.h
    if x >= TUPLE_LIMIT:
        raise BudgetError("h-full enumeration limited to norms below 2^62")
    cps = np.array(req.checkpoints, dtype=np.int64)
    excl = tuple(_excluded_norms(req))
    args = (x, h, cps, excl, req.epsilon, req.omega_factor)
    top = _iroot(x, 2 * h - 1)
    # partition on the outermost component; round-robin keeps the blocks balanced
    nblocks = max(1, min(workers, top)) if workers > 1 else 1
    blocks = [list(range(1 + b, top + 1, nblocks)) for b in range(nblocks)]
    parts = _run_parallel(_tuple_block, [(blk, *args) for blk in blocks], workers)
    return _cumulate(sum(parts))


# ---------------------------------------------------------------------------
# dense instances: distribution of omega / Omega per norm


def _allowed_exponents(subset: str, h: int, N: int, x: int) -> list[int]:
    out, e, pk = [], 1, N
    while pk <= x:
        if subset == "all" or (subset == "hfree" and e <= h - 1) or (subset == "hfull" and e >= h):
            out.append((e, pk))
        if subset == "hfree" and e >= h - 1:
            break
        e += 1
        pk *= N
    return out


def _distribution(norms, subset, h, x, shift_by_exponent: bool, width: int) -> np.ndarray:
    D = np.zeros((x + 1, width + 1), dtype=np.int64)
    D[1, 0] = 1
    for N in norms:
        N = int(N)
        exps = _allowed_exponents(subset, h, N, x)
        if not exps:
            continue
        rows = x // exps[0][1] + 1
        old = D[:rows].copy()
        for e, pk in exps:
            s = e if shift_by_exponent else 1
            m = x // pk
            D[pk : m * pk + 1 : pk, s:] += old[1 : m + 1, : width + 1 - s]
    return D


def _euler_route(req: CensusRequest) -> np.ndarray:
    inst = req.instance
    x = req.checkpoints[-1]
    if x > EULER_BUDGET:
        raise BudgetError(f"distribution census to {x} exceeds budget {EULER_BUDGET}")
    norms = list(inst.prime_norms(x)) if x >= 2 else []
    skip = {p.index for p in req.excluded}
    norms = [int(N) for i, N in enumerate(norms) if i not in skip]
    wmax_big = max(1, int(math.log2(x)) + 1)
    # largest omega: product of the smallest admissible prime powers
    e0 = req.h if req.subset == "hfull" else 1
    wmax, prod = 0, 1
    for N in sorted(norms):
        prod *= N**e0
        if prod > x:
            break
        wmax += 1
    Dw = _distribution(norms, req.subset, req.h, x, False, max(wmax, 1))
    Db = _distribution(norms, req.subset, req.h, x, True, wmax_big)
    ll = _loglog_dense(np.arange(x + 1))
    return _cumulate(_tally_distributions(Dw, Db, ll, req))


def _tally_distributions(Dw, Db, ll, req) -> np.ndarray:
    """Increments per checkpoint interval from per-norm (or per-degree) distributions."""
    cps = np.array(req.checkpoints, dtype=np.int64)
    rows = np.arange(Dw.shape[0])
    bins = np.searchsorted(cps, rows, side="left")
    keep = bins < len(cps)
    w = np.arange(Dw.shape[1])
    b = np.arange(Db.shape[1])
    elig = ~np.isnan(ll)
    llc = np.where(elig, ll, 0.0)[:, None]
    viol_w = elig[:, None] & _violates(w[None, :], llc, req.epsilon, 1)
    viol_b = elig[:, None] & _violates(b[None, :], llc, req.epsilon, req.omega_factor)
    per_row = [
        Dw.sum(axis=1),
        Dw @ w,
        Dw @ (w * w),
        Db @ b,
        Db @ (b * b),
        np.where(elig, Dw.sum(axis=1), 0),
        (Dw * viol_w).sum(axis=1),
        (Db * viol_b).sum(axis=1),
    ]
    out = np.zeros((len(cps), NCOL), dtype=object)
    for col, vals in enumerate(per_row):
        vals = np.asarray(vals, dtype=object)
        for i in range(len(cps)):
            out[i, col] = int(sum(vals[keep & (bins == i)]))
    return out


# ---------------------------------------------------------------------------
# graded instances


def _poly2_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Truncated product of bivariate polynomials (rows: degree, cols: weight)."""
    n, W = A.shape
    out = np.zeros_like(A)
    for i in range(n):
        for j in range(W):
            a = A[i, j]
            if a:
                out[i:, j:] += a * B[: n - i, : W - j]
    return out


def _graded_series_route(req: CensusRequest) -> np.ndarray:
    inst = req.instance
    n = req.checkpoints[-1]
    h = req.h
    excl_deg: dict[int, int] = {}
    for p in req.excluded:
        excl_deg[p.norm_key] = excl_deg.get(p.norm_key, 0) + 1
    W = n + 1

    def allowed(e):
        return req.subset == "all" or (req.subset == "hfree" and e <= h - 1) or (
            req.subset == "hfull" and e >= h)

    Dw = np.zeros((n + 1, W + 1), dtype=object)
    Db = np.zeros((n + 1, W + 1), dtype=object)
    Dw[0, 0] = Db[0, 0] = 1
    for d in range(1, n + 1):
        pi = inst.pi_d(d) - excl_deg.get(d, 0)
        if pi <= 0:
            continue
        exps = [e for e in range(1, n // d + 1) if allowed(e)]
        if not exps:
            continue
        # one prime: 1 + sum_e t^shift u^(de); pi primes: binomial expansion of (1 + P)^pi
        Pw = np.zeros((n + 1, W + 1), dtype=object)
        Pb = np.zeros((n + 1, W + 1), dtype=object)
        for e in exps:
            Pw[d * e, 1] += 1
            Pb[d * e, e] += 1
        for D, P in ((Dw, Pw), (Db, Pb)):
            acc = D.copy()
            term = D.copy()
            for j in range(1, min(pi, n // (d * min(exps))) + 1):
                term = _poly2_mul(term, P)
                if not term.any():
                    break
                acc = acc + math.comb(pi, j) * term
            D[:] = acc
    degrees = np.arange(n + 1)
    ll = np.full(n + 1, np.nan)
    ok = degrees * math.log(inst.q) > 1
    ll[ok] = np.log(degrees[ok] * math.log(inst.q))
    return _cumulate(_tally_distributions(Dw, Db, ll, req))


def _graded_enumerate_route(req: CensusRequest) -> np.ndarray:
    inst = req.instance
    n = req.checkpoints[-1]
    cps = np.array(req.checkpoints, dtype=np.int64)
    skip = {p.index for p in req.excluded}
    deg, w, big = [], [], []
    for f in graded_enumerate(inst, n):
        if skip and any(p.index in skip for p, _ in f.terms):
            continue
        if req.subset == "hfree" and not is_h_free(f, req.h):
            continue
        if req.subset == "hfull" and not is_h_full(f, req.h):
            continue
        deg.append(f.norm_key.value)
        w.append(omega(f))
        big.append(big_omega(f))
    deg = np.array(deg, dtype=np.int64)
    ll = np.full(len(deg), np.nan)
    ok = deg * math.log(inst.q) > 1
    ll[ok] = np.log(deg[ok] * math.log(inst.q))
    inc = _tally_elements(deg, np.array(w), np.array(big), ll, cps, req.epsilon, req.omega_factor)
    return _cumulate(inc)


# ---------------------------------------------------------------------------
# public operations


def choose_route(req: CensusRequest) -> str:
    inst = req.instance
    if inst.grid.graded:
        return "series"
    if isinstance(inst, IntegerInstance):
        return "tuples" if req.subset == "hfull" else "sieve"
    return "euler"


def run_census(req: CensusRequest, workers: int = 1, route: str | None = None,
               segment: int = DEFAULT_SEGMENT) -> Tally:
    """All statistics at every checkpoint, exact."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    route = route or choose_route(req)
    inst = req.instance
    if route in ("sieve", "tuples") and not isinstance(inst, IntegerInstance):
        raise ValueError(f"route {route!r} needs the integer instance")
    if route in ("series", "enumerate") and not inst.grid.graded:
        raise ValueError(f"route {route!r} needs a graded instance")
    if route == "tuples" and req.subset != "hfull":
        raise ValueError("tuple route counts h-full elements only")
    if route == "sieve":
        table = _sieve_route(req, workers, segment)
    elif route == "tuples":
        table = _tuple_route(req, workers)
    elif route == "euler":
        table = _euler_route(req)
    elif route == "series":
        table = _graded_series_route(req)
    elif route == "enumerate":
        table = _graded_enumerate_route(req)
    else:
        raise ValueError(f"unknown route {route!r}")
    return Tally(req.checkpoints, table, route)


def _values(req: CensusRequest, tally: Tally) -> tuple:
    if req.statistic == "count":
        return tuple(tally.column(COUNT))
    if req.statistic == "omega":
        return tuple(tally.column(S1W if req.k == 1 else S2W))
    if req.statistic == "bigomega":
        return tuple(tally.column(S1B if req.k == 1 else S2B))
    viol = tally.column(VIOL_W if req.function == "omega" else VIOL_B)
    elig = tally.column(ELIGIBLE)
    return tuple(Fraction(v, e) if e else Fraction(0) for v, e in zip(viol, elig))


def census(req: CensusRequest, workers: int = 1, route: str | None = None) -> CensusResult:
    tally = run_census(req, workers, route)
    return CensusResult(req, _values(req, tally), tally.route)


def _with(req: CensusRequest, **kw) -> CensusRequest:
    fields = dict(req.__dict__)
    fields.update(kw)
    return CensusRequest(**fields)


def count_subset(req: CensusRequest, workers: int = 1, route: str | None = None) -> CensusResult:
    return census(_with(req, statistic="count"), workers, route)


def moment(req: CensusRequest, workers: int = 1, route: str | None = None) -> CensusResult:
    if req.statistic not in ("omega", "bigomega"):
        req = _with(req, statistic="omega")
    return census(req, workers, route)


def violation_fraction(req: CensusRequest, workers: int = 1, route: str | None = None) -> CensusResult:
    return census(_with(req, statistic="violation"), workers, route)


def handle_for_norm(inst, norm: int, taken: set[int] = frozenset()) -> PrimeHandle:
    """First prime handle of the given norm (degree on a graded grid) not already taken."""
    if inst.grid.graded:
        idx = 0
        for d in range(1, norm):
            idx += inst.pi_d(d)
        for j in range(inst.pi_d(norm)):
            if idx + j not in taken:
                return PrimeHandle(idx + j, norm)
        raise ValueError(f"no unused prime of degree {norm}")
    norms = inst.prime_norms(norm)
    for i in np.flatnonzero(norms == norm):
        if int(i) not in taken:
            return PrimeHandle(int(i), norm)
    raise ValueError(f"no unused prime element of norm {norm}")


def count_all_norms(inst, subset: str, h: int, x: int) -> np.ndarray:
    """Cumulative subset count at every norm 0..x on a dense grid.

    Integers use the factor-statistics sieve; other instances the Euler distribution.
    """
    if subset not in SUBSETS:
        raise ValueError(f"subset must be one of {SUBSETS}")
    flags = np.zeros(x + 1, dtype=np.int64)
    if isinstance(inst, IntegerInstance):
        base = primes_upto(math.isqrt(x) + 1)
        for lo in range(1, x + 1, DEFAULT_SEGMENT):
            hi = min(lo + DEFAULT_SEGMENT, x + 1)
            _, _, _, mn, mx = segment_stats(lo, hi, base)
            if subset == "hfree":
                flags[lo:hi] = mx <= h - 1
            elif subset == "hfull":
                flags[lo:hi] = mn >= h
            else:
                flags[lo:hi] = 1
        return np.cumsum(flags)
    flags[1] = 1
    for N in (int(N) for N in inst.prime_norms(x)) if x >= 2 else ():
        exps = _allowed_exponents(subset, h, N, x)
        if not exps:
            continue
        old = flags[: x // exps[0][1] + 1].copy()
        for _, pk in exps:
            m = x // pk
            flags[pk : m * pk + 1 : pk] += old[1 : m + 1]
    return np.cumsum(flags)
