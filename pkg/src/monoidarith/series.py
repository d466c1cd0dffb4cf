"""Exact generating-series machinery for h-full counting.

The h-full series factors as L_h(s) * G_h(s) with
L_h = prod_{k=h}^{2h-1} zeta(ks) and G_h an Euler product whose local factor
is the integer polynomial 1 - v^(2h+2) + sum_r alpha_{r,h} v^r.
All arithmetic is exact (Python ints).
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

import numpy as np

from .core import ConsistencyError, NormKey

SERIES_BUDGET = 10**12


def _poly_mul(a: list[int], b: list[int], order: int | None = None) -> list[int]:
    n = len(a) + len(b) - 1 if order is None else min(order + 1, len(a) + len(b) - 1)
    out = [0] * n
    for i, ai in enumerate(a):
        if ai == 0 or i >= n:
            continue
        for j, bj in enumerate(b[: n - i]):
            out[i + j] += ai * bj
    return out


def _one_minus_vk(k: int) -> list[int]:
    p = [0] * (k + 1)
    p[0], p[k] = 1, -1
    return p


def _expand_left(h: int) -> list[int]:
    """(1 + v^h/(1-v)) prod_{k=h}^{2h-1} (1 - v^k), with 1/(1-v) cleared against (1 - v^h)."""
    p = [1, -1] + [0] * (h - 2) + [1]  # 1 - v + v^h
    p = _poly_mul(p, [1] * h)  # (1 - v^h)/(1 - v)
    for k in range(h + 1, 2 * h):
        p = _poly_mul(p, _one_minus_vk(k))
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


@dataclass(frozen=True)
class AlphaPolynomial:
    h: int
    alpha: dict[int, int] = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return (3 * self.h * self.h + self.h - 2) // 2

    def local_poly(self) -> list[int]:
        """Coefficients of 1 - v^(2h+2) + sum alpha_r v^r."""
        top = max([2 * self.h + 2, *self.alpha])
        p = [0] * (top + 1)
        p[0] = 1
        p[2 * self.h + 2] -= 1
        for r, a in self.alpha.items():
            p[r] += a
        return p

    def support(self) -> list[tuple[int, int]]:
        """Nonzero (exponent, coefficient) pairs of the local polynomial, exponent > 0."""
        return [(r, c) for r, c in enumerate(self.local_poly()) if r and c]


def check_alpha_identity(ap: AlphaPolynomial) -> None:
    """Re-derive the left side as a truncated power series and compare exactly."""
    h = ap.h
    order = ap.degree + 2 * h + 5
    # 1 + v^h/(1-v) as an explicit truncated series, independent of the cleared form
    left = [1] + [0] * (h - 1) + [1] * (order - h + 1)
    for k in range(h, 2 * h):
        left = _poly_mul(left, _one_minus_vk(k), order)
    right = ap.local_poly() + [0] * (order + 1)
    right = right[: order + 1]
    left = left + [0] * (order + 1 - len(left))
    if left != right:
        bad = [r for r in range(order + 1) if left[r] != right[r]]
        raise ConsistencyError(f"alpha identity fails for h={h} at exponents {bad[:5]}")
    if any(not (2 * h + 3 <= r <= ap.degree) for r in ap.alpha):
        raise ConsistencyError(f"alpha exponent out of range for h={h}")


def alpha_coeffs(h: int) -> AlphaPolynomial:
    """Exact alpha_{r,h}; the identity is verified before returning."""
    if h < 2:
        raise ValueError("h must be >= 2")
    p = _expand_left(h)
    alpha = {r: c for r, c in enumerate(p) if r >= 2 * h + 3 and c}
    ap = AlphaPolynomial(h, alpha)
    check_alpha_identity(ap)
    return ap


def local_factor_check(h: int, order: int = 40) -> None:
    """G_h local polynomial times the L_h local factors must give 1 + v^h/(1-v)."""
    poly = alpha_coeffs(h).local_poly()
    series = poly[: order + 1] + [0] * max(0, order + 1 - len(poly))
    for k in range(h, 2 * h):
        geo = [1 if i % k == 0 else 0 for i in range(order + 1)]
        series = _poly_mul(series, geo, order)
    target = [1] + [0] * (h - 1) + [1] * (order - h + 1)
    if series != target:
        raise ConsistencyError(f"local Euler factor mismatch for h={h}")


# ---------------------------------------------------------------------------
# coefficient streams


@dataclass
class CoefficientStream:
    """Coefficients of l_h or g_h up to ``bound``.

    Dense grid: sparse ``{norm: coefficient}``. Graded grid: list indexed by degree.
    """

    which: str
    graded: bool
    bound: int
    values: dict[int, int] | list[int]

    def __getitem__(self, key: int) -> int:
        if self.graded:
            return self.values[key]
        if key > self.bound:
            raise KeyError(key)
        return self.values.get(key, 0)

    def items(self):
        if self.graded:
            return enumerate(self.values)
        return sorted(self.values.items())


@dataclass
class StepFunction:
    """Partial sums F(y) = sum of coefficients at norms <= y, for y <= bound."""

    keys: list[int]
    cum: list[int]
    bound: int

    def __call__(self, y: int) -> int:
        if y > self.bound:
            raise ValueError(f"{y} beyond computed bound {self.bound}")
        i = bisect.bisect_right(self.keys, y)
        return self.cum[i - 1] if i else 0

    def dense(self) -> np.ndarray:
        """Values at every integer 0..bound (int64)."""
        out = np.zeros(self.bound + 1, dtype=np.int64)
        steps = np.zeros(self.bound + 2, dtype=np.int64)
        prev = 0
        for k, c in zip(self.keys, self.cum):
            steps[k] += c - prev
            prev = c
        out[:] = np.cumsum(steps)[: self.bound + 1]
        return out


def _unwrap(x) -> int:
    return x.value if isinstance(x, NormKey) else int(x)


def _root_floor(x: int, k: int) -> int:
    r = int(round(x ** (1.0 / k)))
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def _dense_counts(inst, bound: int) -> np.ndarray:
    return inst.element_counts(max(bound, 1))


def lh_coeffs(inst, h: int, x) -> CoefficientStream:
    """l_h up to x: convolution of the element-count function stretched by k = 2h-1, ..., h."""
    if h < 2:
        raise ValueError("h must be >= 2")
    x = _unwrap(x)
    if inst.grid.graded:
        c = inst.element_counts(x)
        out = [1] + [0] * x
        for k in range(2 * h - 1, h - 1, -1):
            stretched = [0] * (x + 1)
            for m in range(x // k + 1):
                stretched[m * k] = c[m]
            out = _poly_mul(out, stretched, x)
        return CoefficientStream("l_h", True, x, out)
    if x < 1:
        raise ValueError("x must be >= 1")
    if x > SERIES_BUDGET:
        raise MemoryError(f"x={x} beyond series budget")
    a = _dense_counts(inst, _root_floor(x, h))
    cur: dict[int, int] = {1: 1}
    for k in range(2 * h - 1, h - 1, -1):
        top = _root_floor(x, k)
        nxt: dict[int, int] = {}
        for n, c in cur.items():
            for m in range(1, top + 1):
                t = n * m**k
                if t > x:
                    break
                am = int(a[m])
                if am:
                    nxt[t] = nxt.get(t, 0) + c * am
        cur = nxt
    return CoefficientStream("l_h", False, x, cur)


def _partial_sums(stream: CoefficientStream) -> StepFunction:
    keys, cum, acc = [], [], 0
    for k, v in stream.items():
        if v:
            acc += v
            keys.append(k)
            cum.append(acc)
    return StepFunction(keys, cum, stream.bound)


def lh_partial_sums(inst, h: int, x) -> StepFunction:
    """T_h(y) for every grid point y <= x (degrees on a graded grid)."""
    return _partial_sums(lh_coeffs(inst, h, x))


def _poly_pow(p: list[int], e: int, order: int) -> list[int]:
    result = [1]
    base = p[: order + 1]
    while e:
        if e & 1:
            result = _poly_mul(result, base, order)
        e >>= 1
        if e:
            base = _poly_mul(base, base, order)
    return result + [0] * (order + 1 - len(result))


def gh_coeffs(inst, h: int, x, alpha: AlphaPolynomial | None = None) -> CoefficientStream:
    """g_h up to x from the Euler product of the alpha local polynomial."""
    ap = alpha if alpha is not None else alpha_coeffs(h)
    x = _unwrap(x)
    support = ap.support()
    if inst.grid.graded:
        out = [1] + [0] * x
        for d in range(1, x // (2 * h + 2) + 1):
            pi = inst.pi_d(d)
            if pi == 0:
                continue
            w_order = x // d
            local = [0] * (w_order + 1)
            local[0] = 1
            for r, c in support:
                if r <= w_order:
                    local[r] += c
            powered = _poly_pow(local, pi, w_order)
            stretched = [0] * (x + 1)
            for j, c in enumerate(powered):
                stretched[j * d] = c
            out = _poly_mul(out, stretched, x)
        return CoefficientStream("g_h", True, x, out)
    if x < 1:
        raise ValueError("x must be >= 1")
    cur: dict[int, int] = {1: 1}
    first = 2 * h + 2
    norms = inst.prime_norms(_root_floor(x, first)) if x >= 2**first else []
    for N in norms:
        N = int(N)
        adds: dict[int, int] = {}
        for n, c in cur.items():
            for r, coef in support:
                t = n * N**r
                if t > x:
                    break
                adds[t] = adds.get(t, 0) + c * coef
        for t, v in adds.items():
            cur[t] = cur.get(t, 0) + v
        cur = {k: v for k, v in cur.items() if v}
    return CoefficientStream("g_h", False, x, cur)


def hfull_coeffs(inst, h: int, x, alpha: AlphaPolynomial | None = None) -> CoefficientStream:
    """Coefficients of the h-full series: the Dirichlet product g_h * l_h."""
    x = _unwrap(x)
    g = gh_coeffs(inst, h, x, alpha)
    l = lh_coeffs(inst, h, x)
    if inst.grid.graded:
        return CoefficientStream("n_h", True, x, _poly_mul(g.values, l.values, x))
    out: dict[int, int] = {}
    lk = sorted(l.values.items())
    keys = [k for k, _ in lk]
    for m, gm in g.values.items():
        hi = bisect.bisect_right(keys, x // m)
        for n, ln in lk[:hi]:
            out[m * n] = out.get(m * n, 0) + gm * ln
    return CoefficientStream("n_h", False, x, {k: v for k, v in out.items() if v})


def hfull_series(inst, h: int, x, alpha: AlphaPolynomial | None = None) -> StepFunction:
    """|N_h(y)| for every grid point y <= x via the convolution route."""
    return _partial_sums(hfull_coeffs(inst, h, x, alpha))


def hfull_count_by_convolution(inst, h: int, x, alpha: AlphaPolynomial | None = None) -> int:
    """Exact |N_h(x)| = sum_{mn <= x} g_h(m) l_h(n)."""
    x = _unwrap(x)
    g = gh_coeffs(inst, h, x, alpha)
    T = lh_partial_sums(inst, h, x)
    if inst.grid.graded:
        return sum(gm * T(x - m) for m, gm in g.items() if gm)
    return sum(gm * T(x // m) for m, gm in g.items())
