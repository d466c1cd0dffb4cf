"""Acceptance criteria AC1-AC13, one check per criterion.

Each check records a single PASS/FAIL line (with elapsed time against the
criterion's budget); pytest prints them in a summary section. Run directly
with ``python tests/test_acceptance.py`` to print the lines without pytest.
"""

from __future__ import annotations

import math
import time
from pathlib import Path

import mpmath
import numpy as np
import pytest

import oracles
from monoidarith import census as cz
from monoidarith import constants as C
from monoidarith import series as S
from monoidarith import verify as V
from monoidarith.cli import main as cli_main
from monoidarith.core import moebius_identity_check
from monoidarith.gaussian import GaussianInstance
from monoidarith.graded import graded_enumerate, polynomial_instance
from monoidarith.integers import IntegerInstance

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

F2 = polynomial_instance(2)


def record(n: int, budget: float, check):
    t0 = time.perf_counter()
    ok, detail = check()
    dt = time.perf_counter() - t0
    timely = dt < budget
    status = "PASS" if ok and timely else "FAIL"
    note = "" if timely else " [over time budget]"
    line = f"AC{n} {status} {dt:.1f}s/{budget:g}s {detail}{note}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line
    assert timely, line


# ---------------------------------------------------------------------------


def ac1():
    bad = []
    for h in range(2, 9):
        ap = S.alpha_coeffs(h)  # raises on any identity residual
        S.local_factor_check(h)
        if any(abs(a) > h * 2**h for a in ap.alpha.values()):
            bad.append(f"bound h={h}")
    two = S.alpha_coeffs(2)
    if two.alpha or two.local_poly() != [1, 0, 0, 0, 0, 0, -1]:
        bad.append("h=2 not 1-v^6")
    return not bad, "identity exact for h=2..8; h=2 gives 1-v^6" + (f" problems={bad}" if bad else "")


def ac2():
    x = 10**6
    z = IntegerInstance(x)
    first_bad = []
    for h in (2, 3):
        conv = S.hfull_series(z, h, x).dense()
        cen = cz.count_all_norms(z, "hfull", h, x)
        diff = np.flatnonzero(conv[1:] != cen[1:])
        if len(diff):
            first_bad.append(("z", h, int(diff[0]) + 1))
    for h in (2, 3):
        conv = S.hfull_series(F2, h, 12)
        cps = tuple(range(13))
        for route in ("series", "enumerate"):
            cen = cz.census(cz.CensusRequest(F2, cps, subset="hfull", h=h), route=route).values
            if [conv(n) for n in cps] != list(cen):
                first_bad.append(("f2", h, route))
    return not first_bad, f"Z h=2,3 every x<=1e6; F2 h=2,3 degrees<=12; mismatches={first_bad}"


def ac3():
    z = IntegerInstance(10**4)
    fails = 0
    checked = 0
    for h in (2, 3, 4):
        for n in range(1, 10**4 + 1):
            f = z.factorize(n)
            fails += not moebius_identity_check(f, h)
            checked += 1
        for f in graded_enumerate(F2, 8):
            fails += not moebius_identity_check(f, h)
            checked += 1
    return fails == 0, f"{checked} factorizations checked, {fails} failures"


def ac4():
    z = IntegerInstance(10**7)
    g = C.gamma_h(z, 2)
    ratio = C.zeta_value(z, 1.5).value / C.zeta_value(z, 3).value
    exact = float(mpmath.zeta(1.5) / mpmath.zeta(3))
    gz = max(abs(g.value - ratio), abs(g.value - exact))
    gf = abs(C.gamma_h(F2, 2).value - (1 - 2**-2) / (1 - 2**-0.5))
    return gz < 1e-6 and gf < 1e-9, f"|Z diff|={gz:.2e} (tol 1e-6), |F2 diff|={gf:.2e} (tol 1e-9)"


def ac5():
    x = 10**7
    z = IntegerInstance(x)
    two = cz.handle_for_norm(z, 2)
    full = cz.census(cz.CensusRequest(z, (x,), subset="hfree")).values[0]
    odd = cz.census(cz.CensusRequest(z, (x,), subset="hfree", excluded=(two,))).values[0]
    d, dr = full / x, odd / x
    e1, e2 = abs(d - 6 / math.pi**2), abs(dr - (2 / 3) * 6 / math.pi**2)
    ok = full == oracles.FROZEN["squarefree_1e7"] and e1 < 1e-3 and e2 < 5e-3
    return ok, f"density={d:.7f} err={e1:.1e} (tol 1e-3); odd density={dr:.7f} err={e2:.1e} (tol 5e-3)"


def ac6():
    xs = (10**4, 10**6, 10**8, 10**10)
    z = IntegerInstance(10**6)
    t = V.residual_table("hfull-count", z, 2, xs)
    g = C.gamma_h(z, 2).value
    worst = max(abs(r.exact - g * math.sqrt(r.x)) / (5 * r.x ** (1 / 3)) for r in t.rows)
    slope = V.fit_error_exponent(t)
    exact_ok = [r.exact for r in t.rows] == [oracles.FROZEN["powerful"][x] for x in xs]
    ok = exact_ok and worst <= 1 and slope <= 1 / 3 + 0.1
    return ok, f"max |err|/(5x^(1/3))={worst:.3f}; fitted exponent={slope:.4f} (<= {1/3 + 0.1:.4f})"


def ac7():
    z = IntegerInstance(10**7)
    xs = (10**4, 10**5, 10**6, 10**7)
    tally = cz.run_census(cz.CensusRequest(z, xs, subset="hfree"))
    t1 = V.residual_table("hfree-omega1", z, 2, xs, tally=tally)
    t2 = V.residual_table("hfree-omega2", z, 2, xs, tally=tally)
    n1, n2 = t1.normalized(), t2.normalized()
    ok = V.is_bounded(n1) and V.is_bounded(n2)
    return ok, f"first={_fmt(n1)} second={_fmt(n2)}"


def ac8():
    z = IntegerInstance(10**6)
    xs = (10**4, 10**6, 10**8)
    tally = cz.run_census(cz.CensusRequest(z, xs, subset="hfull"))
    n1 = V.residual_table("hfull-omega1", z, 2, xs, tally=tally).normalized()
    n2 = V.residual_table("hfull-omega2", z, 2, xs, tally=tally).normalized()
    ok = V.is_bounded(n1) and V.is_bounded(n2, margin=5)
    return ok, f"first={_fmt(n1)} second={_fmt(n2)} (margin 5)"


def ac9():
    bad = []
    for q in (2, 3):
        inst = polynomial_instance(q)
        cps = tuple(range(11))
        free = cz.census(cz.CensusRequest(inst, cps, subset="hfree")).values
        allc = cz.census(cz.CensusRequest(inst, cps)).values
        for n in range(2, 11):
            if free[n] - free[n - 1] != q**n - q ** (n - 1):
                bad.append(("hfree", q, n))
        for n in range(1, 11):
            if allc[n] - allc[n - 1] != q**n:
                bad.append(("all", q, n))
        for n in range(2, 7 if q == 2 else 5):
            if free[n] - free[n - 1] != oracles.squarefree_monic_count(q, n):
                bad.append(("oracle", q, n))
    return not bad, f"q=2,3 n=2..10 exact; mismatches={bad}"


def ac10():
    X = 10**4
    r = [0] * (X + 1)
    for d in range(1, X + 1):
        c = oracles.chi4(d)
        if c:
            for m in range(d, X + 1, d):
                r[m] += c
    oracle = np.cumsum(r)
    ours = np.cumsum(GaussianInstance(X).element_counts(X))
    exact = bool(np.array_equal(ours[1:], oracle[1:]))
    xs = (10**3, 10**4, 10**5, 10**6)
    counts = np.cumsum(GaussianInstance(10**6).element_counts(10**6))
    norm = [abs(int(counts[x]) - math.pi / 4 * x) / x ** (1 / 3) for x in xs]
    ok = exact and V.is_bounded(norm)
    return ok, f"oracle match for every x<=1e4: {exact}; |count-(pi/4)x|/x^(1/3)={_fmt(norm)}"


def ac11():
    z = IntegerInstance(10**7)
    xs = (10**4, 10**5, 10**6, 10**7)
    sq = cz.census(cz.CensusRequest(z, xs, subset="hfree", statistic="violation")).values
    pw = cz.census(cz.CensusRequest(z, xs, subset="hfull", statistic="violation",
                                    function="bigomega")).values
    pw_w = cz.census(cz.CensusRequest(z, xs, subset="hfull", statistic="violation")).values
    dec = lambda v: all(b < a for a, b in zip(v, v[1:]))
    ok = dec(sq) and dec(pw)
    return ok, (f"squarefree omega: {_fmt(map(float, sq))} decreasing={dec(sq)}; "
                f"powerful Omega vs 2loglog: {_fmt(map(float, pw))} decreasing={dec(pw)}; "
                f"powerful omega vs loglog: {_fmt(map(float, pw_w))}")


def ac12():
    z = IntegerInstance(10**6)
    m = V.lemma_check("mertens-part4", z, (10**4, 10**5, 10**6)).normalized()
    s = V.lemma_check("saidakeq", z, (10**4, 10**5, 10**6)).normalized()
    A = C.mertens_A(IntegerInstance(10**8), 10**8)
    err = abs(A.value - 0.2614972)
    ok = V.is_bounded(m) and V.is_bounded(s) and err < 1e-3
    return ok, f"mertens={_fmt(m)} saidak={_fmt(s)} A={A.value:.7f} err={err:.1e} (tol 1e-3)"


DETERMINISM_RUNS = [
    ["constants", "--instance", "z", "--h", "2", "--cutoff", "1000000"],
    ["constants", "--instance", "fq:3", "--h", "3"],
    ["count", "--instance", "z", "--subset", "hfree", "--checkpoints", "1e5,2e6"],
    ["count", "--instance", "gaussian", "--subset", "hfull", "--checkpoints", "1e4,1e6", "--exclude", "5"],
    ["moments", "--instance", "z", "--subset", "hfull", "--stat", "bigomega", "--k", "2",
     "--checkpoints", "1e6,1e9"],
    ["moments", "--instance", "fq:2", "--subset", "hfree", "--k", "2", "--checkpoints", "d10,d20"],
    ["violations", "--instance", "z", "--subset", "all", "--checkpoints", "1e4,3e6"],
    ["alpha", "--h", "5"],
    ["convolve", "--instance", "z", "--h", "2", "--checkpoints", "1e4,1e6"],
    ["verify", "--theorem", "hfull-count", "--instance", "z", "--checkpoints", "1e4,1e6,1e8,1e10"],
    ["verify", "--theorem", "hfree-omega2", "--instance", "z", "--checkpoints", "1e4,1e5,1e6"],
    ["lemma", "--lemma", "saidakeq", "--instance", "z", "--checkpoints", "1e4,1e5"],
]


def ac13(tmp: Path):
    differing = []
    for i, argv in enumerate(DETERMINISM_RUNS):
        outs = []
        for w in (1, 4, 16):
            path = tmp / f"run{i}_w{w}.csv"
            code = cli_main([*argv, "--workers", str(w), "--out", str(path)])
            outs.append(path.read_bytes() if code == 0 else None)
        if outs[0] is None or len(set(outs)) != 1:
            differing.append(argv[0])
    return not differing, f"{len(DETERMINISM_RUNS)} CLI runs x workers 1/4/16; differing={differing}"


def _fmt(vals) -> str:
    return "[" + ", ".join(f"{v:.4g}" for v in vals) + "]"


# ---------------------------------------------------------------------------

BUDGETS = {1: 1, 2: 60, 3: 30, 4: 10, 5: 30, 6: 120, 7: 120, 8: 300, 9: 10, 10: 30, 11: 120, 12: 300}
CHECKS = {1: ac1, 2: ac2, 3: ac3, 4: ac4, 5: ac5, 6: ac6, 7: ac7, 8: ac8, 9: ac9, 10: ac10,
          11: ac11, 12: ac12}


@pytest.mark.parametrize("n", sorted(CHECKS))
def test_acceptance(n):
    record(n, BUDGETS[n], CHECKS[n])


def test_acceptance_13_determinism(tmp_path):
    record(13, 600, lambda: ac13(tmp_path))


if __name__ == "__main__":
    import sys
    import tempfile

    failed = 0
    for n in sorted(CHECKS):
        try:
            record(n, BUDGETS[n], CHECKS[n])
        except AssertionError:
            failed += 1
    with tempfile.TemporaryDirectory() as d:
        try:
            record(13, 600, lambda: ac13(Path(d)))
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
