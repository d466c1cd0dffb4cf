"""Command-line front end; every subcommand writes CSV.

Exit codes: 0 success, 1 invalid input, 2 failed mathematical cross-check.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import census as cz
from . import constants as C
from . import series as S
from . import verify as V
from .core import BudgetError, ConsistencyError
from .gaussian import GaussianInstance
from .graded import polynomial_instance, read_synthetic
from .integers import IntegerInstance

CSV_VERSION = "monoidarith-csv/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    instance: str
    h: int
    checkpoints: tuple[int, ...]
    cutoff: int | None
    workers: int
    out: str | None

    def __post_init__(self):
        if self.h < 2:
            raise ValueError("h must be >= 2")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if any(b <= a for a, b in zip(self.checkpoints, self.checkpoints[1:])):
            raise ValueError("checkpoints must be strictly ascending")


# ---------------------------------------------------------------------------
# argument parsing


def make_instance(spec: str, limit: int = 10**6):
    if spec == "z":
        return IntegerInstance(max(limit, 2))
    if spec == "gaussian":
        return GaussianInstance(max(limit, 2))
    if spec.startswith("fq:"):
        try:
            q = int(spec[3:])
        except ValueError:
            raise ValueError(f"bad field size in {spec!r}") from None
        return polynomial_instance(q)
    path = Path(spec)
    if path.is_file():
        return read_synthetic(path)
    raise ValueError(f"unknown instance {spec!r} (z, gaussian, fq:<q>, or a synthetic file)")


def parse_point(token: str, graded: bool) -> int:
    token = token.strip()
    if token.startswith("d"):
        if not graded:
            raise ValueError(f"degree checkpoint {token!r} needs a graded instance")
        try:
            return int(token[1:])
        except ValueError:
            raise ValueError(f"bad degree {token!r}") from None
    if graded:
        raise ValueError(f"graded instances take degree checkpoints like d12, got {token!r}")
    try:
        d = Decimal(token)
    except InvalidOperation:
        raise ValueError(f"bad checkpoint {token!r}") from None
    if d != d.to_integral_value() or d < 1:
        raise ValueError(f"checkpoint {token!r} is not a positive integer")
    return int(d)


def parse_points(text: str | None, graded: bool) -> tuple[int, ...]:
    if not text:
        return ()
    return tuple(parse_point(t, graded) for t in text.split(",") if t.strip())


def parse_excluded(text: str | None, inst) -> tuple:
    if not text:
        return ()
    taken: set[int] = set()
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if inst.grid.graded:
            if tok.startswith("d"):
                deg = int(tok[1:])
            else:
                n, deg = int(tok), 0
                while n > 1 and n % inst.q == 0:
                    n //= inst.q
                    deg += 1
                if n != 1 or deg == 0:
                    raise ValueError(f"{tok} is not a positive power of q={inst.q}")
        else:
            deg = int(tok)
        p = cz.handle_for_norm(inst, deg, taken)
        taken.add(p.index)
        out.append(p)
    return tuple(out)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="monoidarith", description="h-free / h-full arithmetic in free abelian monoids")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, checkpoints=True, instance=True):
        if instance:
            sp.add_argument("--instance", default="z", help="z | gaussian | fq:<q> | synthetic file")
        sp.add_argument("--h", type=int, default=2)
        if checkpoints:
            sp.add_argument("--x", help="single checkpoint (norm, or dN on a graded grid)")
            sp.add_argument("--checkpoints", help="comma-separated ascending checkpoints")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("constants", help="numeric constants with tail bounds")
    common(sp, checkpoints=False)
    sp.add_argument("--cutoff", type=int)

    for name in ("count", "moments", "violations"):
        sp = sub.add_parser(name, help=f"exact census: {name}")
        common(sp)
        sp.add_argument("--subset", default="all", choices=cz.SUBSETS)
        sp.add_argument("--exclude", help="comma-separated prime norms to exclude")
        if name == "moments":
            sp.add_argument("--stat", default="omega", choices=("omega", "bigomega"))
            sp.add_argument("--k", type=int, default=1, choices=(1, 2))
        if name == "violations":
            sp.add_argument("--stat", default="omega", choices=("omega", "bigomega"))
            sp.add_argument("--epsilon", type=float, default=0.5)

    sp = sub.add_parser("alpha", help="alpha coefficients of the h-full identity")
    common(sp, checkpoints=False, instance=False)

    sp = sub.add_parser("convolve", help="convolution count of h-full elements vs census")
    common(sp)

    sp = sub.add_parser("verify", help="residual table of a theorem against the census")
    common(sp)
    sp.add_argument("--theorem", required=True, choices=sorted(V.THEOREMS))
    sp.add_argument("--exclude", help="comma-separated prime norms to exclude (count theorems)")

    sp = sub.add_parser("lemma", help="numeric check of an analytic lemma")
    common(sp)
    sp.add_argument("--lemma", required=True, choices=V.LEMMAS)
    return p


# ---------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


class CsvOut:
    def __init__(self, meta: dict):
        self.buf = io.StringIO()
        pairs = " ".join(f"{k}={v}" for k, v in meta.items())
        self.buf.write(f"# {CSV_VERSION} {pairs}\n")
        self.writer = csv.writer(self.buf, lineterminator="\n")

    def header(self, *cols):
        self.writer.writerow(cols)

    def row(self, *vals):
        self.writer.writerow([_fmt(v) for v in vals])

    def note(self, text: str):
        self.buf.write(f"# {text}\n")

    def emit(self, out: str | None):
        data = self.buf.getvalue()
        if out:
            Path(out).write_bytes(data.encode("utf-8"))
        else:
            sys.stdout.write(data)


# ---------------------------------------------------------------------------
# subcommands


def _checkpoints(args, inst) -> tuple[int, ...]:
    pts = parse_points(args.checkpoints, inst.grid.graded) + parse_points(args.x, inst.grid.graded)
    if not pts:
        raise ValueError("give --x or --checkpoints")
    if args.checkpoints and args.x:
        raise ValueError("give only one of --x and --checkpoints")
    return pts


def _setup(args, need_points=True):
    probe = make_instance(args.instance, 2)
    pts = _checkpoints(args, probe) if need_points else ()
    limit = max(pts) if pts and not probe.grid.graded else 10**6
    inst = make_instance(args.instance, limit) if not probe.grid.graded else probe
    cfg = RunConfig(args.command, args.instance, args.h, pts, getattr(args, "cutoff", None),
                    args.workers, args.out)
    return inst, cfg


def cmd_constants(args):
    inst, cfg = _setup(args, need_points=False)
    out = CsvOut({"command": "constants", "instance": cfg.instance, "h": cfg.h})
    out.header("name", "value", "tail_bound", "cutoff", "rigorous", "converged")
    for est in C.all_constants(inst, cfg.h, cfg.cutoff):
        out.row(est.name, est.value, est.tail_bound, est.cutoff, est.rigorous, est.converged)
    return out, cfg


def _census_cmd(args, statistic):
    inst, cfg = _setup(args)
    excluded = parse_excluded(args.exclude, inst)
    kw = dict(subset=args.subset, h=cfg.h, statistic=statistic, excluded=excluded)
    label = statistic
    if statistic in ("omega", "bigomega"):
        kw["statistic"] = args.stat
        kw["k"] = args.k
        label = f"{args.stat}^{args.k}"
    if statistic == "violation":
        kw["epsilon"] = args.epsilon
        kw["function"] = args.stat
        label = f"violation({args.stat};eps={args.epsilon!r})"
    req = cz.CensusRequest(inst, cfg.checkpoints, **kw)
    res = cz.census(req, cfg.workers)
    meta = {"command": cfg.command, "instance": cfg.instance, "h": cfg.h,
            "subset": args.subset, "exclude": args.exclude or "-"}
    out = CsvOut(meta)
    out.header("n" if inst.grid.graded else "x", "subset", "statistic", "value")
    for x, v in res.rows():
        out.row(x, args.subset, label, v)
    return out, cfg


def cmd_alpha(args):
    cfg = RunConfig("alpha", "-", args.h, (), None, args.workers, args.out)
    ap = S.alpha_coeffs(cfg.h)
    S.local_factor_check(cfg.h)
    out = CsvOut({"command": "alpha", "h": cfg.h})
    if not ap.alpha:
        out.note("phi = 1 (no alpha coefficients; local factor is 1 - v^%d)" % (2 * cfg.h + 2))
    out.header("r", "alpha")
    for r in sorted(ap.alpha):
        out.row(r, ap.alpha[r])
    return out, cfg


def cmd_convolve(args):
    inst, cfg = _setup(args)
    top = cfg.checkpoints[-1]
    conv = S.hfull_series(inst, cfg.h, top)
    if inst.grid.graded:
        req = cz.CensusRequest(inst, tuple(range(top + 1)), subset="hfull", h=cfg.h)
        counts = cz.run_census(req, cfg.workers).column(cz.COUNT)
        conv_all = [conv(n) for n in range(top + 1)]
        bad = [n for n in range(top + 1) if conv_all[n] != counts[n]]
    else:
        counts = cz.count_all_norms(inst, "hfull", cfg.h, top)
        conv_all = conv.dense()
        bad = np.flatnonzero(conv_all[1:] != counts[1:]) + 1
        bad = [int(b) for b in bad]
    if bad:
        raise ConsistencyError(f"convolution and census disagree first at {bad[0]}")
    out = CsvOut({"command": "convolve", "instance": cfg.instance, "h": cfg.h})
    out.header("n" if inst.grid.graded else "x", "convolution", "census", "match")
    for x in cfg.checkpoints:
        out.row(x, int(conv_all[x]), int(counts[x]), True)
    out.note(f"all grid points up to {top} agree")
    return out, cfg


def _table_out(table: V.ResidualTable, cfg, meta):
    out = CsvOut(meta)
    out.header("n" if table.graded else "x", "exact", "predicted", "residual", "normalized")
    for r in table.rows:
        out.row(r.x, r.exact, r.predicted, r.residual, r.normalized)
    out.note(f"error_shape={table.error_shape}")
    try:
        out.note(f"fitted_exponent={_fmt(V.fit_error_exponent(table))}")
    except ValueError:
        pass
    out.note(f"bounded={_fmt(V.is_bounded(table.normalized()))}")
    return out


def cmd_verify(args):
    inst, cfg = _setup(args)
    excluded = parse_excluded(args.exclude, inst)
    table = V.residual_table(args.theorem, inst, cfg.h, cfg.checkpoints, excluded, cfg.workers)
    meta = {"command": "verify", "theorem": args.theorem, "instance": cfg.instance, "h": cfg.h}
    return _table_out(table, cfg, meta), cfg


def cmd_lemma(args):
    inst, cfg = _setup(args)
    table = V.lemma_check(args.lemma, inst, cfg.checkpoints)
    meta = {"command": "lemma", "lemma": args.lemma, "instance": cfg.instance}
    return _table_out(table, cfg, meta), cfg


COMMANDS = {
    "constants": cmd_constants,
    "count": lambda a: _census_cmd(a, "count"),
    "moments": lambda a: _census_cmd(a, "omega"),
    "violations": lambda a: _census_cmd(a, "violation"),
    "alpha": cmd_alpha,
    "convolve": cmd_convolve,
    "verify": cmd_verify,
    "lemma": cmd_lemma,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        out, cfg = COMMANDS[args.command](args)
        out.emit(cfg.out)
        return 0
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ConsistencyError as e:
        print(f"consistency failure: {e}", file=sys.stderr)
        return 2
    except (ValueError, BudgetError, OverflowError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
