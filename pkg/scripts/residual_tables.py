"""Write one residual CSV per (theorem, instance, h) and print a boundedness summary.

    python scripts/residual_tables.py --out results/residuals
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from pathlib import Path

from monoidarith.cli import main as cli

DENSE = "1e4,1e5,1e6,1e7"
DENSE_FULL = "1e4,1e6,1e8,1e10"


@dataclass
class Config:
    out: Path = Path("results/residuals")
    workers: int = 4
    runs: list[tuple[str, str, int, str]] = field(default_factory=lambda: [
        ("hfree-count", "z", 2, DENSE),
        ("hfree-count", "z", 3, DENSE),
        ("hfull-count", "z", 2, DENSE_FULL),
        ("hfull-count", "z", 3, DENSE_FULL),
        ("hfree-omega1", "z", 2, DENSE),
        ("hfree-omega2", "z", 2, DENSE),
        ("hfull-omega1", "z", 2, "1e4,1e6,1e8"),
        ("hfull-omega2", "z", 2, "1e4,1e6,1e8"),
        ("hfree-count", "gaussian", 2, "1e4,1e5,1e6"),
        ("hfull-count", "gaussian", 2, "1e4,1e5,1e6"),
        ("hfree-count", "fq:2", 2, "d10,d15,d20,d25"),
        ("hfree-omega1", "fq:2", 2, "d10,d15,d20,d25"),
        ("hfull-count", "fq:2", 2, "d10,d20,d30,d40"),
        ("hfull-omega1", "fq:2", 2, "d10,d20,d30,d40"),
    ])


def run(cfg: Config) -> None:
    cfg.out.mkdir(parents=True, exist_ok=True)
    for theorem, inst, h, cps in cfg.runs:
        name = f"{theorem}_{inst.replace(':', '')}_h{h}.csv"
        path = cfg.out / name
        code = cli(["verify", "--theorem", theorem, "--instance", inst, "--h", str(h),
                    "--checkpoints", cps, "--workers", str(cfg.workers), "--out", str(path)])
        if code:
            print(f"{name}: exit {code}")
            continue
        lines = path.read_text().splitlines()
        norm = [l.split(",")[-1] for l in lines if l and l[0].isdigit()]
        bounded = next(l for l in lines if l.startswith("# bounded="))
        print(f"{name:34s} normalized={', '.join(f'{float(v):.3g}' for v in norm)}  {bounded[2:]}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Config.out)
    ap.add_argument("--workers", type=int, default=Config.workers)
    a = ap.parse_args()
    run(Config(out=a.out, workers=a.workers))
