"""Constants for every built-in instance, as one CSV per instance."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from monoidarith.cli import main as cli


@dataclass
class Config:
    out: Path = Path("results/constants")
    instances: tuple[str, ...] = ("z", "gaussian", "fq:2", "fq:3", "fq:5")
    hs: tuple[int, ...] = (2, 3)


def run(cfg: Config) -> None:
    cfg.out.mkdir(parents=True, exist_ok=True)
    for inst in cfg.instances:
        for h in cfg.hs:
            path = cfg.out / f"constants_{inst.replace(':', '')}_h{h}.csv"
            code = cli(["constants", "--instance", inst, "--h", str(h), "--out", str(path)])
            print(f"{path}: exit {code}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Config.out)
    run(Config(out=ap.parse_args().out))
