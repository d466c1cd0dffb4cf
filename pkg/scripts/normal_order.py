"""Normal-order violation fractions over Z on a fine checkpoint grid.

Shows why the squarefree fraction is not monotone: the band (1 +- eps) log log N
admits omega = 4 only once 1.5 log log N >= 4, i.e. N >= exp(exp(8/3)) ~ 1.78e6.
"""

from __future__ import annotations

import argparse
import math
from dataclasses import dataclass

from monoidarith import census as cz
from monoidarith.integers import IntegerInstance


@dataclass
class Config:
    top: int = 10**7
    per_decade: int = 4
    epsilon: float = 0.5
    workers: int = 4


def checkpoints(cfg: Config) -> tuple[int, ...]:
    lo = 4 * cfg.per_decade
    hi = round(math.log10(cfg.top) * cfg.per_decade)
    return tuple(round(10 ** (k / cfg.per_decade)) for k in range(lo, hi + 1))


def run(cfg: Config) -> None:
    z = IntegerInstance(cfg.top)
    xs = checkpoints(cfg)
    series = {
        "squarefree omega": cz.CensusRequest(z, xs, subset="hfree", statistic="violation",
                                             epsilon=cfg.epsilon),
        "powerful Omega (2 loglog)": cz.CensusRequest(z, xs, subset="hfull", statistic="violation",
                                                      function="bigomega", epsilon=cfg.epsilon),
        "powerful omega (loglog)": cz.CensusRequest(z, xs, subset="hfull", statistic="violation",
                                                    epsilon=cfg.epsilon),
    }
    print(f"crossing point exp(exp(4/1.5)) = {math.exp(math.exp(4 / 1.5)):.3e}")
    results = {k: cz.census(r, workers=cfg.workers).values for k, r in series.items()}
    print("x".rjust(10) + "".join(k.rjust(28) for k in results))
    for i, x in enumerate(xs):
        print(f"{x:10d}" + "".join(f"{float(v[i]):28.4f}" for v in results.values()))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--top", type=float, default=Config.top)
    ap.add_argument("--workers", type=int, default=Config.workers)
    a = ap.parse_args()
    run(Config(top=int(a.top), workers=a.workers))
