"""Empirical success rate of one uniform shear draw on all-equal-x point sets.

For N points sharing an x-coordinate, x + theta*y separates them iff
theta != 0, so the rate should sit near 1 - 1/p.  The guaranteed lower
bound for #K >= N^2 is 1/2.
"""

import argparse
import math
import random
from dataclasses import dataclass

from bivareval.bipoly import PointSet, shear_separates
from bivareval.field import field_new


@dataclass
class ShearConfig:
    modulus: int = 101
    points: int = 10
    trials: int = 2000
    seed: int = 0
    layout: str = "equal_x"  # or "random"


def draw_points(cfg: ShearConfig, rng: random.Random) -> list[tuple[int, int]]:
    p = cfg.modulus
    if cfg.layout == "equal_x":
        x = rng.randrange(p)
        return [(x, y) for y in rng.sample(range(p), cfg.points)]
    pts: set[tuple[int, int]] = set()
    while len(pts) < cfg.points:
        pts.add((rng.randrange(p), rng.randrange(p)))
    return list(pts)


def success_rate(cfg: ShearConfig) -> float:
    F = field_new(cfg.modulus)
    rng = random.Random(cfg.seed)
    wins = 0
    for _ in range(cfg.trials):
        pts = PointSet(draw_points(cfg, rng), F)
        wins += shear_separates(pts, rng.randrange(cfg.modulus))
    return wins / cfg.trials


def main(argv=None):
    ap = argparse.ArgumentParser(description="shear success-rate experiment")
    d = ShearConfig()
    ap.add_argument("--modulus", type=int, default=d.modulus)
    ap.add_argument("--points", type=int, default=d.points)
    ap.add_argument("--trials", type=int, default=d.trials)
    ap.add_argument("--seed", type=int, default=d.seed)
    ap.add_argument("--layout", choices=["equal_x", "random"], default=d.layout)
    cfg = ShearConfig(**vars(ap.parse_args(argv)))
    rate = success_rate(cfg)
    bound = 0.5 - 3 * math.sqrt(0.25 / cfg.trials)
    print(f"p={cfg.modulus} N={cfg.points} layout={cfg.layout} trials={cfg.trials}")
    print(f"success rate {rate:.4f}  (1/2 bound with 3 sigma slack: {bound:.4f}, "
          f"p >= N^2: {cfg.modulus >= cfg.points ** 2})")


if __name__ == "__main__":
    main()
