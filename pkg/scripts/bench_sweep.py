"""Timing sweep for naive, grid and fast evaluation; writes a CSV and prints ratios.

    python scripts/bench_sweep.py --sizes 16 32 64 128 --out results/bench.csv
"""

import argparse
import sys
from dataclasses import dataclass, field

from bivareval.cli import BenchConfig, bench_report, run_bench, write_csv
from bivareval.field import NTT_PRIME_62


@dataclass
class SweepConfig:
    sizes: list[int] = field(default_factory=lambda: [16, 32, 64])
    modulus: int = NTT_PRIME_62
    methods: tuple[str, ...] = ("naive", "fast")
    repetitions: int = 3
    seed: int = 0
    points_mode: str = "generic"
    out: str | None = None


def parse(argv=None) -> SweepConfig:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    d = SweepConfig()
    ap.add_argument("--sizes", type=int, nargs="+", default=d.sizes)
    ap.add_argument("--modulus", type=int, default=d.modulus)
    ap.add_argument("--methods", default=",".join(d.methods))
    ap.add_argument("--repetitions", type=int, default=d.repetitions)
    ap.add_argument("--seed", type=int, default=d.seed)
    ap.add_argument("--points-mode", default=d.points_mode)
    ap.add_argument("--out", default=None)
    a = ap.parse_args(argv)
    return SweepConfig(a.sizes, a.modulus, tuple(a.methods.split(",")), a.repetitions,
                       a.seed, a.points_mode, a.out)


def main(argv=None):
    cfg = parse(argv)
    bench = BenchConfig(tuple((n, n) for n in cfg.sizes), cfg.modulus, cfg.methods,
                        cfg.repetitions, 1, cfg.seed, cfg.points_mode)
    records = run_bench(bench, progress=sys.stderr)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            write_csv(records, fh)
    else:
        write_csv(records, sys.stdout)
    print(bench_report(records))


if __name__ == "__main__":
    main()
