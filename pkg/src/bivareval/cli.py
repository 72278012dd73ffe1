"""Command-line front end: ``gen``, ``eval``, ``verify`` and ``bench``.

Instance files are line-oriented text.  Blank lines and everything after
``#`` are ignored; the remaining lines are, in order::

    modulus <p>
    n <n>
    m <m>
    row <c_i0> <c_i1> ... <c_i(m-1)>      # n lines, row i holds X^i
    points <N>
    point <x> <y>                          # N lines

Every integer is reduced mod p on load.  Exit status is 0 on success,
1 when methods disagree (or differ from an expected-values file) and 2 on
malformed input.
"""

from __future__ import annotations

import argparse
import csv
import math
import random
import statistics
import sys
import time
import warnings
from dataclasses import dataclass, field as dc_field
from typing import Callable, TextIO

from .bipoly import BiPoly, PointSet, multieval_any, multieval_grid_blocks, naive_multieval
from .errors import BivarEvalError, FieldTooSmall
from .field import NTT_PRIME_62, PrimeField, field_new

METHODS = ("naive", "grid", "fast")
POINT_MODES = ("generic", "shared_x", "grid")
CSV_HEADER = ["method", "n", "m", "N", "modulus", "seed", "wall_time_ns"]


class InputError(Exception):
    """Malformed instance or arguments; maps to exit status 2."""


@dataclass
class Instance:
    modulus: int
    n: int
    m: int
    coeffs: list[list[int]]
    points: list[tuple[int, int]] = dc_field(default_factory=list)

    @property
    def field(self) -> PrimeField:
        return field_new(self.modulus)

    def poly(self) -> BiPoly:
        return BiPoly(self.coeffs, self.field)

    def point_set(self) -> PointSet:
        return PointSet(self.points, self.field)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def dumps(inst: Instance) -> str:
    lines = [f"modulus {inst.modulus}", f"n {inst.n}", f"m {inst.m}"]
    lines += ["row " + " ".join(map(str, row)) for row in inst.coeffs]
    lines.append(f"points {len(inst.points)}")
    lines += [f"point {x} {y}" for x, y in inst.points]
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].split()
        if body:
            yield lineno, body


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise InputError(f"line {lineno}: expected integers, got {' '.join(tokens)!r}") from None


def loads(text: str) -> Instance:
    """Parse an instance; raises :class:`InputError` with a line number."""
    lines = list(_content_lines(text))
    pos = 0

    def take(keyword: str, count: int | None) -> list[int]:
        nonlocal pos
        if pos >= len(lines):
            raise InputError(f"unexpected end of file, expected '{keyword}'")
        lineno, body = lines[pos]
        if body[0] != keyword:
            raise InputError(f"line {lineno}: expected '{keyword}', got '{body[0]}'")
        vals = _ints(body[1:], lineno)
        if count is not None and len(vals) != count:
            raise InputError(f"line {lineno}: '{keyword}' needs {count} values, got {len(vals)}")
        pos += 1
        return vals

    (p,) = take("modulus", 1)
    try:
        F = field_new(p)
    except BivarEvalError as exc:
        raise InputError(f"line {lines[0][0]}: {exc}") from None
    (n,) = take("n", 1)
    (m,) = take("m", 1)
    if n < 1 or m < 1:
        raise InputError("n and m must be positive")
    coeffs = [[c % p for c in take("row", m)] for _ in range(n)]
    (count,) = take("points", 1)
    if count < 0:
        raise InputError("point count must be non-negative")
    points = [tuple(v % p for v in take("point", 2)) for _ in range(count)]
    if pos != len(lines):
        lineno, body = lines[pos]
        raise InputError(f"line {lineno}: trailing content '{body[0]}'")
    return Instance(F.modulus, n, m, coeffs, points)


def read_values(text: str) -> list[int]:
    vals = []
    for lineno, body in _content_lines(text):
        vals += _ints(body, lineno)
    return vals


# ---------------------------------------------------------------------------
# generation
# ---------------------------------------------------------------------------


def make_points(F: PrimeField, count: int, mode: str, rng: random.Random,
                n: int = 1, m: int = 1) -> list[tuple[int, int]]:
    """Pseudorandom points for one of the three modes.

    generic: distinct x (needs ``count <= p``).  shared_x: every x is used
    about twice.  grid: ``n`` distinct x times ``m`` distinct y, x-major,
    ignoring ``count``.
    """
    p = F.modulus
    if mode == "generic":
        if count > p:
            raise InputError(f"generic mode needs {count} distinct x values but the field has {p}")
        xs = rng.sample(range(p), count)
        return [(x, rng.randrange(p)) for x in xs]
    if mode == "shared_x":
        if count > p * p:
            raise InputError(f"cannot place {count} distinct points in a field of size {p}")
        if p < count * count:
            warnings.warn(f"modulus {p} < N^2 = {count * count}; shears may fail often",
                          FieldTooSmall, stacklevel=2)
        pool = rng.sample(range(p), min(p, max(1, (count + 1) // 2)))
        seen: set[tuple[int, int]] = set()
        pts = []
        while len(pts) < count:
            pt = (rng.choice(pool), rng.randrange(p))
            if pt not in seen:
                seen.add(pt)
                pts.append(pt)
        return pts
    if mode == "grid":
        if max(n, m) > p:
            raise InputError(f"a {n}x{m} grid needs {max(n, m)} distinct coordinates, field has {p}")
        xs = rng.sample(range(p), n)
        ys = rng.sample(range(p), m)
        return [(x, y) for x in xs for y in ys]
    raise InputError(f"unknown points mode {mode!r}")


def generate(n: int, m: int, modulus: int, seed: int, mode: str = "generic",
             count: int | None = None) -> Instance:
    if n < 1 or m < 1:
        raise InputError("n and m must be positive")
    try:
        F = field_new(modulus)
    except BivarEvalError as exc:
        raise InputError(str(exc)) from None
    rng = random.Random(seed)
    coeffs = [[rng.randrange(F.modulus) for _ in range(m)] for _ in range(n)]
    pts = make_points(F, n * m if count is None else count, mode, rng, n, m)
    return Instance(F.modulus, n, m, coeffs, pts)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def evaluator(method: str, seed: int = 0) -> Callable[[BiPoly, PointSet], list[int]]:
    if method == "naive":
        return naive_multieval
    if method == "grid":
        return multieval_grid_blocks
    if method == "fast":
        return lambda poly, pts: multieval_any(poly, pts, rng_seed=seed)
    raise InputError(f"unknown method {method!r}")


def evaluate(inst: Instance, method: str, seed: int = 0) -> list[int]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FieldTooSmall)
        return evaluator(method, seed)(inst.poly(), inst.point_set())


def first_mismatch(a: list[int], b: list[int]) -> int | None:
    for k, (u, v) in enumerate(zip(a, b)):
        if u != v:
            return k
    return None if len(a) == len(b) else min(len(a), len(b))


# ---------------------------------------------------------------------------
# benchmarking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BenchConfig:
    sizes: tuple[tuple[int, int], ...] = ((8, 8), (16, 16), (32, 32))
    modulus: int = NTT_PRIME_62
    methods: tuple[str, ...] = ("naive", "fast")
    repetitions: int = 3
    warmup: int = 1
    seed: int = 0
    points_mode: str = "generic"


@dataclass(frozen=True)
class BenchRecord:
    method: str
    n: int
    m: int
    N: int
    modulus: int
    seed: int
    wall_time_ns: int

    def row(self) -> list:
        return [self.method, self.n, self.m, self.N, self.modulus, self.seed, self.wall_time_ns]


def time_call(fn: Callable[[], object], repetitions: int, warmup: int = 1) -> int:
    """Median wall time in ns over ``repetitions`` runs after ``warmup`` discarded runs."""
    for _ in range(warmup):
        fn()
    samples = []
    for _ in range(max(1, repetitions)):
        t0 = time.perf_counter_ns()
        fn()
        samples.append(max(1, time.perf_counter_ns() - t0))
    return int(statistics.median(samples))


def run_bench(cfg: BenchConfig, progress: TextIO | None = None) -> list[BenchRecord]:
    records = []
    for n, m in cfg.sizes:
        inst = generate(n, m, cfg.modulus, cfg.seed, cfg.points_mode)
        poly, pts = inst.poly(), inst.point_set()
        for method in cfg.methods:
            fn = evaluator(method, cfg.seed)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", FieldTooSmall)
                ns = time_call(lambda: fn(poly, pts), cfg.repetitions, cfg.warmup)
            rec = BenchRecord(method, n, m, len(pts), inst.modulus, cfg.seed, ns)
            records.append(rec)
            if progress is not None:
                print(f"  {method:>5} n={n} m={m} N={len(pts)}: {ns / 1e9:.4f} s", file=progress)
    return records


def doubling_ratios(records: list[BenchRecord]) -> dict[str, list[tuple[int, int, float]]]:
    """Per method, ``(n, n_next, t_next/t)`` for consecutive sizes in the sweep."""
    out: dict[str, list] = {}
    for method in dict.fromkeys(r.method for r in records):
        rs = [r for r in records if r.method == method]
        out[method] = [(a.n, b.n, b.wall_time_ns / a.wall_time_ns) for a, b in zip(rs, rs[1:])]
    return out


def crossover(records: list[BenchRecord], slow: str = "naive", fast: str = "fast") -> tuple[str, float | None]:
    """``("measured", n)`` for the first size where ``fast`` wins, otherwise an estimate.

    Without a measured win the last doubling of each method is extended as a
    power law; ``("extrapolated", n)`` is where the two lines meet, and
    ``("none", None)`` means they do not converge.
    """
    a = {r.n: r.wall_time_ns for r in records if r.method == slow}
    b = {r.n: r.wall_time_ns for r in records if r.method == fast}
    ns = sorted(set(a) & set(b))
    for n in ns:
        if b[n] < a[n]:
            return "measured", n
    if len(ns) < 2:
        return "none", None
    n0, n1 = ns[-2], ns[-1]
    ea = math.log(a[n1] / a[n0]) / math.log(n1 / n0)
    eb = math.log(b[n1] / b[n0]) / math.log(n1 / n0)
    if ea <= eb:
        return "none", None
    # a[n1] * (x/n1)^ea = b[n1] * (x/n1)^eb
    return "extrapolated", n1 * (b[n1] / a[n1]) ** (1 / (ea - eb))


def bench_report(records: list[BenchRecord]) -> str:
    lines = ["doubling ratios t(2n)/t(n):"]
    for method, ratios in doubling_ratios(records).items():
        body = ", ".join(f"{n0}->{n1}: {r:.2f}" for n0, n1, r in ratios) or "n/a"
        lines.append(f"  {method}: {body}")
    kind, where = crossover(records)
    if kind == "measured":
        lines.append(f"crossover: fast beats naive at n = {where}")
    elif kind == "extrapolated":
        top = max(r.n for r in records)
        lines.append(f"crossover: not reached up to n = {top}; measured bound n ~ {where:.0f} "
                     "(last doublings extended as power laws)")
    else:
        lines.append("crossover: not observed and last doublings do not converge")
    return "\n".join(lines)


def write_csv(records: list[BenchRecord], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.row())


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def cmd_gen(args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", FieldTooSmall)
        inst = generate(args.n, args.m, args.modulus, args.seed, args.points_mode, args.count)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _emit(dumps(inst), args.out)
    return 0


def cmd_eval(args) -> int:
    inst = loads(_read_text(args.instance))
    vals = evaluate(inst, args.method, args.seed)
    _emit("".join(f"{v}\n" for v in vals), args.out)
    return 0


def cmd_verify(args) -> int:
    inst = loads(_read_text(args.instance))
    results = {method: evaluate(inst, method, args.seed) for method in METHODS}
    ref = results["naive"]
    for method in METHODS[1:]:
        k = first_mismatch(ref, results[method])
        if k is not None:
            print(f"MISMATCH: {method} differs from naive at index {k}")
            return 1
    if args.expected is not None:
        expected = read_values(_read_text(args.expected))
        k = first_mismatch(ref, expected)
        if k is not None:
            print(f"MISMATCH: expected values differ at index {k}")
            return 1
    print(f"OK: {len(METHODS)} methods agree on {len(ref)} values")
    return 0


def cmd_bench(args) -> int:
    ms = args.m if args.m is not None else args.n
    if len(ms) != len(args.n):
        raise InputError("--m needs as many values as --n")
    methods = tuple(args.methods.split(","))
    for method in methods:
        evaluator(method)
    cfg = BenchConfig(tuple(zip(args.n, ms)), args.modulus, methods, args.repetitions,
                      args.warmup, args.seed, args.points_mode)
    records = run_bench(cfg, progress=sys.stderr)
    if args.out is None or args.out == "-":
        write_csv(records, sys.stdout)
    else:
        with open(args.out, "w") as fh:
            write_csv(records, fh)
    print(bench_report(records))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bivareval", description="Multipoint evaluation of bivariate polynomials over prime fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a pseudorandom instance")
    g.add_argument("--modulus", type=int, default=65537)
    g.add_argument("--n", type=int, required=True, help="degree bound in X")
    g.add_argument("--m", type=int, required=True, help="degree bound in Y")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--points-mode", choices=POINT_MODES, default="generic")
    g.add_argument("--count", type=int, default=None, help="number of points (default n*m)")
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("eval", help="evaluate an instance, one value per line")
    e.add_argument("instance")
    e.add_argument("--method", choices=METHODS, default="fast")
    e.add_argument("--seed", type=int, default=0, help="seed for the shear search")
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", help="check that all methods agree")
    v.add_argument("instance")
    v.add_argument("expected", nargs="?", default=None, help="optional file of expected values")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time methods over a size sweep, CSV output")
    b.add_argument("--n", type=int, nargs="+", default=[8, 16, 32])
    b.add_argument("--m", type=int, nargs="+", default=None, help="defaults to the --n values")
    b.add_argument("--modulus", type=int, default=NTT_PRIME_62)
    b.add_argument("--methods", default="naive,fast", help="comma-separated subset of naive,grid,fast")
    b.add_argument("--method", dest="methods", help="alias of --methods")
    b.add_argument("--repetitions", type=int, default=3)
    b.add_argument("--warmup", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--points-mode", choices=POINT_MODES, default="generic")
    b.add_argument("--out", default=None, help="CSV path (default stdout)")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (InputError, BivarEvalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
