"""Bivariate polynomials and their multipoint evaluation.

Evaluators, from slowest to fastest in the asymptotic sense:

* :func:`naive_multieval` -- nested Horner per point, O(N n m);
* :func:`multieval_grid_blocks` -- cut the points into blocks, extend each
  block to a Cartesian grid and evaluate there with univariate fast
  multipoint evaluation;
* :func:`multieval_generic` -- reduce to one univariate problem through
  ``p(X, g(X)) rem f(X)`` where ``f`` vanishes on the x-coordinates and ``g``
  interpolates the y-coordinates.  Needs pairwise distinct x-coordinates;
* :func:`multieval_any` -- shear the points into generic position first.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import config
from .errors import (
    DistinctnessViolated,
    DivisionByZero,
    DuplicateNodes,
    DuplicatePoints,
    FieldMismatch,
    FieldTooSmall,
    ShearSearchExhausted,
)
from .field import PrimeField
from .linalg import MatMulStrategy, _longvec
from .unipoly import (
    SubproductTree,
    UniPoly,
    _Reducer,
    _add,
    _mul,
    _powers_mod,
    _taylor_shift,
    _trim,
)


class BiPoly:
    """Dense polynomial with ``deg_X < n`` and ``deg_Y < m``.

    ``coeffs[i][j]`` is the coefficient of ``X**i * Y**j``.  The bounds are
    structural: trailing zero rows or columns are allowed.
    """

    __slots__ = ("n", "m", "coeffs", "field")

    def __init__(self, coeffs: Sequence[Sequence[int]], field: PrimeField):
        p = field.modulus
        rows = [[int(c) % p for c in row] for row in coeffs]
        if not rows or not rows[0]:
            rows = [[0]]
        m = len(rows[0])
        if any(len(r) != m for r in rows):
            raise ValueError("coefficient array must be rectangular")
        self.n, self.m = len(rows), m
        self.coeffs = rows
        self.field = field

    @classmethod
    def from_array(cls, arr: np.ndarray, field: PrimeField) -> BiPoly:
        obj = cls.__new__(cls)
        if arr.size == 0:
            arr = np.zeros((1, 1), dtype=field.dtype)
        obj.n, obj.m = arr.shape
        obj.coeffs = arr.tolist()
        obj.field = field
        return obj

    @classmethod
    def zero(cls, field: PrimeField, n: int = 1, m: int = 1) -> BiPoly:
        return cls([[0] * m for _ in range(n)], field)

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], int], field: PrimeField) -> BiPoly:
        """Build from ``{(i, j): c}`` meaning ``c X^i Y^j``."""
        n = 1 + max((i for i, _ in terms), default=0)
        m = 1 + max((j for _, j in terms), default=0)
        rows = [[0] * m for _ in range(n)]
        for (i, j), c in terms.items():
            rows[i][j] = c
        return cls(rows, field)

    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=self.field.dtype).reshape(self.n, self.m)

    def column(self, j: int) -> list[int]:
        """Coefficient list of the X-polynomial multiplying ``Y**j``."""
        return _trim([row[j] for row in self.coeffs])

    def terms(self) -> dict[tuple[int, int], int]:
        return {(i, j): c for i, row in enumerate(self.coeffs) for j, c in enumerate(row) if c}

    def __call__(self, x, y) -> int:
        return naive_multieval(self, PointSet([(x, y)], self.field))[0]

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.field == other.field and self.terms() == other.terms()

    def __add__(self, other: BiPoly) -> BiPoly:
        _same_field(self, other)
        n, m = max(self.n, other.n), max(self.m, other.m)
        out = _padded(self.array(), n, m)
        out = (out + _padded(other.array(), n, m)) % self.field.modulus
        return BiPoly.from_array(out, self.field)

    def __mul__(self, other: BiPoly) -> BiPoly:
        return kronecker_mul(self, other)

    def __repr__(self):
        return f"BiPoly(n={self.n}, m={self.m}, terms={self.terms()}, p={self.field.modulus})"


def _same_field(a, b) -> PrimeField:
    if a.field != b.field:
        raise FieldMismatch(f"F_{a.field.modulus} vs F_{b.field.modulus}")
    return a.field


def _padded(arr: np.ndarray, n: int, m: int) -> np.ndarray:
    out = np.zeros((n, m), dtype=arr.dtype)
    out[: arr.shape[0], : arr.shape[1]] = arr
    return out


class PointSet:
    """Evaluation points plus the cached status of the distinct-x condition.

    ``distinct_x`` is ``"verified"``, ``"violated"`` or ``"unchecked"``.
    """

    __slots__ = ("points", "field", "distinct_x")

    def __init__(self, points: Iterable[tuple[int, int]], field: PrimeField):
        p = field.modulus
        self.points = [(int(x) % p, int(y) % p) for x, y in points]
        self.field = field
        self.distinct_x = "unchecked"

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def xs(self) -> list[int]:
        return [x for x, _ in self.points]

    @property
    def ys(self) -> list[int]:
        return [y for _, y in self.points]

    def check_distinct_x(self) -> bool:
        if self.distinct_x == "unchecked":
            xs = sorted(self.xs)
            ok = all(a != b for a, b in zip(xs, xs[1:]))
            self.distinct_x = "verified" if ok else "violated"
        return self.distinct_x == "verified"


@dataclass(frozen=True)
class ShearTransform:
    """The coordinate change ``(x, y) -> (x + theta*y, y)``."""

    theta: int
    field: PrimeField

    def apply(self, pts: PointSet) -> PointSet:
        p, t = self.field.modulus, self.theta
        return PointSet([((x + t * y) % p, y) for x, y in pts.points], self.field)

    def transform_polynomial(self, poly: BiPoly) -> BiPoly:
        """``poly(X - theta*Y, Y)``: evaluating it at sheared points gives ``poly`` at the originals."""
        if self.theta % self.field.modulus == 0:
            return poly
        return affine_substitute(poly, 1, -self.theta, 0, 1, 0, 0)


# ---------------------------------------------------------------------------
# naive evaluation and Kronecker multiplication
# ---------------------------------------------------------------------------


def naive_multieval(poly: BiPoly, pts: PointSet) -> list[int]:
    """Ground truth: Horner in X for each ``Y**j`` coefficient, then Horner in Y."""
    _same_field(poly, pts)
    p = poly.field.modulus
    # columns high-to-low in X, outer list high-to-low in Y
    cols = [[row[j] for row in reversed(poly.coeffs)] for j in reversed(range(poly.m))]
    out = []
    for x, y in pts.points:
        acc = 0
        for col in cols:
            cx = 0
            for c in col:
                cx = (cx * x + c) % p
            acc = (acc * y + cx) % p
        out.append(acc)
    return out


def _kron_mul_arr(A: np.ndarray, B: np.ndarray, F: PrimeField) -> np.ndarray:
    na, ma = A.shape
    nb, mb = B.shape
    K = 2 * max(na, nb) - 1
    packed_a = _padded(A, K, ma).T.reshape(-1).tolist()
    packed_b = _padded(B, K, mb).T.reshape(-1).tolist()
    prod = _mul(_trim(packed_a), _trim(packed_b), F)
    M = ma + mb - 1
    flat = np.zeros(K * M, dtype=F.dtype)
    if prod:
        flat[: len(prod)] = prod
    return flat.reshape(M, K).T[: na + nb - 1].copy()


def kronecker_mul(a: BiPoly, b: BiPoly) -> BiPoly:
    """Product via ``Y = X**(2n'-1)`` packing and one univariate multiplication."""
    F = _same_field(a, b)
    return BiPoly.from_array(_kron_mul_arr(a.array(), b.array(), F), F)


# ---------------------------------------------------------------------------
# affine substitution
# ---------------------------------------------------------------------------


def _scale_arr(A: np.ndarray, alpha: int, beta: int, p: int) -> np.ndarray:
    n, m = A.shape
    ax = np.array([pow(alpha, i, p) for i in range(n)], dtype=A.dtype)
    by = np.array([pow(beta, j, p) for j in range(m)], dtype=A.dtype)
    return A * ax[:, None] % p * by[None, :] % p


def _shift_x_arr(A: np.ndarray, a: int, F: PrimeField) -> np.ndarray:
    """``p(X + a, Y)``: a univariate Taylor shift of every Y-column."""
    out = np.zeros_like(A)
    for j in range(A.shape[1]):
        col = _taylor_shift(_trim(A[:, j].tolist()), a, F)
        if col:
            out[: len(col), j] = col
    return out


def _skew_naive(rows: np.ndarray, c: int, p: int) -> np.ndarray:
    # Horner with the ring element (X + cY): R <- R*(X + cY) + row
    L, m = rows.shape
    R = np.zeros((L, m + L - 1), dtype=rows.dtype)
    for i in reversed(range(L)):
        nxt = np.zeros_like(R)
        nxt[1:, :] = R[:-1, :]
        nxt[:, 1:] = (nxt[:, 1:] + c * R[:, :-1]) % p
        nxt[0, :m] = (nxt[0, :m] + rows[i]) % p
        R = nxt
    return R


def _skew_x_arr(A: np.ndarray, c: int, F: PrimeField) -> np.ndarray:
    """``p(X + cY, Y)`` by divide-and-conquer Taylor shift over F[Y].

    Output bounds are ``n`` in X and ``n + m - 1`` in Y.
    """
    p = F.modulus
    n, m = A.shape
    c %= p
    if c == 0:
        return _padded(A, n, n + m - 1)
    cutoff = max(2, config.current().taylor_cutoff)
    # (X + cY)^(2^i) as (2^i+1) x (2^i+1) coefficient arrays
    pows = [np.array([[0, c], [1, 0]], dtype=A.dtype)]
    while (1 << len(pows)) < n:
        pows.append(_kron_mul_arr(pows[-1], pows[-1], F))

    def rec(rows: np.ndarray) -> np.ndarray:
        L = rows.shape[0]
        if L <= cutoff:
            return _skew_naive(rows, c, p)
        nu = (L - 1).bit_length() - 1
        lo = rec(rows[: 1 << nu])
        hi = _kron_mul_arr(pows[nu], rec(rows[1 << nu :]), F)
        out = _padded(hi, L, m + L - 1)
        out[: lo.shape[0], : lo.shape[1]] = (out[: lo.shape[0], : lo.shape[1]] + lo) % p
        return out

    return rec(A)


def _linear_steps(a11: int, a12: int, a21: int, a22: int, p: int) -> list[tuple]:
    """Factor [[a11, a12], [a21, a22]] into skews, a diagonal scaling and swaps.

    Steps are returned outermost first: applying them to a polynomial in
    order produces ``poly(M @ (X, Y))``.
    """
    if a11:
        inv = pow(a11, -1, p)
        det = (a11 * a22 - a12 * a21) % p
        return [("skew_y", a21 * inv % p), ("scale", a11, det * inv % p), ("skew_x", a12 * inv % p)]
    if a12:
        # M = (M P) P with P the coordinate swap
        return _linear_steps(a12, a11, a22, a21, p) + [("swap",)]
    if a21 or a22:
        # first row zero: M = P N with N = [[a21, a22], [0, 0]]
        return [("swap",)] + _linear_steps(a21, a22, 0, 0, p)
    return [("scale", 0, 0)]


def _apply_step(A: np.ndarray, step: tuple, F: PrimeField) -> np.ndarray:
    p = F.modulus
    kind = step[0]
    if kind == "swap":
        return A.T.copy()
    if kind == "scale":
        _, alpha, beta = step
        return A if alpha == 1 and beta == 1 else _scale_arr(A, alpha, beta, p)
    c = step[1]
    if c == 0:
        return A
    if kind == "skew_x":
        return _skew_x_arr(A, c, F)
    return _skew_x_arr(A.T.copy(), c, F).T.copy()  # skew_y


def affine_substitute(poly: BiPoly, a11, a12, a21, a22, b1, b2) -> BiPoly:
    """Coefficients of ``poly(a11 X + a12 Y + b1, a21 X + a22 Y + b2)``.

    The translation is applied as two Taylor shifts, the linear part as a
    chain of scalings, swaps and skews ``X -> X + cY`` (Taylor shifts over
    F[Y] with Kronecker products inside).  A skew grows the other
    variable's bound to ``n + m - 1``.
    """
    F = poly.field
    p = F.modulus
    a11, a12, a21, a22, b1, b2 = (int(v) % p for v in (a11, a12, a21, a22, b1, b2))
    A = poly.array()
    if b1:
        A = _shift_x_arr(A, b1, F)
    if b2:
        A = _shift_x_arr(A.T.copy(), b2, F).T.copy()
    for step in _linear_steps(a11, a12, a21, a22, p):
        A = _apply_step(A, step, F)
    # total degree stays below n + m - 1, so chained skews only add zero rows
    bound = poly.n + poly.m - 1
    return BiPoly.from_array(A[:bound, :bound], F)


# ---------------------------------------------------------------------------
# grid evaluation
# ---------------------------------------------------------------------------


def _grid_eval(poly: BiPoly, xs: list[int], ys: list[int]) -> list[list[int]]:
    F = poly.field
    tx = SubproductTree(xs, F)
    ty = SubproductTree(ys, F)
    # by_col[j][k] = q_j(x_k)
    by_col = [tx.evaluate(poly.column(j)) for j in range(poly.m)]
    out = []
    for k in range(len(xs)):
        in_y = _trim([by_col[j][k] for j in range(poly.m)])
        out.append(ty.evaluate(in_y))
    return out


def grid_multieval(poly: BiPoly, xs: Sequence[int], ys: Sequence[int]) -> list[list[int]]:
    """``out[k][l] = poly(xs[k], ys[l])`` by two rounds of univariate multipoint evaluation."""
    p = poly.field.modulus
    xs = [int(x) % p for x in xs]
    ys = [int(y) % p for y in ys]
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        raise DuplicateNodes("grid coordinates must be pairwise distinct")
    if not xs:
        return []
    if not ys:
        return [[] for _ in xs]
    return _grid_eval(poly, xs, ys)


def multieval_grid_blocks(poly: BiPoly, pts: PointSet) -> list[int]:
    """Evaluate blockwise: each block of ``max(n, m)`` points is extended to a grid."""
    _same_field(poly, pts)
    size = max(poly.n, poly.m)
    out = []
    for s in range(0, len(pts), size):
        block = pts.points[s : s + size]
        xi = {x: i for i, x in enumerate(dict.fromkeys(x for x, _ in block))}
        yi = {y: i for i, y in enumerate(dict.fromkeys(y for _, y in block))}
        grid = _grid_eval(poly, list(xi), list(yi))
        out.extend(grid[xi[x]][yi[y]] for x, y in block)
    return out


# ---------------------------------------------------------------------------
# modular bi-to-univariate composition
# ---------------------------------------------------------------------------


def _batch_compose(A: np.ndarray, powers: list[list], red: _Reducer,
                   strategy: MatMulStrategy) -> list[list]:
    """Rows ``sum_j A[i, j](X) * powers[j]`` reduced mod ``red.f``.

    ``A`` has shape (count, len(powers), n) and holds coefficient arrays.
    """
    F = red.F
    deg_f = len(red.f) - 1
    n = A.shape[2]
    chunks = max(1, -(-deg_f // n))
    rows = _longvec(A, powers, chunks, F, strategy)
    return [red.rem(r.coeffs) for r in rows]


def _check_compose_args(g: UniPoly, f: UniPoly, F: PrimeField):
    if g.field != F or f.field != F:
        raise FieldMismatch("operands over different fields")
    if f.is_zero():
        raise DivisionByZero("composition modulo the zero polynomial")


def batch_modular_compose(ps: Sequence[BiPoly], g: UniPoly, f: UniPoly,
                          strategy: MatMulStrategy | None = None) -> list[UniPoly]:
    """``[p(X, g(X)) rem f(X) for p in ps]`` with one polynomial matrix product.

    The powers ``g**j rem f`` for j below the common Y-bound form a vector;
    the Y-coefficients of the ``ps`` form the matrix it is multiplied by.
    """
    if not ps:
        return []
    F = ps[0].field
    if any(q.field != F for q in ps):
        raise FieldMismatch("bivariate polynomials over different fields")
    _check_compose_args(g, f, F)
    strategy = strategy or MatMulStrategy.auto()
    if f.degree == 0:
        return [UniPoly.zero(F) for _ in ps]
    n = max(q.n for q in ps)
    m = max(q.m for q in ps)
    A = np.zeros((len(ps), m, n), dtype=F.dtype)
    for i, q in enumerate(ps):
        A[i, : q.m, : q.n] = q.array().T
    red = _Reducer(f.coeffs, F)
    powers = _powers_mod(g.coeffs, m, red)
    return [UniPoly._raw(r, F) for r in _batch_compose(A, powers, red, strategy)]


def modular_compose(poly: BiPoly, g: UniPoly, f: UniPoly,
                    strategy: MatMulStrategy | None = None) -> UniPoly:
    """``poly(X, g(X)) rem f(X)`` by baby steps and giant steps in Y.

    With ``b = ceil(sqrt(m))`` the polynomial is cut into slabs of Y-degree
    below ``b``; all slabs are composed in one batch against
    ``g**0, ..., g**(b-1)``, then recombined with powers of ``g**b``.
    """
    F = poly.field
    _check_compose_args(g, f, F)
    strategy = strategy or MatMulStrategy.auto()
    return UniPoly._raw(_modular_compose(poly.array(), g.coeffs, _Reducer(f.coeffs, F), strategy), F)


def _modular_compose(P: np.ndarray, g: list, red: _Reducer, strategy: MatMulStrategy) -> list:
    F = red.F
    p = F.modulus
    if len(red.f) == 1:
        return []
    n, m = P.shape
    b = math.isqrt(m - 1) + 1 if m > 1 else 1
    slabs = -(-m // b)
    # slab i holds Y-columns i*b .. i*b+b-1, transposed to (Y, X)
    A = np.zeros((slabs, b, n), dtype=P.dtype)
    Pt = P.T
    for i in range(slabs):
        part = Pt[i * b : (i + 1) * b]
        A[i, : part.shape[0]] = part
    powers = _powers_mod(g, b + 1, red)
    giant = powers[b]
    baby = _batch_compose(A, powers[:b], red, strategy)
    total: list = list(baby[0])
    g_i = powers[0]
    for i in range(1, slabs):
        g_i = red.rem(_mul(g_i, giant, F))
        total = _add(total, _mul(baby[i], g_i, F), p)
    return red.rem(total)


# ---------------------------------------------------------------------------
# fast evaluation
# ---------------------------------------------------------------------------


def multieval_generic(poly: BiPoly, pts: PointSet, strategy: MatMulStrategy | None = None) -> list[int]:
    """Evaluate at points whose x-coordinates are pairwise distinct.

    f = prod (X - x_k) and g with g(x_k) = y_k come from one subproduct
    tree; then ``p(X, g) rem f`` is evaluated at the x_k on the same tree.
    """
    F = _same_field(poly, pts)
    if not pts.check_distinct_x():
        raise DistinctnessViolated("x-coordinates are not pairwise distinct")
    if len(pts) == 0:
        return []
    strategy = strategy or MatMulStrategy.auto()
    tree = SubproductTree(pts.xs, F)
    g = tree.interpolate(pts.ys)
    red = tree._root.reducer(F)
    reduced = _modular_compose(poly.array(), g, red, strategy)
    return tree.evaluate(reduced)


def shear_separates(pts: PointSet, theta: int) -> bool:
    """True iff the values ``x_k + theta*y_k`` are pairwise distinct."""
    p = pts.field.modulus
    images = sorted((x + theta * y) % p for x, y in pts.points)
    return all(a != b for a, b in zip(images, images[1:]))


def default_shear_attempts(count: int) -> int:
    return max(32, 2 * math.ceil(math.log2(max(count, 2))))


def find_shear_theta(pts: PointSet, rng_seed: int = 0, max_attempts: int | None = None) -> ShearTransform:
    """Find theta making ``x + theta*y`` injective on ``pts``.

    Tries 0 first, then uniformly random field elements.  When the field
    has at least N^2 elements each random draw succeeds with probability
    at least 1/2.
    """
    F = pts.field
    N = len(pts)
    if len(set(pts.points)) != N:
        raise DuplicatePoints("identical points cannot be separated by any shear")
    if F.modulus < N * N:
        warnings.warn(
            f"field of size {F.modulus} is smaller than N^2 = {N * N}; "
            "random shears may fail often",
            FieldTooSmall,
            stacklevel=2,
        )
    attempts = default_shear_attempts(N) if max_attempts is None else max_attempts
    rng = random.Random(rng_seed)
    for attempt in range(attempts):
        theta = 0 if attempt == 0 else rng.randrange(F.modulus)
        if shear_separates(pts, theta):
            return ShearTransform(theta, F)
    raise ShearSearchExhausted(f"no separating shear found in {attempts} attempts")


def _distinct_x_groups(points: list[tuple[int, int]]) -> list[list[int]]:
    """Indices grouped so that no group repeats an x-coordinate."""
    seen: dict[int, int] = {}
    groups: list[list[int]] = []
    for k, (x, _) in enumerate(points):
        rank = seen.get(x, 0)
        seen[x] = rank + 1
        if rank == len(groups):
            groups.append([])
        groups[rank].append(k)
    return groups


def multieval_any(poly: BiPoly, pts: PointSet, rng_seed: int = 0,
                  strategy: MatMulStrategy | None = None, split_fallback: bool = True) -> list[int]:
    """Evaluate at arbitrary points: dedupe, shear into generic position, run the generic method.

    If no separating shear turns up (fields with fewer than N^2 elements),
    the points are split into groups with distinct x-coordinates that are
    evaluated separately; with ``split_fallback=False`` the
    ShearSearchExhausted error propagates instead.
    """
    F = _same_field(poly, pts)
    index: dict[tuple[int, int], int] = {}
    slot = [index.setdefault(pt, len(index)) for pt in pts.points]
    unique = PointSet(list(index), F)
    try:
        shear = find_shear_theta(unique, rng_seed)
    except ShearSearchExhausted:
        if not split_fallback:
            raise
        values = [0] * len(unique)
        for group in _distinct_x_groups(unique.points):
            sub = PointSet([unique.points[k] for k in group], F)
            for k, v in zip(group, multieval_generic(poly, sub, strategy)):
                values[k] = v
    else:
        moved = shear.apply(unique)
        values = multieval_generic(shear.transform_polynomial(poly), moved, strategy)
    return [values[s] for s in slot]
