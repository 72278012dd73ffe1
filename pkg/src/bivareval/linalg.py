"""Matrix products over F_p and over F_p[X].

Both matrix kinds share one engine working on 3-d arrays ``(rows, cols, L)``
whose trailing axis is the representation of one ring element:

* field matrices use ``L == 1`` and pointwise products;
* polynomial matrices are moved to the NTT domain when the field allows
  it, which makes the ring product pointwise as well, and otherwise stay
  in coefficient form with a convolution as the ring product.

The bilinear algorithm (naive or Strassen) only ever adds, subtracts and
ring-multiplies blocks, so running it on transformed entries computes the
same products as running it on the polynomials themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ChunkDegreeOverflow, DimensionMismatch, FieldMismatch
from .field import PrimeField, ntt_array
from .unipoly import UniPoly, _next_pow2, _trim

FIELD_STRASSEN_CUTOFF = 64
POLY_STRASSEN_CUTOFF = 8


@dataclass(frozen=True)
class MatMulStrategy:
    """Which bilinear algorithm to run.

    ``strassen_cutoff=None`` means the per-matrix-kind default (64 for field
    matrices, 8 for polynomial matrices, whose entry products are costly).
    """

    kind: str = "auto"
    strassen_cutoff: int | None = None

    def __post_init__(self):
        if self.kind not in ("naive", "strassen", "auto"):
            raise ValueError(f"unknown strategy {self.kind!r}")
        if self.strassen_cutoff is not None and self.strassen_cutoff < 2:
            raise ValueError("strassen_cutoff must be >= 2")

    @classmethod
    def naive(cls) -> MatMulStrategy:
        return cls("naive")

    @classmethod
    def strassen(cls, cutoff: int | None = None) -> MatMulStrategy:
        return cls("strassen", cutoff)

    @classmethod
    def auto(cls, cutoff: int | None = None) -> MatMulStrategy:
        return cls("auto", cutoff)

    @property
    def exponent_estimate(self) -> float:
        return 3.0 if self.kind == "naive" else math.log2(7)

    def cutoff(self, default: int) -> int:
        return default if self.strassen_cutoff is None else self.strassen_cutoff

    def use_strassen(self, r: int, k: int, c: int, default_cutoff: int) -> bool:
        if self.kind == "naive":
            return False
        if self.kind == "strassen":
            return True
        return min(r, k, c) >= self.cutoff(default_cutoff)


# ---------------------------------------------------------------------------
# engine
# ---------------------------------------------------------------------------


class _Ring:
    """Block arithmetic for one entry representation."""

    def __init__(self, p: int, base: Callable[[np.ndarray, np.ndarray], np.ndarray]):
        self.p = p
        self.base = base
        self.ring_products = 0


def _pointwise_base(p: int) -> Callable:
    def base(A, B):
        r, k, L = A.shape
        c = B.shape[1]
        acc = np.zeros((r, c, L), dtype=A.dtype)
        for j in range(k):
            acc = (acc + A[:, j, None, :] * B[None, j, :, :]) % p
        return acc

    return base


def _convolution_base(p: int) -> Callable:
    def base(A, B):
        r, k, La = A.shape
        c, Lb = B.shape[1], B.shape[2]
        acc = np.zeros((r, c, La + Lb - 1), dtype=A.dtype)
        for j in range(k):
            Bj = B[None, j, :, :]
            for d in range(La):
                col = A[:, j, None, d, None]
                acc[:, :, d : d + Lb] = (acc[:, :, d : d + Lb] + col * Bj) % p
        return acc

    return base


def _pad_to(A: np.ndarray, rows: int, cols: int) -> np.ndarray:
    if A.shape[0] == rows and A.shape[1] == cols:
        return A
    out = np.zeros((rows, cols) + A.shape[2:], dtype=A.dtype)
    out[: A.shape[0], : A.shape[1]] = A
    return out


def _strassen(A: np.ndarray, B: np.ndarray, ring: _Ring, cutoff: int) -> np.ndarray:
    n = A.shape[0]
    if n < cutoff or n == 1:
        ring.ring_products += n ** 3
        return ring.base(A, B)
    if n % 2:
        C = _strassen(_pad_to(A, n + 1, n + 1), _pad_to(B, n + 1, n + 1), ring, cutoff)
        return C[:n, :n]
    p = ring.p
    h = n // 2
    A11, A12, A21, A22 = A[:h, :h], A[:h, h:], A[h:, :h], A[h:, h:]
    B11, B12, B21, B22 = B[:h, :h], B[:h, h:], B[h:, :h], B[h:, h:]
    M1 = _strassen((A11 + A22) % p, (B11 + B22) % p, ring, cutoff)
    M2 = _strassen((A21 + A22) % p, B11, ring, cutoff)
    M3 = _strassen(A11, (B12 - B22) % p, ring, cutoff)
    M4 = _strassen(A22, (B21 - B11) % p, ring, cutoff)
    M5 = _strassen((A11 + A12) % p, B22, ring, cutoff)
    M6 = _strassen((A21 - A11) % p, (B11 + B12) % p, ring, cutoff)
    M7 = _strassen((A12 - A22) % p, (B21 + B22) % p, ring, cutoff)
    top = np.concatenate(((M1 + M4 - M5 + M7) % p, (M3 + M5) % p), axis=1)
    bottom = np.concatenate(((M2 + M4) % p, (M1 - M2 + M3 + M6) % p), axis=1)
    return np.concatenate((top, bottom), axis=0)


def _multiply(A: np.ndarray, B: np.ndarray, ring: _Ring, strategy: MatMulStrategy,
              default_cutoff: int) -> np.ndarray:
    r, k = A.shape[:2]
    c = B.shape[1]
    if not strategy.use_strassen(r, k, c, default_cutoff):
        ring.ring_products += r * k * c
        return ring.base(A, B)
    cutoff = strategy.cutoff(default_cutoff)
    # rectangular operands: square s-by-s blocks, s the smallest dimension
    s = min(r, k, c)
    R, K, C = -(-r // s) * s, -(-k // s) * s, -(-c // s) * s
    A = _pad_to(A, R, K)
    B = _pad_to(B, K, C)
    p = ring.p
    rows = []
    for bi in range(0, R, s):
        row = []
        for bj in range(0, C, s):
            acc = None
            for bk in range(0, K, s):
                prod = _strassen(A[bi : bi + s, bk : bk + s], B[bk : bk + s, bj : bj + s], ring, cutoff)
                acc = prod if acc is None else (acc + prod) % p
            row.append(acc)
        rows.append(np.concatenate(row, axis=1))
    return np.concatenate(rows, axis=0)[:r, :c]


# ---------------------------------------------------------------------------
# field matrices
# ---------------------------------------------------------------------------


class FieldMatrix:
    """Dense row-major matrix over F_p."""

    __slots__ = ("rows", "cols", "entries", "field")

    def __init__(self, rows: int, cols: int, entries: Sequence[int], field: PrimeField):
        if rows < 1 or cols < 1:
            raise DimensionMismatch("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise DimensionMismatch(f"{len(entries)} entries for a {rows}x{cols} matrix")
        p = field.modulus
        self.rows, self.cols = rows, cols
        self.entries = [int(e) % p for e in entries]
        self.field = field

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], field: PrimeField) -> FieldMatrix:
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), cols, [e for r in rows for e in r], field)

    @classmethod
    def identity(cls, n: int, field: PrimeField) -> FieldMatrix:
        return cls(n, n, [int(i == j) for i in range(n) for j in range(n)], field)

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [self.entries[i * c : (i + 1) * c] for i in range(self.rows)]

    def _array(self) -> np.ndarray:
        return np.array(self.entries, dtype=self.field.dtype).reshape(self.rows, self.cols, 1)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (self.field, self.rows, self.cols, self.entries) == (
            other.field, other.rows, other.cols, other.entries)

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __repr__(self):
        return f"FieldMatrix({self.to_rows()} mod {self.field.modulus})"


def mat_mul(a: FieldMatrix, b: FieldMatrix, strategy: MatMulStrategy | None = None) -> FieldMatrix:
    if a.field != b.field:
        raise FieldMismatch("matrices over different fields")
    if a.cols != b.rows:
        raise DimensionMismatch(f"{a.rows}x{a.cols} times {b.rows}x{b.cols}")
    strategy = strategy or MatMulStrategy.auto()
    p = a.field.modulus
    C = _multiply(a._array(), b._array(), _Ring(p, _pointwise_base(p)), strategy, FIELD_STRASSEN_CUTOFF)
    return FieldMatrix(a.rows, b.cols, C.reshape(-1).tolist(), a.field)


# ---------------------------------------------------------------------------
# polynomial matrices
# ---------------------------------------------------------------------------


class PolyMatrix:
    """Dense row-major matrix of UniPoly entries, all of degree < ``degree_bound``."""

    __slots__ = ("rows", "cols", "entries", "degree_bound", "field")

    def __init__(self, rows: int, cols: int, entries: Sequence[UniPoly], field: PrimeField,
                 degree_bound: int | None = None):
        if rows < 1 or cols < 1:
            raise DimensionMismatch("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise DimensionMismatch(f"{len(entries)} entries for a {rows}x{cols} matrix")
        if any(e.field != field for e in entries):
            raise FieldMismatch("entry from a different field")
        longest = max((len(e.coeffs) for e in entries), default=0)
        if degree_bound is None:
            degree_bound = max(1, longest)
        elif longest > degree_bound:
            raise ValueError(f"entry of degree {longest - 1} exceeds bound {degree_bound}")
        self.rows, self.cols = rows, cols
        self.entries = list(entries)
        self.field = field
        self.degree_bound = degree_bound

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[UniPoly]], field: PrimeField,
                  degree_bound: int | None = None) -> PolyMatrix:
        return cls(len(rows), len(rows[0]), [e for r in rows for e in r], field, degree_bound)

    @classmethod
    def identity(cls, n: int, field: PrimeField) -> PolyMatrix:
        one, zero = UniPoly.constant(1, field), UniPoly.zero(field)
        return cls(n, n, [one if i == j else zero for i in range(n) for j in range(n)], field, 1)

    def __getitem__(self, ij) -> UniPoly:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[UniPoly]]:
        c = self.cols
        return [self.entries[i * c : (i + 1) * c] for i in range(self.rows)]

    def _array(self) -> np.ndarray:
        out = np.zeros((self.rows * self.cols, self.degree_bound), dtype=self.field.dtype)
        for idx, e in enumerate(self.entries):
            if e.coeffs:
                out[idx, : len(e.coeffs)] = e.coeffs
        return out.reshape(self.rows, self.cols, self.degree_bound)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.field, self.rows, self.cols, self.entries) == (
            other.field, other.rows, other.cols, other.entries)


def _polymat_arrays(A: np.ndarray, B: np.ndarray, F: PrimeField,
                    strategy: MatMulStrategy) -> np.ndarray:
    """Coefficient arrays (r,k,La) x (k,c,Lb) -> (r,c,La+Lb-1)."""
    p = F.modulus
    out_len = A.shape[2] + B.shape[2] - 1
    size = _next_pow2(out_len)
    if F.supports_ntt(size):
        At = np.zeros(A.shape[:2] + (size,), dtype=A.dtype)
        At[:, :, : A.shape[2]] = A
        Bt = np.zeros(B.shape[:2] + (size,), dtype=B.dtype)
        Bt[:, :, : B.shape[2]] = B
        At, Bt = ntt_array(At, F), ntt_array(Bt, F)
        C = _multiply(At, Bt, _Ring(p, _pointwise_base(p)), strategy, POLY_STRASSEN_CUTOFF)
        return ntt_array(C, F, inverse=True)[:, :, :out_len]
    return _multiply(A, B, _Ring(p, _convolution_base(p)), strategy, POLY_STRASSEN_CUTOFF)


def _rows_to_polys(C: np.ndarray, F: PrimeField) -> list[UniPoly]:
    return [UniPoly._raw(_trim(row), F) for row in C.reshape(-1, C.shape[-1]).tolist()]


def polymat_mul(a: PolyMatrix, b: PolyMatrix, strategy: MatMulStrategy | None = None) -> PolyMatrix:
    """Product of polynomial matrices by scalar extension of the chosen bilinear algorithm."""
    if a.field != b.field:
        raise FieldMismatch("matrices over different fields")
    if a.cols != b.rows:
        raise DimensionMismatch(f"{a.rows}x{a.cols} times {b.rows}x{b.cols}")
    strategy = strategy or MatMulStrategy.auto()
    C = _polymat_arrays(a._array(), b._array(), a.field, strategy)
    return PolyMatrix(a.rows, b.cols, _rows_to_polys(C, a.field), a.field,
                      a.degree_bound + b.degree_bound - 1)


def mat_times_longvec(a: PolyMatrix, b: Sequence[UniPoly], chunk_count: int,
                      strategy: MatMulStrategy | None = None) -> list[UniPoly]:
    """``a @ b`` where each ``b[j]`` has degree < ``a.degree_bound * chunk_count``.

    Each ``b[j]`` is cut into ``chunk_count`` pieces of degree < n (n the
    entry bound of ``a``), giving a ``cols x chunk_count`` matrix; one
    polynomial matrix product and a shifted overlap-add rebuild the result.
    """
    F = a.field
    n = a.degree_bound
    if len(b) != a.cols:
        raise DimensionMismatch(f"vector of length {len(b)} for {a.cols} columns")
    if chunk_count < 1:
        raise ValueError("chunk_count must be positive")
    for j, bj in enumerate(b):
        if bj.field != F:
            raise FieldMismatch("vector entry from a different field")
        if len(bj.coeffs) > n * chunk_count:
            raise ChunkDegreeOverflow(
                f"b[{j}] has degree {len(bj.coeffs) - 1}, bound is {n * chunk_count}")
    strategy = strategy or MatMulStrategy.auto()
    return _longvec(a._array(), [bj.coeffs for bj in b], chunk_count, F, strategy)


def _longvec(A: np.ndarray, b: list[list], c: int, F: PrimeField,
             strategy: MatMulStrategy) -> list[UniPoly]:
    p = F.modulus
    r, k, n = A.shape
    flat = np.zeros((k, c * n), dtype=F.dtype)
    for j, coeffs in enumerate(b):
        if coeffs:
            flat[j, : len(coeffs)] = coeffs
    B = flat.reshape(k, c, n)
    C = _polymat_arrays(A, B, F, strategy)  # (r, c, 2n-1)
    # chunk products have degree < 2n, so only neighbouring chunks overlap
    assert C.shape[2] == 2 * n - 1
    out = np.zeros((r, (c + 1) * n), dtype=F.dtype)
    out[:, : c * n] = C[:, :, :n].reshape(r, c * n)
    if n > 1:
        high = np.zeros((r, c, n), dtype=F.dtype)
        high[:, :, : n - 1] = C[:, :, n:]
        out[:, n : (c + 1) * n] = (out[:, n : (c + 1) * n] + high.reshape(r, c * n)) % p
    return [UniPoly._raw(_trim(row), F) for row in out.tolist()]
