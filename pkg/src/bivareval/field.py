"""Prime fields Z/pZ and number-theoretic transforms over them.

Field elements are handled as plain Python ints in ``range(p)`` by every
kernel in the package; :class:`FieldElement` is a thin checked wrapper
for callers who want operator syntax and field-mismatch detection.

Array kernels use ``int64`` storage when ``p < 2**31`` (every product of
two residues fits in 62 bits) and ``object`` storage holding Python ints
otherwise, so arithmetic is exact for every supported modulus.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from .errors import (
    CompositeModulus,
    DivisionByZero,
    FieldMismatch,
    ModulusOutOfRange,
    UnsupportedTransformSize,
)

MAX_MODULUS = 1 << 62

# A 62-bit prime with 2^57 | p - 1, handy for benchmarks on the object path.
NTT_PRIME_62 = 29 * (1 << 57) + 1

# Deterministic Miller-Rabin for n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def prime_factors(n: int) -> set[int]:
    """Distinct prime factors of ``n`` (trial division, then Pollard-Brent)."""
    factors: set[int] = set()
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        while n % q == 0:
            factors.add(q)
            n //= q
    rng = random.Random(0)
    stack = [n] if n > 1 else []
    while stack:
        k = stack.pop()
        if is_prime(k):
            factors.add(k)
            continue
        d = _pollard_brent(k, rng)
        stack += [d, k // d]
    return factors


@dataclass(frozen=True)
class PrimeField:
    """The field Z/pZ together with its NTT capabilities.

    ``ntt_two_adicity`` is the largest ``s`` with ``2**s | p - 1``; transforms
    of every power-of-two length up to ``2**s`` are available.  A generator of
    the multiplicative group is stored when ``s >= 2``.
    """

    modulus: int
    ntt_two_adicity: int = dc_field(init=False, compare=False)
    primitive_root: int | None = dc_field(init=False, compare=False, repr=False)

    def __post_init__(self):
        p = self.modulus
        if not isinstance(p, int) or not 2 < p < MAX_MODULUS:
            raise ModulusOutOfRange(f"modulus must be an odd prime in (2, 2^62), got {p!r}")
        if not is_prime(p):
            raise CompositeModulus(f"{p} is not prime")
        s = ((p - 1) & -(p - 1)).bit_length() - 1
        object.__setattr__(self, "ntt_two_adicity", s)
        object.__setattr__(self, "primitive_root", _find_generator(p) if s >= 2 else None)

    @property
    def p(self) -> int:
        return self.modulus

    @property
    def dtype(self):
        return np.int64 if self.modulus < (1 << 31) else object

    def __call__(self, value) -> FieldElement:
        return FieldElement(int(value) % self.modulus, self)

    def __len__(self):
        return self.modulus

    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    def one(self) -> FieldElement:
        return FieldElement(1, self)

    def inv(self, a: int) -> int:
        a %= self.modulus
        if a == 0:
            raise DivisionByZero("0 has no inverse")
        return pow(a, -1, self.modulus)

    def root_of_unity(self, order: int) -> int:
        """A primitive ``order``-th root of unity; ``order`` a power of two."""
        if order < 1 or order & (order - 1):
            raise UnsupportedTransformSize(f"transform size {order} is not a power of two")
        if order.bit_length() - 1 > self.ntt_two_adicity:
            raise UnsupportedTransformSize(
                f"F_{self.modulus} has no root of unity of order {order} "
                f"(two-adicity {self.ntt_two_adicity})"
            )
        if order == 1:
            return 1
        if order == 2:
            return self.modulus - 1
        return pow(self.primitive_root, (self.modulus - 1) // order, self.modulus)

    def supports_ntt(self, size: int) -> bool:
        return size >= 1 and size.bit_length() - 1 <= self.ntt_two_adicity

    def array(self, values) -> np.ndarray:
        return np.array([int(v) % self.modulus for v in values], dtype=self.dtype)


def _find_generator(p: int) -> int:
    qs = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable: Z/pZ* is cyclic")


@lru_cache(maxsize=None)
def field_new(p: int) -> PrimeField:
    """Validated, cached field constructor."""
    return PrimeField(p)


class FieldElement:
    """A residue tied to its field.  Arithmetic across fields raises FieldMismatch."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        self.value = value % field.modulus
        self.field = field

    def _other(self, b) -> int:
        if isinstance(b, FieldElement):
            if b.field != self.field:
                raise FieldMismatch(f"F_{self.field.modulus} vs F_{b.field.modulus}")
            return b.value
        if isinstance(b, int):
            return b % self.field.modulus
        return NotImplemented

    def _wrap(self, v: int) -> FieldElement:
        return FieldElement(v, self.field)

    def __add__(self, b):
        v = self._other(b)
        return NotImplemented if v is NotImplemented else self._wrap(self.value + v)

    __radd__ = __add__

    def __sub__(self, b):
        v = self._other(b)
        return NotImplemented if v is NotImplemented else self._wrap(self.value - v)

    def __rsub__(self, b):
        v = self._other(b)
        return NotImplemented if v is NotImplemented else self._wrap(v - self.value)

    def __mul__(self, b):
        v = self._other(b)
        return NotImplemented if v is NotImplemented else self._wrap(self.value * v)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.value)

    def inv(self) -> FieldElement:
        return self._wrap(self.field.inv(self.value))

    def __truediv__(self, b):
        v = self._other(b)
        if v is NotImplemented:
            return NotImplemented
        return self._wrap(self.value * self.field.inv(v))

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** -e
        return self._wrap(pow(self.value, e, self.field.modulus))

    def __eq__(self, b):
        if isinstance(b, FieldElement):
            return self.field == b.field and self.value == b.value
        if isinstance(b, int):
            return self.value == b % self.field.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.modulus))

    def __int__(self):
        return self.value

    __index__ = __int__

    def __repr__(self):
        return f"{self.value} (mod {self.field.modulus})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inv()


# ---------------------------------------------------------------------------
# Number-theoretic transform
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _bitrev(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


@lru_cache(maxsize=256)
def _stage_twiddles(p: int, n: int, inverse: bool) -> tuple:
    F = field_new(p)
    w = F.root_of_unity(n)
    if inverse:
        w = pow(w, -1, p)
    dtype = F.dtype
    pows = [1] * max(1, n // 2)
    for j in range(1, n // 2):
        pows[j] = pows[j - 1] * w % p
    pows = np.array(pows, dtype=dtype)
    stages = []
    h = 1
    while h < n:
        stages.append(pows[:: n // (2 * h)][:h].copy())
        h *= 2
    return tuple(stages)


def _butterflies(x: np.ndarray, stages, q, lead: tuple) -> np.ndarray:
    # q is an int or broadcasts against the (lead, blocks, 2, h) view
    n = x.shape[-1]
    qv = q[..., 0, :] if isinstance(q, np.ndarray) else q
    h = 1
    for w in stages:
        x = x.reshape(lead + (n // (2 * h), 2, h))
        u = x[..., 0, :]
        v = x[..., 1, :] * w % qv
        # u, v lie in [0, q): one conditional correction replaces a second %
        y = np.empty_like(x)
        lo, hi = y[..., 0, :], y[..., 1, :]
        np.add(u, v, out=lo)
        lo -= qv
        lo += qv & (lo >> 63)
        np.subtract(u, v, out=hi)
        hi += qv & (hi >> 63)
        x = y
        h *= 2
    return x.reshape(lead + (n,))


def ntt_array(a: np.ndarray, F: PrimeField, inverse: bool = False) -> np.ndarray:
    """Transform along the last axis of ``a`` (length a power of two).

    Forward output index ``k`` holds the input polynomial evaluated at
    ``w**k`` for the canonical root ``w = F.root_of_unity(n)``.  The inverse
    includes the ``1/n`` scaling.  Leading axes are batched.
    """
    n = a.shape[-1]
    if not F.supports_ntt(n):
        F.root_of_unity(n)  # raises UnsupportedTransformSize with details
    p = F.modulus
    x = _butterflies(a[..., _bitrev(n)], _stage_twiddles(p, n, inverse), p, a.shape[:-1])
    if inverse and n > 1:
        x = x * pow(n, -1, p) % p
    return x


def ntt_multi(a: np.ndarray, moduli: tuple, inverse: bool = False) -> np.ndarray:
    """Batched int64 transforms where row ``i`` of ``a`` (shape (k, r, n)) lives mod ``moduli[i]``.

    Every modulus must be a prime below 2^31 supporting length ``n``.
    """
    k, r, n = a.shape
    qs = np.array(moduli, dtype=np.int64)
    per = [_stage_twiddles(q, n, inverse) for q in moduli]
    stages = []
    for level in range(len(per[0])):
        w = np.stack([t[level] for t in per])  # (k, h)
        stages.append(w[:, None, None, :])
    x = _butterflies(a[..., _bitrev(n)], stages, qs[:, None, None, None, None], (k, r))
    if inverse and n > 1:
        scale = np.array([pow(n, -1, q) for q in moduli], dtype=np.int64)
        x = x * scale[:, None, None] % qs[:, None, None]
    return x


def _check_size(F: PrimeField, coeffs, size: int | None) -> int:
    size = len(coeffs) if size is None else size
    if size < 1 or size & (size - 1):
        raise UnsupportedTransformSize(f"transform size {size} is not a power of two")
    if len(coeffs) != size:
        raise ValueError(f"input length {len(coeffs)} != transform size {size}")
    return size


def ntt_forward(F: PrimeField, coeffs, size: int | None = None) -> list[int]:
    """Evaluate ``coeffs`` at ``w**0, ..., w**(size-1)``."""
    _check_size(F, coeffs, size)
    return [int(v) for v in ntt_array(F.array(coeffs), F)]


def ntt_inverse(F: PrimeField, values, size: int | None = None) -> list[int]:
    _check_size(F, values, size)
    return [int(v) for v in ntt_array(F.array(values), F, inverse=True)]
