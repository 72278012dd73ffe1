"""Dense univariate polynomials over a prime field.

Coefficients are stored low-degree first as Python ints in ``range(p)``;
the zero polynomial is the empty list.  The ``_``-prefixed kernels work on
raw coefficient lists and are what the bivariate code calls in its inner
loops; :class:`UniPoly` wraps them with field bookkeeping.
"""

from __future__ import annotations

import numpy as np

from . import config
from .errors import DivisionByZero, DuplicateNodes, FieldMismatch
from .field import FieldElement, PrimeField, ntt_array, ntt_multi

# deg(0); compares below every integer degree
ZERO_DEGREE = float("-inf")

# below this many coefficient products, plain Python beats numpy setup cost
_TINY_PRODUCT = 96


def _trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


# ---------------------------------------------------------------------------
# multiplication kernels
# ---------------------------------------------------------------------------


def _schoolbook_arr(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if len(a) > len(b):
        a, b = b, a
    out = np.zeros(len(a) + len(b) - 1, dtype=b.dtype)
    lb = len(b)
    for i, c in enumerate(a.tolist()):
        if c:
            out[i : i + lb] = (out[i : i + lb] + c * b) % p
    return out


def _karatsuba_arr(a: np.ndarray, b: np.ndarray, p: int, cutoff: int) -> np.ndarray:
    if len(a) > len(b):
        a, b = b, a
    la, lb = len(a), len(b)
    if la <= cutoff:
        return _schoolbook_arr(a, b, p)
    if lb >= 2 * la:
        # unbalanced: slice the long operand into la-sized pieces
        out = np.zeros(la + lb - 1, dtype=b.dtype)
        for s in range(0, lb, la):
            piece = _karatsuba_arr(a, b[s : s + la], p, cutoff)
            out[s : s + len(piece)] = (out[s : s + len(piece)] + piece) % p
        return out
    h = (lb + 1) // 2
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    z0 = _karatsuba_arr(a0, b0, p, cutoff)
    z2 = _karatsuba_arr(a1, b1, p, cutoff) if len(a1) else None
    sa = a0.copy()
    sa[: len(a1)] = (sa[: len(a1)] + a1) % p
    sb = b0.copy()
    sb[: len(b1)] = (sb[: len(b1)] + b1) % p
    z1 = _karatsuba_arr(sa, sb, p, cutoff)
    z1[: len(z0)] -= z0
    if z2 is not None:
        z1[: len(z2)] -= z2
    out = np.zeros(la + lb - 1, dtype=b.dtype)
    out[: len(z0)] = z0
    if z2 is not None:
        out[2 * h : 2 * h + len(z2)] += z2
    z1 = z1 % p
    n1 = min(len(z1), len(out) - h)
    out[h : h + n1] += z1[:n1]
    return out % p


def _ntt_mul_arr(a: np.ndarray, b: np.ndarray, F: PrimeField) -> np.ndarray:
    p = F.modulus
    n = len(a) + len(b) - 1
    size = _next_pow2(n)
    fa = np.zeros(size, dtype=a.dtype)
    fa[: len(a)] = a
    fa = ntt_array(fa, F)
    if b is a:
        fb = fa
    else:
        fb = np.zeros(size, dtype=a.dtype)
        fb[: len(b)] = b
        fb = ntt_array(fb, F)
    return ntt_array(fa * fb % p, F, inverse=True)[:n]


# NTT-friendly primes below 2^31 for multi-modular products: (prime, two-adicity)
_AUX_PRIMES = (
    (2013265921, 27),
    (469762049, 26),
    (1811939329, 26),
    (2113929217, 25),
    (167772161, 25),
    (754974721, 24),
    (998244353, 23),
)


def _aux_primes(bound: int, size: int) -> list:
    chosen, prod = [], 1
    for q, s in _AUX_PRIMES:
        if size.bit_length() - 1 > s:
            continue
        chosen.append(q)
        prod *= q
        if prod > bound:
            return chosen
    raise ValueError("product too long for the multi-modular transform")


def _crt_ntt_mul_arr(a: list, b: list, p: int) -> np.ndarray:
    """Exact product over Z of residue lists via word-size NTTs, reduced mod p."""
    n = len(a) + len(b) - 1
    size = _next_pow2(n)
    # every integer coefficient lies in [0, bound)
    bound = min(len(a), len(b)) * (p - 1) ** 2 + 1
    primes = tuple(_aux_primes(bound, size))
    k = len(primes)
    qs = np.array(primes, dtype=np.int64)[:, None]
    x = np.zeros((k, 2, size), dtype=np.int64)
    x[:, 0, : len(a)] = np.array(a, dtype=object)[None, :] % qs
    x[:, 1, : len(b)] = np.array(b, dtype=object)[None, :] % qs
    x = ntt_multi(x, primes)
    prod = (x[:, 0, :] * x[:, 1, :] % qs)[:, None, :]
    residues = ntt_multi(prod, primes, inverse=True)[:, 0, :n]
    # Garner: mixed-radix digits v_i with value = v0 + q0*(v1 + q1*(v2 + ...))
    digits = []
    for i, q in enumerate(primes):
        v = residues[i]
        for j in range(i):
            v = (v - digits[j]) % q * pow(primes[j], -1, q) % q
        digits.append(v)
    acc = digits[-1].astype(object)
    for q, v in zip(reversed(primes[:-1]), reversed(digits[:-1])):
        acc = acc * q + v.astype(object)
    return acc % p


def _bigint_mul(a: list, b: list, p: int) -> list:
    """Product via one CPython integer multiply (Kronecker substitution X = 2^k)."""
    n = len(a) + len(b) - 1
    bound = min(len(a), len(b)) * (p - 1) ** 2 + 1
    w = (bound.bit_length() + 7) // 8
    ia = int.from_bytes(b"".join(c.to_bytes(w, "little") for c in a), "little")
    ib = ia if b is a else int.from_bytes(b"".join(c.to_bytes(w, "little") for c in b), "little")
    buf = (ia * ib).to_bytes(n * w, "little")
    return [int.from_bytes(buf[i : i + w], "little") % p for i in range(0, n * w, w)]


def _mul_small(a: list, b: list, p: int) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if c:
            for j, d in enumerate(b):
                out[i + j] += c * d
    return [v % p for v in out]


def mul_method(F: PrimeField, la: int, lb: int) -> str:
    """Which kernel :func:`_mul` uses for operand lengths ``la``, ``lb``.

    Above 31-bit moduli the direct transform would run on Python-int arrays,
    so mid-size products pack into one big integer and long ones go through
    word-size auxiliary primes and CRT.
    """
    cfg = config.current()
    if F.dtype is object:
        return "bigint" if la + lb - 1 <= cfg.bigint_cutoff else "ntt_crt"
    if min(la, lb) - 1 < cfg.schoolbook_cutoff:
        return "schoolbook"
    if F.supports_ntt(_next_pow2(la + lb - 1)):
        return "ntt"
    return "karatsuba"


def _mul(a: list, b: list, F: PrimeField, method: str | None = None) -> list:
    if not a or not b:
        return []
    p = F.modulus
    if method is None:
        if len(a) * len(b) <= _TINY_PRODUCT:
            return _mul_small(a, b, p)
        method = mul_method(F, len(a), len(b))
    if method == "schoolbook" and len(a) * len(b) <= _TINY_PRODUCT:
        return _mul_small(a, b, p)
    if method == "bigint":
        return _bigint_mul(a, b, p)
    if method == "ntt_crt":
        return _crt_ntt_mul_arr(a, b, p).tolist()
    xa = np.array(a, dtype=F.dtype)
    xb = xa if b is a else np.array(b, dtype=F.dtype)
    if method == "schoolbook":
        out = _schoolbook_arr(xa, xb, p)
    elif method == "ntt":
        out = _ntt_mul_arr(xa, xb, F)
    elif method == "karatsuba":
        out = _karatsuba_arr(xa, xb, p, max(1, config.current().schoolbook_cutoff))
    else:
        raise ValueError(f"unknown multiplication method {method!r}")
    return out.tolist()


def _mullow(a: list, b: list, k: int, F: PrimeField) -> list:
    return _trim(_mul(a[:k], b[:k], F)[:k])


def _add(a: list, b: list, p: int) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = [(x + y) % p for x, y in zip(a, b)]
    out += a[len(b) :]
    return _trim(out)


def _sub(a: list, b: list, p: int) -> list:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _scale(a: list, c: int, p: int) -> list:
    c %= p
    if not c:
        return []
    return [x * c % p for x in a]


def _horner(a: list, x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


# ---------------------------------------------------------------------------
# division
# ---------------------------------------------------------------------------


def _inv_series(h: list, k: int, F: PrimeField) -> list:
    """``1/h mod X**k`` by Newton iteration; needs ``h[0] != 0``."""
    p = F.modulus
    g = [pow(h[0], -1, p)]
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        e = _mullow(h, g, prec, F)  # h*g = 1 + O(X^old)
        e[0] = (e[0] - 1) % p
        corr = _mullow(g, _trim(e), prec, F)
        g = _sub(g, corr, p)
    return g[:k]


def _long_divrem(a: list, d: list, p: int) -> tuple[list, list]:
    ld = len(d)
    r = list(a)
    q = [0] * (len(a) - ld + 1)
    lead_inv = pow(d[-1], -1, p)
    for i in range(len(a) - ld, -1, -1):
        c = r[i + ld - 1] * lead_inv % p
        q[i] = c
        if c:
            for j in range(ld - 1):
                r[i + j] = (r[i + j] - c * d[j]) % p
        r[i + ld - 1] = 0
    return _trim(q), _trim(r[: ld - 1])


def _newton_quotient(a: list, d: list, inv_rev_d: list, F: PrimeField) -> list:
    k = len(a) - len(d) + 1
    rev_a = a[::-1][:k]
    q_rev = _mullow(rev_a, inv_rev_d, k, F)
    q_rev += [0] * (k - len(q_rev))
    return _trim(q_rev[::-1])


def _divrem(a: list, d: list, F: PrimeField) -> tuple[list, list]:
    if not d:
        raise DivisionByZero("polynomial division by zero")
    p = F.modulus
    if len(a) < len(d):
        return [], list(a)
    if len(d) == 1:
        c = pow(d[0], -1, p)
        return _scale(a, c, p), []
    if len(d) - 1 < config.current().newton_cutoff:
        return _long_divrem(a, d, p)
    k = len(a) - len(d) + 1
    inv = _inv_series(d[::-1], k, F)
    q = _newton_quotient(a, d, inv, F)
    r = _sub(a[: len(d) - 1], _mul(q, d, F)[: len(d) - 1], p)
    return q, r


class _Reducer:
    """Repeated reduction modulo a fixed ``f`` with a cached reversed inverse."""

    __slots__ = ("f", "F", "_inv", "_prec")

    def __init__(self, f: list, F: PrimeField):
        if not f:
            raise DivisionByZero("reduction modulo the zero polynomial")
        self.f = f
        self.F = F
        self._inv = None
        self._prec = 0

    def _inverse(self, k: int) -> list:
        if self._prec < k:
            self._prec = max(k, len(self.f) - 1)
            self._inv = _inv_series(self.f[::-1], self._prec, self.F)
        return self._inv

    def rem(self, a: list) -> list:
        f, F = self.f, self.F
        if len(a) < len(f):
            return a
        if len(f) == 1:
            return []
        if len(f) - 1 < config.current().newton_cutoff:
            return _long_divrem(a, f, F.modulus)[1]
        k = len(a) - len(f) + 1
        q = _newton_quotient(a, f, self._inverse(k)[:k], F)
        n = len(f) - 1
        return _sub(a[:n], _mul(q, f, F)[:n], F.modulus)


# ---------------------------------------------------------------------------
# public polynomial type
# ---------------------------------------------------------------------------


class UniPoly:
    """Immutable dense polynomial; ``coeffs[i]`` is the coefficient of X^i."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field: PrimeField):
        p = field.modulus
        self.coeffs = _trim([int(c) % p for c in coeffs])
        self.field = field

    @classmethod
    def _raw(cls, coeffs: list, field: PrimeField) -> UniPoly:
        obj = cls.__new__(cls)
        obj.coeffs = coeffs
        obj.field = field
        return obj

    @classmethod
    def zero(cls, field: PrimeField) -> UniPoly:
        return cls._raw([], field)

    @classmethod
    def constant(cls, c, field: PrimeField) -> UniPoly:
        return cls([c], field)

    @classmethod
    def x(cls, field: PrimeField) -> UniPoly:
        return cls._raw([0, 1], field)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _check(self, other) -> UniPoly:
        if isinstance(other, int):
            return UniPoly([other], self.field)
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch("element from a different field")
            return UniPoly._raw([other.value] if other.value else [], self.field)
        if not isinstance(other, UniPoly):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch(f"F_{self.field.modulus} vs F_{other.field.modulus}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return UniPoly._raw(_add(self.coeffs, other.coeffs, self.field.modulus), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return UniPoly._raw(_sub(self.coeffs, other.coeffs, self.field.modulus), self.field)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return UniPoly._raw(_sub([], self.coeffs, self.field.modulus), self.field)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __divmod__(self, other):
        return poly_divrem(self, self._check(other))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x) -> int:
        return _horner(self.coeffs, int(x) % self.field.modulus, self.field.modulus)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _trim([other % self.field.modulus])
        return NotImplemented

    def __hash__(self):
        return hash((tuple(self.coeffs), self.field.modulus))

    def derivative(self) -> UniPoly:
        p = self.field.modulus
        return UniPoly._raw(_trim([i * c % p for i, c in enumerate(self.coeffs)][1:]), self.field)

    def __repr__(self):
        if not self.coeffs:
            return f"UniPoly(0 mod {self.field.modulus})"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*X^{i}" if i > 1 else f"{c}*X")
        return f"UniPoly({' + '.join(terms)} mod {self.field.modulus})"


def _same_field(a: UniPoly, b: UniPoly) -> PrimeField:
    if a.field != b.field:
        raise FieldMismatch(f"F_{a.field.modulus} vs F_{b.field.modulus}")
    return a.field


def poly_mul(a: UniPoly, b: UniPoly, method: str | None = None) -> UniPoly:
    """Product of ``a`` and ``b``.

    ``method`` forces one of ``"schoolbook"``, ``"karatsuba"``, ``"ntt"``,
    ``"ntt_crt"``, ``"bigint"``; by default the kernel is chosen by
    :func:`mul_method`.
    """
    F = _same_field(a, b)
    return UniPoly._raw(_mul(a.coeffs, b.coeffs, F, method), F)


def poly_divrem(a: UniPoly, d: UniPoly) -> tuple[UniPoly, UniPoly]:
    """``(q, r)`` with ``a = q*d + r`` and ``deg r < deg d``."""
    F = _same_field(a, d)
    q, r = _divrem(a.coeffs, d.coeffs, F)
    return UniPoly._raw(q, F), UniPoly._raw(r, F)


def pow_mod(g: UniPoly, e: int, f: UniPoly) -> UniPoly:
    """``g**e rem f`` by square-and-multiply."""
    F = _same_field(g, f)
    if e < 0:
        raise ValueError("negative exponent")
    red = _Reducer(f.coeffs, F)
    result = red.rem([1])
    base = red.rem(g.coeffs)
    while e:
        if e & 1:
            result = red.rem(_mul(result, base, F))
        e >>= 1
        if e:
            base = red.rem(_mul(base, base, F))
    return UniPoly._raw(result, F)


def _powers_mod(g: list, count: int, red: _Reducer) -> list[list]:
    F = red.F
    out = []
    if count <= 0:
        return out
    cur = red.rem([1])
    out.append(cur)
    g = red.rem(g)
    for _ in range(count - 1):
        cur = red.rem(_mul(cur, g, F))
        out.append(cur)
    return out


def powers_mod(g: UniPoly, count: int, f: UniPoly) -> list[UniPoly]:
    """``[g**0 rem f, ..., g**(count-1) rem f]`` by repeated multiply-and-reduce."""
    F = _same_field(g, f)
    return [UniPoly._raw(c, F) for c in _powers_mod(g.coeffs, count, _Reducer(f.coeffs, F))]


# ---------------------------------------------------------------------------
# subproduct tree, evaluation, interpolation
# ---------------------------------------------------------------------------


class _Node:
    __slots__ = ("poly", "left", "right", "lo", "hi", "_reducer")

    def __init__(self, poly, left, right, lo, hi):
        self.poly = poly
        self.left = left
        self.right = right
        self.lo = lo
        self.hi = hi
        self._reducer = None

    def reducer(self, F: PrimeField) -> _Reducer:
        if self._reducer is None:
            self._reducer = _Reducer(self.poly, F)
        return self._reducer


class SubproductTree:
    """Binary product tree over the nodes ``xs``; the root is prod (X - x_k).

    A node covering ``n`` points splits into ``ceil(n/2)`` and ``floor(n/2)``.
    """

    def __init__(self, xs, field: PrimeField):
        if len(xs) == 0:
            raise ValueError("subproduct tree needs at least one node")
        p = field.modulus
        self.field = field
        self.xs = [int(x) % p for x in xs]
        self._root = self._build(0, len(self.xs))

    def _build(self, lo: int, hi: int) -> _Node:
        if hi - lo == 1:
            return _Node([(-self.xs[lo]) % self.field.modulus, 1], None, None, lo, hi)
        mid = lo + (hi - lo + 1) // 2
        left = self._build(lo, mid)
        right = self._build(mid, hi)
        return _Node(_mul(left.poly, right.poly, self.field), left, right, lo, hi)

    @property
    def root(self) -> UniPoly:
        return UniPoly._raw(self._root.poly, self.field)

    @property
    def levels(self) -> list[list[UniPoly]]:
        """Node polynomials level by level, root first."""
        out, layer = [], [self._root]
        while layer:
            out.append([UniPoly._raw(nd.poly, self.field) for nd in layer])
            layer = [c for nd in layer for c in (nd.left, nd.right) if c is not None]
        return out

    def __len__(self):
        return len(self.xs)

    def _eval(self, r: list, node: _Node, out: list):
        F = self.field
        p = F.modulus
        if node.hi - node.lo <= config.current().horner_leaf_size:
            for k in range(node.lo, node.hi):
                out[k] = _horner(r, self.xs[k], p)
            return
        self._eval(node.left.reducer(F).rem(r), node.left, out)
        self._eval(node.right.reducer(F).rem(r), node.right, out)

    def evaluate(self, coeffs: list) -> list[int]:
        out = [0] * len(self.xs)
        r = self._root.reducer(self.field).rem(coeffs)
        self._eval(r, self._root, out)
        return out

    def _combine(self, node: _Node, c: list) -> list:
        if node.left is None:
            return [c[node.lo]] if c[node.lo] else []
        F = self.field
        a = _mul(self._combine(node.left, c), node.right.poly, F)
        b = _mul(self._combine(node.right, c), node.left.poly, F)
        return _add(a, b, F.modulus)

    def interpolate(self, ys) -> list:
        p = self.field.modulus
        root = self._root.poly
        deriv = _trim([i * c % p for i, c in enumerate(root)][1:])
        weights = self.evaluate(deriv)
        c = [int(y) % p * pow(w, -1, p) % p for y, w in zip(ys, weights)]
        return self._combine(self._root, c)


def build_subproduct_tree(xs, field: PrimeField) -> SubproductTree:
    return SubproductTree(xs, field)


def multipoint_eval(p: UniPoly, tree: SubproductTree) -> list[int]:
    """``[p(x) for x in tree.xs]`` by remaindering down the tree."""
    if p.field != tree.field:
        raise FieldMismatch("polynomial and tree over different fields")
    return tree.evaluate(p.coeffs)


def interpolate(xs, ys, field: PrimeField, tree: SubproductTree | None = None) -> UniPoly:
    """The unique polynomial of degree < len(xs) through ``(xs[k], ys[k])``."""
    p = field.modulus
    xs = [int(x) % p for x in xs]
    if len(xs) != len(ys):
        raise ValueError("xs and ys differ in length")
    if len(set(xs)) != len(xs):
        raise DuplicateNodes("interpolation nodes must be pairwise distinct")
    if not xs:
        return UniPoly.zero(field)
    if tree is None:
        tree = SubproductTree(xs, field)
    return UniPoly._raw(tree.interpolate(ys), field)


# ---------------------------------------------------------------------------
# Taylor shift
# ---------------------------------------------------------------------------


def _shift_naive(a: list, c: int, p: int) -> list:
    # Horner in the ring: ((a_n)(X+c) + a_{n-1})(X+c) + ...
    out: list = []
    for coef in reversed(a):
        nxt = [0] * (len(out) + 1)
        for i, v in enumerate(out):
            nxt[i + 1] = (nxt[i + 1] + v) % p
            nxt[i] = (nxt[i] + v * c) % p
        nxt[0] = (nxt[0] + coef) % p
        out = nxt
    return _trim(out)


def _taylor_shift(a: list, c: int, F: PrimeField) -> list:
    p = F.modulus
    c %= p
    if not c or len(a) <= 1:
        return list(a)
    cutoff = max(2, config.current().taylor_cutoff)
    if len(a) <= cutoff:
        return _shift_naive(a, c, p)
    # (X+c)^(2^i) for 2^i < len(a)
    pows = [[c, 1]]
    while (1 << len(pows)) < len(a):
        pows.append(_mul(pows[-1], pows[-1], F))

    def rec(seg: list) -> list:
        if len(seg) <= cutoff:
            return _shift_naive(seg, c, p)
        nu = (len(seg) - 1).bit_length() - 1
        lo, hi = seg[: 1 << nu], seg[1 << nu :]
        return _add(rec(_trim(list(lo))), _mul(pows[nu], rec(hi), F), p)

    return rec(a)


def taylor_shift(p: UniPoly, a) -> UniPoly:
    """``p(X + a)`` by divide and conquer over precomputed (X+a)^(2^i)."""
    if isinstance(a, FieldElement) and a.field != p.field:
        raise FieldMismatch("shift from a different field")
    return UniPoly._raw(_taylor_shift(p.coeffs, int(a), p.field), p.field)
