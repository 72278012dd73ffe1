"""Slow, obviously-correct reference implementations used as test oracles.

Nothing here touches the package's arithmetic kernels.
"""


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        for j, d in enumerate(b):
            out[i + j] = (out[i + j] + c * d) % p
    return trim(out)


def add(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return trim([(u + v) % p for u, v in zip(a, b)])


def divrem(a, d, p):
    a, d = trim(a), trim(d)
    if not d:
        raise ZeroDivisionError
    r = list(a)
    q = [0] * max(0, len(a) - len(d) + 1)
    lead_inv = pow(d[-1], -1, p)
    for k in range(len(a) - len(d), -1, -1):
        c = r[k + len(d) - 1] * lead_inv % p
        q[k] = c
        if c:
            for i, e in enumerate(d):
                r[k + i] = (r[k + i] - c * e) % p
    return trim(q), trim(r[: len(d) - 1])


def horner(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def eval2(coeffs, x, y, p):
    """sum c_ij x^i y^j by direct powers."""
    total = 0
    for i, row in enumerate(coeffs):
        for j, c in enumerate(row):
            total += c * pow(x, i, p) * pow(y, j, p)
    return total % p


def compose_mod(coeffs, g, f, p):
    """p(X, g(X)) rem f by full expansion, Horner in Y."""
    m = len(coeffs[0])
    acc = []
    for j in reversed(range(m)):
        col = trim([row[j] for row in coeffs])
        acc = add(mul(acc, g, p), col, p)
    return divrem(acc, f, p)[1]


def matmul(A, B, p):
    k = len(B)
    return [[sum(A[i][t] * B[t][j] for t in range(k)) % p for j in range(len(B[0]))]
            for i in range(len(A))]
