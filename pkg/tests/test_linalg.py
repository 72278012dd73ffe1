import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from bivareval.errors import ChunkDegreeOverflow, DimensionMismatch, FieldMismatch
from bivareval.field import NTT_PRIME_62, field_new
from bivareval.linalg import (
    FieldMatrix,
    MatMulStrategy,
    PolyMatrix,
    mat_mul,
    mat_times_longvec,
    polymat_mul,
)
from bivareval.unipoly import UniPoly

NAIVE = MatMulStrategy.naive()


def rand_fm(rng, r, c, F):
    return FieldMatrix(r, c, [rng.randrange(F.p) for _ in range(r * c)], F)


def rand_pm(rng, r, c, deg_bound, F):
    entries = [UniPoly([rng.randrange(F.p) for _ in range(rng.randint(0, deg_bound))], F)
               for _ in range(r * c)]
    return PolyMatrix(r, c, entries, F, deg_bound)


def direct_polymat(a: PolyMatrix, b: PolyMatrix):
    F = a.field
    out = []
    for i in range(a.rows):
        for k in range(b.cols):
            acc = UniPoly([], F)
            for j in range(a.cols):
                acc = acc + a[i, j] * b[j, k]
            out.append(acc)
    return out


def test_strategy_descriptors():
    assert MatMulStrategy.naive().exponent_estimate == 3.0
    assert abs(MatMulStrategy.strassen().exponent_estimate - 2.807354922) < 1e-9
    with pytest.raises(ValueError):
        MatMulStrategy.strassen(1)
    with pytest.raises(ValueError):
        MatMulStrategy("winograd")
    auto = MatMulStrategy.auto()
    assert not auto.use_strassen(63, 100, 100, 64)
    assert auto.use_strassen(64, 64, 64, 64)


def test_mat_mul_examples():
    F = field_new(7)
    M = FieldMatrix.from_rows([[3, 1], [4, 6]], F)
    assert mat_mul(FieldMatrix.identity(2, F), M) == M
    A = FieldMatrix.from_rows([[1, 2], [3, 4]], F)
    B = FieldMatrix.from_rows([[5, 6], [0, 1]], F)
    assert mat_mul(A, B).to_rows() == [[5, 1], [1, 1]]
    assert (A @ B).to_rows() == [[5, 1], [1, 1]]


def test_mat_mul_errors():
    F = field_new(7)
    with pytest.raises(DimensionMismatch):
        mat_mul(FieldMatrix(2, 3, [0] * 6, F), FieldMatrix(2, 3, [0] * 6, F))
    with pytest.raises(FieldMismatch):
        mat_mul(FieldMatrix(1, 1, [1], F), FieldMatrix(1, 1, [1], field_new(11)))
    with pytest.raises(DimensionMismatch):
        FieldMatrix(2, 2, [1, 2, 3], F)


@pytest.mark.parametrize("p", [7, 65537, NTT_PRIME_62])
def test_strassen_64_square(p):
    F = field_new(p)
    rng = random.Random(p)
    A, B = rand_fm(rng, 64, 64, F), rand_fm(rng, 64, 64, F)
    want = oracles.matmul(A.to_rows(), B.to_rows(), p)
    assert mat_mul(A, B, NAIVE).to_rows() == want
    assert mat_mul(A, B, MatMulStrategy.strassen(2)).to_rows() == want
    assert mat_mul(A, B, MatMulStrategy.strassen(16)).to_rows() == want


@settings(max_examples=30)
@given(st.integers(1, 65), st.integers(1, 65), st.integers(1, 65), st.integers(2, 9), st.integers(0, 2**32))
def test_strassen_rectangular_odd_shapes(r, k, c, cutoff, seed):
    F = field_new(65537)
    rng = random.Random(seed)
    A, B = rand_fm(rng, r, k, F), rand_fm(rng, k, c, F)
    assert mat_mul(A, B, MatMulStrategy.strassen(cutoff)) == mat_mul(A, B, NAIVE)


def test_associativity_8x8():
    F = field_new(101)
    rng = random.Random(2)
    A, B, C = (rand_fm(rng, 8, 8, F) for _ in range(3))
    s = MatMulStrategy.strassen(2)
    assert mat_mul(mat_mul(A, B, s), C, s) == mat_mul(A, mat_mul(B, C, s), s)


def test_polymat_examples():
    F = field_new(7)
    a = PolyMatrix.from_rows([[UniPoly([1, 1], F)]], F)
    b = PolyMatrix.from_rows([[UniPoly([-1, 1], F)]], F)
    c = polymat_mul(a, b)
    assert c[0, 0].coeffs == [6, 0, 1] and c.degree_bound == 3
    rng = random.Random(0)
    A = rand_pm(rng, 3, 3, 4, F)
    AI = polymat_mul(A, PolyMatrix.identity(3, F))
    assert AI.entries == A.entries


@pytest.mark.parametrize("p", [7, 65537, 1000003, NTT_PRIME_62])
def test_polymat_strassen_vs_direct(p):
    F = field_new(p)
    rng = random.Random(p)
    for r, k, c in [(4, 4, 4), (8, 8, 8), (3, 5, 2), (8, 1, 8), (7, 9, 6)]:
        A, B = rand_pm(rng, r, k, 16, F), rand_pm(rng, k, c, 16, F)
        want = direct_polymat(A, B)
        for strategy in (NAIVE, MatMulStrategy.strassen(2), MatMulStrategy.auto()):
            assert polymat_mul(A, B, strategy).entries == want


def test_longvec_examples():
    F = field_new(7)
    A = PolyMatrix.from_rows([[UniPoly([2], F)]], F, 1)
    assert [v.coeffs for v in mat_times_longvec(A, [UniPoly([1, 0, 1], F)], 3)] == [[2, 0, 2]]
    b = [UniPoly([1, 2, 3, 4, 5], F), UniPoly([6, 0, 1], F)]
    assert mat_times_longvec(PolyMatrix.identity(2, F), b, 5) == b


def test_longvec_rejects_long_entries():
    F = field_new(7)
    A = PolyMatrix.identity(1, F)
    with pytest.raises(ChunkDegreeOverflow):
        mat_times_longvec(A, [UniPoly([1, 1, 1, 1], F)], 3)
    with pytest.raises(DimensionMismatch):
        mat_times_longvec(PolyMatrix.identity(2, F), [UniPoly([1], F)], 3)


@pytest.mark.parametrize("p", [7, 65537, 1000003, NTT_PRIME_62])
@pytest.mark.parametrize("m,n,c", [(3, 4, 9), (1, 1, 1), (5, 3, 2), (8, 8, 8), (2, 16, 1)])
def test_longvec_matches_dot_product(p, m, n, c):
    F = field_new(p)
    rng = random.Random(p + m * 100 + n * 10 + c)
    A = rand_pm(rng, m, m, n, F)
    b = [UniPoly([rng.randrange(p) for _ in range(rng.randint(0, n * c))], F) for _ in range(m)]
    out = mat_times_longvec(A, b, c, MatMulStrategy.strassen(2))
    for i in range(m):
        want = UniPoly([], F)
        for j in range(m):
            want = want + A[i, j] * b[j]
        assert out[i] == want


def test_chunk_products_stay_below_twice_n():
    # each block of A·(chunk matrix) has degree < 2n, so only neighbours overlap
    F = field_new(65537)
    rng = random.Random(5)
    n, m, c = 6, 3, 4
    A = rand_pm(rng, m, m, n, F)
    chunks = PolyMatrix(m, c, [UniPoly([rng.randrange(F.p) for _ in range(n)], F) for _ in range(m * c)], F, n)
    C = polymat_mul(A, chunks)
    assert all(e.degree < 2 * n for e in C.entries)
