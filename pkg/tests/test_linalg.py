import random
from fractions import Fraction

import pytest

from koszulfh.errors import MalformedInputError
from koszulfh.field import GF, QQ, Field, ModP, is_prime
from koszulfh.linalg import Echelon, SparseMatrix, dense_rank, kernel_basis, rank, solve

import oracles


def random_dense(rng, nr, nc, density=0.4, lo=-3, hi=3):
    return [[rng.randint(lo, hi) if rng.random() < density else 0 for _ in range(nc)]
            for _ in range(nr)]


def test_rationals_in_lowest_terms():
    x = QQ("-6/4")
    assert x == Fraction(-3, 2) and x.denominator == 2


def test_prime_residues_and_modulus_check():
    F = GF(7)
    assert F(-1).value == 6
    assert F(Fraction(1, 3)) * 3 == F.one
    with pytest.raises(MalformedInputError):
        Field(4)
    assert is_prime(32003) and not is_prime(1) and not is_prime(32001)


def test_field_parse():
    assert Field.parse("q") == QQ
    assert Field.parse("fp:5") == GF(5)
    with pytest.raises(MalformedInputError):
        Field.parse("fp:9")
    with pytest.raises(MalformedInputError):
        Field.parse("reals")


def test_no_stored_zeros_or_duplicates():
    m = SparseMatrix(2, 2, [(0, 0, 0), (1, 1, 2)])
    assert m.nnz == 1
    with pytest.raises(MalformedInputError):
        SparseMatrix(2, 2, [(0, 0, 1), (0, 0, 2)])
    with pytest.raises(MalformedInputError):
        SparseMatrix(2, 2, [(2, 0, 1)])


def test_mixed_fields_rejected():
    with pytest.raises(MalformedInputError):
        SparseMatrix(1, 1, [(0, 0, ModP(1, 5))], QQ)
    with pytest.raises(MalformedInputError):
        SparseMatrix(1, 1, [(0, 0, 1)], QQ) @ SparseMatrix(1, 1, [(0, 0, 1)], GF(5))


def test_rank_examples():
    assert rank(SparseMatrix.identity(3)) == 3
    assert rank(SparseMatrix.from_dense([[1, 2], [2, 4]])) == 1
    assert rank(SparseMatrix.zero(0, 4)) == 0


@pytest.mark.parametrize("p", [None, 32003, 3])
def test_rank_against_dense_oracle(p):
    rng = random.Random(11 if p is None else p)
    F = QQ if p is None else GF(p)
    for _ in range(25):
        rows = random_dense(rng, 12, 15)
        assert rank(SparseMatrix.from_dense(rows, F)) == oracles.rank(rows, p)
        assert dense_rank(rows, F) == oracles.rank(rows, p)


def test_kernel_examples():
    k = kernel_basis(SparseMatrix.zero(2, 2))
    assert k.shape == (2, 2) and rank(k) == 2
    k = kernel_basis(SparseMatrix.from_dense([[1, 1]]))
    assert k.shape == (2, 1)
    v = k.column(0)
    assert v[0] == -v[1] != 0


@pytest.mark.parametrize("p", [None, 32003])
def test_kernel_random(p):
    rng = random.Random(3)
    F = QQ if p is None else GF(p)
    for _ in range(20):
        m = SparseMatrix.from_dense(random_dense(rng, 10, 10, 0.3), F)
        k = kernel_basis(m)
        assert (m @ k).is_zero()
        assert k.ncols == m.ncols - rank(m)
        assert rank(k) == k.ncols


def test_solve_examples():
    assert solve(SparseMatrix.identity(2), [1, 2]) == [1, 2]
    m = SparseMatrix.from_dense([[1, 1]])
    x = solve(m, [0])
    assert x[0] + x[1] == 0
    assert solve(SparseMatrix.from_dense([[1], [1]]), [0, 1]) is None
    with pytest.raises(MalformedInputError):
        solve(SparseMatrix.identity(2), [1])


def test_solve_random_resubstitution():
    rng = random.Random(8)
    for _ in range(20):
        rows = random_dense(rng, 6, 8)
        m = SparseMatrix.from_dense(rows)
        x0 = [rng.randint(-3, 3) for _ in range(8)]
        b = [sum(r[j] * x0[j] for j in range(8)) for r in rows]
        x = solve(m, b)
        assert [sum(r[j] * x[j] for j in range(8)) for r in rows] == b


def test_echelon_span():
    e = Echelon(QQ)
    assert e.add({0: 1, 1: 1})
    assert e.add({1: 1})
    assert not e.add({0: 2, 1: 5})
    assert len(e) == 2


def test_large_sparse_rank_is_fast():
    rng = random.Random(0)
    n = 400
    entries = {}
    for i in range(n):
        entries[(i, i)] = 1
        for _ in range(2):
            entries[(i, rng.randrange(n))] = rng.randint(1, 5)
    m = SparseMatrix(n, n, entries, GF(32003))
    assert rank(m) == oracles.rank([[int(x) for x in r] for r in m.to_dense()], 32003)
