import random

import pytest

from oracles import oracle_rank
from perfcx.errors import MissingVariable, NonFieldRing, ShapeMismatch
from perfcx.linalg import Matrix, evaluate, inverse, kernel_basis, rank, rref, solve
from perfcx.rings import QQ, DualNumbers, PolynomialRing, PrimeField, RationalFunctionField
from perfcx.testing import FIELD_KINDS, field_of_kind, random_matrix

QU = RationalFunctionField(QQ, ("u",))
GF7 = PrimeField(7)


def M(ring, rows, cols=None):
    return Matrix.from_rows(ring, rows, cols=cols)


def test_rank_examples():
    assert rank(Matrix.identity(QQ, 2)) == 2
    assert rank(M(QQ, [[1, 2], [2, 4]])) == 1
    assert rank(M(QU, [["u", "1"], ["u^2", "u"]])) == 1


def test_kernel_examples():
    assert kernel_basis(Matrix.zeros(GF7, 2, 2)) == [(1, 0), (0, 1)]
    assert kernel_basis(Matrix.identity(QQ, 3)) == []
    assert kernel_basis(M(QQ, [[1, 1]])) == [(-1, 1)]


def test_solve_examples():
    b = (QQ.parse("3"), QQ.parse("-1/2"))
    assert solve(Matrix.identity(QQ, 2), b) == b
    assert solve(M(QQ, [[1, 1]]), (QQ.parse("2"),)) == (2, 0)
    assert solve(M(QQ, [[0]]), (QQ.one,)) is None


def test_evaluate_examples():
    R = PolynomialRing(QQ, ("t0", "t1"))
    assert evaluate(M(R, [["t0"]]), {"t0": 1, "t1": 0}).entries == ((1,),)
    assert evaluate(M(R, [["t0^2", "t0*t1"]]), {"t0": 2, "t1": 3}).entries == ((4, 6),)
    with pytest.raises(MissingVariable):
        evaluate(M(R, [["t0"]]), {"t0": 1})


def test_non_field_rings_rejected():
    A = DualNumbers(QQ)
    with pytest.raises(NonFieldRing):
        rank(Matrix.identity(A, 2))
    with pytest.raises(NonFieldRing):
        kernel_basis(Matrix.identity(PolynomialRing(QQ, ("t",)), 1))


def test_shape_checks():
    with pytest.raises(ShapeMismatch):
        Matrix.identity(QQ, 2) @ Matrix.identity(QQ, 3)
    with pytest.raises(ShapeMismatch):
        solve(Matrix.identity(QQ, 2), (QQ.one,))


def test_rref_is_canonical():
    m = M(QQ, [[2, 4, 6], [1, 1, 1]])
    r, piv = rref(m)
    assert piv == [0, 1]
    assert r.entries == ((1, 0, -1), (0, 1, 2))
    r2, _ = rref(M(QQ, [[1, 1, 1], [0, 2, 4]]))
    assert r2 == r


def test_inverse_roundtrip():
    m = M(QU, [["1", "u"], ["0", "1"]])
    assert inverse(m) == M(QU, [["1", "-u"], ["0", "1"]])
    with pytest.raises(ZeroDivisionError):
        inverse(M(QQ, [[1, 2], [2, 4]]))


def _corpus(kind, n, seed):
    R = field_of_kind(kind)
    rng = random.Random(seed)
    for _ in range(n):
        r, c = rng.randint(0, 5), rng.randint(0, 5)
        yield R, random_matrix(R, r, c, rng, bound=3, density=rng.choice((0.3, 0.6, 1.0))), rng


@pytest.mark.parametrize("kind", FIELD_KINDS)
def test_rank_transpose_and_oracle(kind):
    n = 60 if kind == "QQ(u)" else 200
    for R, m, _ in _corpus(kind, n, 11):
        r = rank(m)
        assert r == rank(m.T)
        assert r == oracle_rank(m)


@pytest.mark.parametrize("kind", FIELD_KINDS)
def test_rank_nullity_and_kernel(kind):
    for R, m, _ in _corpus(kind, 80, 12):
        ker = kernel_basis(m)
        assert m.cols == rank(m) + len(ker)
        for v in ker:
            assert all(R.is_zero(x) for x in m.apply(v))


@pytest.mark.parametrize("kind", FIELD_KINDS)
def test_solve_contract(kind):
    for R, m, rng in _corpus(kind, 80, 13):
        if rng.random() < 0.5:
            x0 = tuple(R.from_int(rng.randint(-3, 3)) for _ in range(m.cols))
            b = m.apply(x0)
        else:
            b = tuple(R.from_int(rng.randint(-3, 3)) for _ in range(m.rows))
        x = solve(m, b)
        if x is None:
            aug = Matrix.block(R, [[m, Matrix.from_columns(R, [b], m.rows)]])
            assert rank(aug) > rank(m)
        else:
            assert m.apply(x) == tuple(b)


def test_evaluate_is_multiplicative():
    R = PolynomialRing(QQ, ("t0", "t1"))
    rng = random.Random(5)
    for _ in range(100):
        a, b, c = rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3)
        m1, m2 = random_matrix(R, a, b, rng, 2), random_matrix(R, b, c, rng, 2)
        pt = {"t0": rng.randint(-4, 4), "t1": rng.randint(-4, 4)}
        assert evaluate(m1 @ m2, pt) == evaluate(m1, pt) @ evaluate(m2, pt)
