import random

import pytest

from oracles import oracle_cohomology
from perfcx.complexes import (
    Complex,
    GradedMap,
    cohomology_dims,
    compose,
    identity,
    is_chain_map,
    is_exact,
    scale,
    shift,
    zero_map,
)
from perfcx.derived import (
    ExtClass,
    Extension,
    _twisted,
    base_change,
    classify_extension,
    ext_dims,
    ext_equal,
    hom_complex,
    hom_rank,
    is_coboundary,
    pullback_comparison,
    pullback_extension,
    pushforward_comparison,
    pushforward_extension,
    splitting,
    tor_amplitude,
    truncate_ge,
    truncate_le,
)
from perfcx.errors import NotACocycle, NotExtension, UnsupportedRing
from perfcx.linalg import Matrix, evaluate
from perfcx.rings import QQ, DualNumbers, PolynomialRing, PrimeField, RationalFunctionField
from perfcx.testing import random_complex, random_hom, random_cocycle, random_qiso

A = DualNumbers(QQ)


def two_term(R, d):
    return Complex.build(R, {0: 1, 1: 1}, {0: [[d]]})


def basic_extension():
    """N = k in degree 1, E0 = k in degree 0, T = [k --1--> k] in degrees 0, 1."""
    N = Complex.free(QQ, 1, 1)
    E0 = Complex.free(QQ, 1, 0)
    T = two_term(QQ, 1)
    i = GradedMap.build(N, T, 0, {1: [[1]]})
    p = GradedMap.build(T, E0, 0, {0: [[1]]})
    return Extension(N, T, E0, i, p)


def test_hom_complex_examples():
    k = Complex.free(QQ, 1)
    H = hom_complex(k, k)
    assert {n: H.rank(n) for n in H.degrees if H.rank(n)} == {0: 1}
    P = two_term(QQ, 0)
    H = hom_complex(P, P)
    assert {n: H.rank(n) for n in H.degrees if H.rank(n)} == {-1: 1, 0: 2, 1: 1}
    assert all(d.is_zero() for d in H.diffs)


def test_hom_from_contractible_is_exact():
    rng = random.Random(1)
    P = two_term(QQ, 1)
    for _ in range(50):
        assert is_exact(hom_complex(P, random_complex(QQ, rng)))


def test_ext_examples():
    k = Complex.free(QQ, 1)
    assert ext_dims(k, k) == {0: 1}
    P = two_term(QQ, 0)
    assert {n: v for n, v in ext_dims(P, P).items() if v} == {-1: 1, 0: 2, 1: 1}
    rng = random.Random(2)
    for _ in range(10):
        Q = random_complex(QQ, rng)
        assert not any(ext_dims(two_term(QQ, 1), Q).values())


def test_classify_examples():
    t = basic_extension()
    cls = classify_extension(t)
    assert cls.cocycle.component(0) == Matrix.from_rows(QQ, [[1]])
    assert not cls.is_zero()
    assert {n: v for n, v in ext_dims(t.quotient, t.sub).items() if v} == {1: 1}
    split = _twisted(t.sub, t.quotient, zero_map(t.quotient, t.sub, 1))
    assert classify_extension(split).is_zero()


def test_pushforward_examples():
    t = basic_extension()
    base = classify_extension(t)
    N = t.sub
    for c in (1, 0, 2):
        f = scale(c, identity(N))
        pushed = pushforward_extension(t, f)
        cls = classify_extension(pushed)
        assert ext_equal(cls, ExtClass.of(scale(c, base.cocycle)))
        comp = pushforward_comparison(t, f, pushed)
        assert is_chain_map(comp)
        assert compose(comp, t.inclusion) == compose(pushed.inclusion, f)
        assert compose(pushed.projection, comp) == t.projection


def test_pullback_examples():
    t = basic_extension()
    base = classify_extension(t)
    for c in (1, 0, 3):
        lam = scale(c, identity(t.quotient))
        pulled = pullback_extension(t, lam)
        assert ext_equal(classify_extension(pulled), ExtClass.of(scale(c, base.cocycle)))
        comp = pullback_comparison(t, lam, pulled)
        assert is_chain_map(comp)
        assert compose(t.projection, comp) == compose(lam, pulled.projection)


def test_extension_validation():
    t = basic_extension()
    with pytest.raises(NotExtension):
        Extension(t.sub, t.total, t.quotient, zero_map(t.sub, t.total), t.projection)


def test_ext_class_requires_cocycle():
    P = two_term(QQ, 1)
    with pytest.raises(NotACocycle):
        ExtClass.of(GradedMap.build(P, P, 0, {0: [[1]]}))


def test_truncation_examples():
    c = Complex.build(QQ, {-1: 1, 0: 1})
    t = truncate_ge(c, 0)
    assert cohomology_dims(t) == {0: 1}
    rng = random.Random(3)
    for _ in range(30):
        c = random_complex(QQ, rng)
        assert truncate_le(c, c.hi) == c
        for n in range(c.lo - 1, c.hi + 2):
            h = oracle_cohomology(c)
            le, ge = cohomology_dims(truncate_le(c, n)), cohomology_dims(truncate_ge(c, n))
            for m in range(c.lo, c.hi + 1):
                assert le.get(m, 0) == (h[m] if m <= n else 0)
                assert ge.get(m, 0) == (h[m] if m >= n else 0)
    z = Complex.build(QQ, {0: 1, 1: 2, 2: 1})
    assert truncate_le(z, 1) == Complex.build(QQ, {0: 1, 1: 2}, lo=0, hi=1)


def test_tor_amplitude_examples():
    assert tor_amplitude(Complex.free(QQ, 1)) == (0, 0)
    E = Complex.build(A, {-1: 1, 0: 1}, {-1: [["eps"]]})
    assert tor_amplitude(E) == (-1, 0)
    assert tor_amplitude(Complex.build(A, {-1: 1, 0: 1}, {-1: [["1"]]})) is None
    with pytest.raises(UnsupportedRing):
        tor_amplitude(Complex.free(PolynomialRing(QQ, ("t",)), 1))


def test_tor_amplitude_shift():
    rng = random.Random(4)
    for _ in range(40):
        c = random_complex(QQ, rng)
        amp = tor_amplitude(c)
        for k in (-2, 1, 3):
            s = tor_amplitude(shift(c, k))
            assert s == (None if amp is None else (amp[0] - k, amp[1] - k))


def test_splitting_independence():
    rng = random.Random(5)
    for _ in range(30):
        N, E0 = random_complex(QQ, rng, 3, 3), random_complex(QQ, rng, 3, 3)
        t = _twisted(N, E0, random_cocycle(E0, N, 1, rng))
        s = splitting(t)
        g = random_hom(E0, N, 0, rng)
        s2 = s + compose(t.inclusion, g)
        a, b = classify_extension(t), classify_extension(t, s2)
        assert is_coboundary(a.cocycle - b.cocycle)


def test_hom_euler_characteristic():
    rng = random.Random(6)
    for _ in range(40):
        P, Q = random_complex(QQ, rng), random_complex(QQ, rng)
        lhs = sum((-1) ** n * v for n, v in ext_dims(P, Q).items())
        rhs = sum((-1) ** (j - i) * P.rank(i) * Q.rank(j) for i in P.degrees for j in Q.degrees)
        assert lhs == rhs


def test_base_change_examples():
    rng = random.Random(7)
    K = RationalFunctionField(QQ, ("u",))
    Rt = PolynomialRing(QQ, ("t",))
    for _ in range(15):
        P, Q = random_complex(QQ, rng, 3, 3), random_complex(QQ, rng, 3, 3)
        assert base_change(P, QQ) == P
        assert ext_dims(P, Q) == ext_dims(base_change(P, K), base_change(Q, K))
        Pt = base_change(P, Rt)
        back = Complex(QQ, Pt.lo, Pt.ranks, tuple(evaluate(d, {"t": 0}) for d in Pt.diffs))
        assert back == P


@pytest.mark.parametrize("p", [2, 5])
def test_shift_and_postcomposition_small(p):
    F = PrimeField(p)
    rng = random.Random(8)
    for _ in range(15):
        P, Q = random_complex(F, rng, 3, 3), random_complex(F, rng, 3, 3)
        e, e1 = ext_dims(P, Q), ext_dims(P, shift(Q, 1))
        for n in set(e) | set(e1):
            assert e1.get(n, 0) == e.get(n + 1, 0)
        f, M2 = random_qiso(Q, rng)
        a, b = ext_dims(P, Q), ext_dims(P, M2)
        assert {n: v for n, v in a.items() if v} == {n: v for n, v in b.items() if v}
        assert hom_rank(P, Q, 0) >= 0
