import dataclasses
import random

import pytest

from oracles import oracle_is_qiso
from perfcx.complexes import Complex, GradedMap, identity, is_qiso, scale, zero_map
from perfcx.derived import base_change, base_change_map
from perfcx.errors import (
    EmptyFamily,
    FieldTooSmall,
    MissingVariable,
    NoPointFound,
    NotBaseChanged,
    NotChainMap,
    NotQisoInput,
)
from perfcx.hilbert90 import (
    coefficient_decomposition,
    descend,
    find_trivializing_point,
    generic_cone_is_exact,
    generic_morphism,
    reassemble,
    specialize,
    verify_form_triviality,
)
from perfcx.linalg import Matrix
from perfcx.rings import QQ, PolynomialRing, PrimeField
from perfcx.testing import random_complex, random_qiso
from h90_instances import disguised_qiso, negative_instance

RU = PolynomialRing(QQ, ("u",))


def test_decomposition_examples():
    P = Complex.free(QQ, 2)
    Pu = base_change(P, RU)
    f = GradedMap.build(Pu, Pu, 0, {0: [["1", "u"], ["0", "1"]]})
    dec = coefficient_decomposition(f)
    assert [m for m, _ in dec] == [(0,), (1,)]
    assert dec[0][1] == identity(P)
    assert dec[1][1].component(0) == Matrix.from_rows(QQ, [[0, 1], [0, 0]])
    assert reassemble(RU, dec, Pu, Pu) == f
    const = base_change_map(identity(P), RU)
    assert [m for m, _ in coefficient_decomposition(const)] == [(0,)]
    T = Complex.build(QQ, {0: 1, 1: 1}, {0: [[1]]})
    Tu = base_change(T, RU)
    g = base_change_map(identity(T), RU)
    g = GradedMap(Tu, Tu, 0, tuple(m.scale(RU.variable("u")) for m in g.components))
    dec = coefficient_decomposition(g)
    assert [(m, x) for m, x in dec] == [((1,), identity(T))]


def test_decomposition_errors():
    R = PolynomialRing(QQ, ("u",))
    C = Complex.build(R, {0: 1, 1: 1}, {0: [["u"]]})
    with pytest.raises(NotBaseChanged):
        coefficient_decomposition(identity(C))
    T = base_change(Complex.build(QQ, {0: 1, 1: 1}, {0: [[1]]}), R)
    with pytest.raises(NotChainMap):
        coefficient_decomposition(GradedMap.build(T, T, 0, {0: [["u"]]}))


def test_generic_morphism_examples():
    P = Complex.free(QQ, 2)
    g = generic_morphism(P, P, [identity(P)])
    assert g.generic.component(0) == Matrix.from_rows(g.ring, [["t1", "0"], ["0", "t1"]])
    E12 = GradedMap.build(P, P, 0, {0: [[0, 1], [0, 0]]})
    g = generic_morphism(P, P, [identity(P), E12])
    assert g.generic.component(0) == Matrix.from_rows(g.ring, [["t1", "t2"], ["0", "t1"]])
    z = generic_morphism(P, P, [zero_map(P, P), zero_map(P, P)])
    assert z.generic.is_zero()
    with pytest.raises(EmptyFamily):
        generic_morphism(P, P, [])


def test_specialize_examples():
    P = Complex.free(QQ, 2)
    E12 = GradedMap.build(P, P, 0, {0: [[0, 1], [0, 0]]})
    g = generic_morphism(P, P, [identity(P), E12])
    assert specialize(g, (0, 0)).is_zero()
    assert specialize(g, {"t1": 1, "t2": 0}) == identity(P)
    with pytest.raises(MissingVariable):
        specialize(g, {"t1": 1})
    h = generic_morphism(P, P, [E12])
    assert specialize(h, (3,)) == scale(3, E12)


def test_find_point_examples():
    P = Complex.free(QQ, 2)
    rep = find_trivializing_point(generic_morphism(P, P, [identity(P)]), seed=1, sample_bound=2, max_trials=20)
    assert rep.point[0][1] != 0
    E12 = GradedMap.build(P, P, 0, {0: [[0, 1], [0, 0]]})
    g = generic_morphism(P, P, [identity(P), E12])
    for seed in range(20):
        rep = find_trivializing_point(g, seed, 5, 50)
        # accepted iff t1 != 0
        assert rep.point_mapping["t1"] != 0
        assert is_qiso(rep.specialized_map)
    N = Complex.free(QQ, 1)
    with pytest.raises(NoPointFound):
        find_trivializing_point(generic_morphism(N, N, [zero_map(N, N)]), 0, 100, 10)
    nil = GradedMap.build(P, P, 0, {0: [[0, 1], [0, 0]]})
    with pytest.raises(NoPointFound):
        find_trivializing_point(generic_morphism(P, P, [nil]), 0, 100, 10)
    with pytest.raises(FieldTooSmall):
        F = PrimeField(3)
        C = Complex.free(F, 1)
        find_trivializing_point(generic_morphism(C, C, [identity(C)]), 0, 4, 5)


def test_descend_examples():
    P = Complex.free(QQ, 2)
    Pu = base_change(P, RU)
    f = GradedMap.build(Pu, Pu, 0, {0: [["1", "u"], ["0", "1"]]})
    rep = descend(P, P, f, seed=0)
    assert is_qiso(rep.specialized_map) and verify_form_triviality(P, P, rep)
    rng = random.Random(1)
    C = random_complex(QQ, rng)
    q, C2 = random_qiso(C, rng)
    rep = descend(C, C2, base_change_map(q, RU), seed=3)
    assert len(rep.generic.coefficient_maps) == 1
    assert rep.specialized_map == scale(rep.point[0][1], q)


def test_verify_form_triviality_rejects_tampering():
    P = Complex.free(QQ, 2)
    Pu = base_change(P, RU)
    f = GradedMap.build(Pu, Pu, 0, {0: [["1", "u"], ["0", "1"]]})
    rep = descend(P, P, f, seed=0)
    bad = dataclasses.replace(rep, point=(("t1", QQ.zero), ("t2", QQ.one)))
    assert not verify_form_triviality(P, P, bad)
    forged = dataclasses.replace(rep, specialized_map=zero_map(P, P))
    assert not verify_form_triviality(P, P, forged)
    rep_id = descend(P, P, base_change_map(identity(P), RU), seed=0)
    assert verify_form_triviality(P, P, rep_id)


def test_certify_and_assert_flags():
    inst = negative_instance(QQ, random.Random(2))
    P, Q, f = inst
    with pytest.raises(NoPointFound):
        descend(P, Q, f, seed=0, max_trials=5, certify_generic=True)
    with pytest.raises(NotQisoInput):
        descend(P, Q, f, seed=0, max_trials=5, assert_qiso=True)


def test_soundness_against_oracle():
    rng = random.Random(3)
    for i in range(20):
        P, Q, f = disguised_qiso(QQ, rng)
        rep = descend(P, Q, f, seed=i)
        assert oracle_is_qiso(rep.specialized_map)


def test_schwartz_zippel_probe():
    P = Complex.free(QQ, 2)
    E12 = GradedMap.build(P, P, 0, {0: [[0, 1], [0, 0]]})
    g = generic_morphism(P, P, [identity(P), E12])
    quick = sum(find_trivializing_point(g, s, 100, 50).trials <= 2 for s in range(100))
    assert quick >= 95


def _gf_family(F):
    P = Complex.free(F, 3)
    e1 = GradedMap.build(P, P, 0, {0: [[1, 0, 0], [0, 0, 0], [0, 0, 1]]})
    e2 = GradedMap.build(P, P, 0, {0: [[0, 0, 0], [0, 1, 0], [0, 0, 1]]})
    return generic_morphism(P, P, [e1, e2])


def test_small_residue_field_regression():
    """diag(t1, t2, t1 + t2): the good locus is nonempty but has no GF(2)-points."""
    g2 = _gf_family(PrimeField(2))
    assert generic_cone_is_exact(g2)
    with pytest.raises(NoPointFound):
        find_trivializing_point(g2, 0, 2, 200)
    rep = find_trivializing_point(_gf_family(PrimeField(3)), 0, 3, 200)
    assert is_qiso(rep.specialized_map)
    rep = find_trivializing_point(_gf_family(QQ), 0, 100, 20)
    assert is_qiso(rep.specialized_map)


def test_determinism():
    rng = random.Random(4)
    P, Q, f = disguised_qiso(QQ, rng)
    a = descend(P, Q, f, seed=11)
    b = descend(P, Q, f, seed=11)
    assert a == b
