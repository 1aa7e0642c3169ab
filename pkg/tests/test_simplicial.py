import random

import pytest

from oracles import oracle_cohomology
from perfcx.complexes import (
    Complex,
    GradedMap,
    compose,
    hom_differential,
    homotopy_check,
    identity,
    is_qiso,
    scale,
    zero_map,
)
from perfcx.derived import ExtClass, ext_equal
from perfcx.errors import NonFieldRing, NotQiso, ShapeMismatch
from perfcx.linalg import Matrix
from perfcx.rings import QQ, DualNumbers
from perfcx.simplicial import (
    AutWitness,
    check_witness,
    dk_build,
    dk_pi,
    dk_pi_unnormalized,
    fill_inner_horn,
    quasi_automorphism_inverse,
    simplicial_identity_failure,
    surjections,
    verify_g1_edge,
    verify_g2_edge,
    verify_g2_vertex,
)
from perfcx.testing import (
    field_of_kind,
    random_complex,
    random_hom,
    random_invertible,
    random_quasi_automorphism,
    random_non_cocycle,
)


def two_term(R, d):
    return Complex.build(R, {0: 1, 1: 1}, {0: [[d]]})


def test_surjection_counts():
    assert [len(surjections(n, 1)) for n in range(4)] == [0, 1, 2, 3]
    assert [len(surjections(n, 0)) for n in range(4)] == [1, 1, 1, 1]
    assert len(surjections(3, 2)) == 3


def test_dk_build_examples():
    assert dk_build(Complex.free(QQ, 1, 0)).level_ranks == (1, 1, 1, 1)
    assert dk_build(Complex.free(QQ, 1, -1)).level_ranks == (0, 1, 2, 3)
    assert dk_build(Complex.zero(QQ)).level_ranks == (0, 0, 0, 0)
    with pytest.raises(NonFieldRing):
        dk_build(Complex.free(DualNumbers(QQ), 1))


def test_constant_simplicial_object():
    dk = dk_build(Complex.free(QQ, 1, 0))
    one = Matrix.identity(QQ, 1)
    for n in range(1, 4):
        assert all(dk.face(n, i) == one for i in range(n + 1))


def test_dk_pi_examples():
    assert dk_pi(Complex.free(QQ, 1, 0), 0) == 1
    c = Complex.free(QQ, 1, -2)
    assert [dk_pi(c, k) for k in range(3)] == [0, 0, 1]
    acyclic = Complex.build(QQ, {-2: 1, -1: 1}, {-2: [[1]]})
    assert [dk_pi(acyclic, k) for k in range(3)] == [0, 0, 0]


@pytest.mark.parametrize("kind", ("QQ", "GF5"))
def test_dold_kan_matches_cohomology(kind):
    R = field_of_kind(kind)
    rng = random.Random(31)
    for _ in range(40):
        c = random_complex(R, rng, max_rank=3, max_window=4, lo_range=(-3, 0))
        dk = dk_build(c)
        assert simplicial_identity_failure(dk) is None
        h = oracle_cohomology(c)
        for k in range(3):
            assert dk_pi(c, k) == h.get(-k, 0) == dk_pi_unnormalized(c, k)


def test_g1_edge_examples():
    E = two_term(QQ, 1)
    I = identity(E)
    assert verify_g1_edge(AutWitness("G1_EDGE", E, {"phi": I, "psi": I, "H": zero_map(E, E, -1)}))
    H = GradedMap.build(E, E, -1, {1: [[1]]})
    assert not hom_differential(H).is_zero()
    assert not verify_g1_edge(AutWitness("G1_EDGE", E, {"phi": I, "psi": I, "H": H}))
    Z = two_term(QQ, 0)
    Iz = identity(Z)
    Hz = GradedMap.build(Z, Z, -1, {1: [[5]]})
    assert verify_g1_edge(AutWitness("G1_EDGE", Z, {"phi": Iz, "psi": Iz, "H": Hz}))


def test_g2_vertex_examples():
    E = Complex.build(QQ, {0: 2, 1: 1}, {0: [[1, 0]]})
    rng = random.Random(3)
    a, b = random_quasi_automorphism(E, rng), random_quasi_automorphism(E, rng)
    zero = zero_map(E, E, -1)
    comps = {"phi01": a, "phi12": b, "phi02": compose(b, a), "alpha": zero}
    assert verify_g2_vertex(AutWitness("G2_VERTEX", E, comps))
    I = identity(E)
    assert verify_g2_vertex(AutWitness("G2_VERTEX", E, {"phi01": I, "phi12": I, "phi02": I, "alpha": zero}))
    # perturb phi02 by a cocycle with nonzero class: the zero map on the cohomology summand
    proj = GradedMap.build(E, E, 0, {0: [[0, 0], [0, 1]]})
    assert not ExtClass.of(proj).is_zero()
    bad = dict(comps, phi02=compose(b, a) + proj)
    assert not verify_g2_vertex(AutWitness("G2_VERTEX", E, bad))


def _edge(E, phis, psis, alpha, beta, Hs, Theta):
    comps = {f"phi{ij}": f for ij, f in zip(("01", "12", "02"), phis)}
    comps.update({f"psi{ij}": f for ij, f in zip(("01", "12", "02"), psis)})
    comps.update({f"H{ij}": f for ij, f in zip(("01", "12", "02"), Hs)})
    comps.update({"alpha": alpha, "beta": beta, "Theta": Theta})
    return AutWitness("G2_EDGE", E, comps)


def test_g2_edge_examples():
    E = Complex.build(QQ, {-1: 1, 0: 1, 1: 1}, {-1: [[1]]})
    I = identity(E)
    z1, z2 = zero_map(E, E, -1), zero_map(E, E, -2)
    w = _edge(E, (I, I, I), (I, I, I), z1, z1, (z1, z1, z1), z2)
    assert verify_g2_edge(w)
    Theta = GradedMap.build(E, E, -2, {1: [[1]]})
    assert not hom_differential(Theta).is_zero()
    assert not verify_g2_edge(_edge(E, (I, I, I), (I, I, I), z1, z1, (z1, z1, z1), Theta))
    rng = random.Random(4)
    a, b = random_quasi_automorphism(E, rng), random_quasi_automorphism(E, rng)
    alpha = random_hom(E, E, -1, rng)
    c = compose(b, a) + hom_differential(alpha)
    assert verify_g2_edge(_edge(E, (a, b, c), (a, b, c), alpha, alpha, (z1, z1, z1), z2))


def test_witness_shape_errors():
    E = two_term(QQ, 1)
    with pytest.raises(ShapeMismatch):
        check_witness(AutWitness("G1_EDGE", E, {"phi": identity(E)}))
    with pytest.raises(ShapeMismatch):
        check_witness(AutWitness("G1_EDGE", E, {"phi": identity(E), "psi": identity(E),
                                                 "H": zero_map(E, E, 0)}))


def test_fill_inner_horn_examples():
    E = Complex.build(QQ, {0: 2, 1: 2}, {0: [[1, 0], [0, 0]]})
    I = identity(E)
    w = fill_inner_horn(I, I)
    assert w.components["phi02"] == I and w.components["alpha"].is_zero()
    assert verify_g2_vertex(w)
    k2 = Complex.free(QQ, 2)
    rng = random.Random(5)
    g, _ = random_invertible(QQ, 2, rng)
    h, _ = random_invertible(QQ, 2, rng)
    fg, fh = GradedMap.build(k2, k2, 0, {0: g}), GradedMap.build(k2, k2, 0, {0: h})
    assert fill_inner_horn(fg, fh).components["phi02"].component(0) == h @ g
    with pytest.raises(NotQiso):
        fill_inner_horn(zero_map(k2, k2), fh)


def test_horn_with_homotopy_inverse_pair():
    rng = random.Random(6)
    for _ in range(10):
        E = random_complex(QQ, rng, 3, 3)
        phi = random_quasi_automorphism(E, rng)
        psi, H, H2 = quasi_automorphism_inverse(phi)
        assert verify_g2_vertex(fill_inner_horn(phi, psi))


def test_quasi_automorphism_inverse_examples():
    E = Complex.free(QQ, 1)
    psi, H, H2 = quasi_automorphism_inverse(identity(E))
    assert psi == identity(E) and H.is_zero() and H2.is_zero()
    psi, _, _ = quasi_automorphism_inverse(scale(2, identity(E)))
    assert psi.component(0) == Matrix.from_rows(QQ, [["1/2"]])
    k2 = Complex.free(QQ, 2)
    psi, _, _ = quasi_automorphism_inverse(GradedMap.build(k2, k2, 0, {0: [[1, 1], [0, 1]]}))
    assert psi.component(0) == Matrix.from_rows(QQ, [[1, -1], [0, 1]])
    with pytest.raises(NotQiso):
        quasi_automorphism_inverse(zero_map(k2, k2))


@pytest.mark.parametrize("kind", ("QQ", "GF5"))
def test_quasi_automorphism_inverse_property(kind):
    R = field_of_kind(kind)
    rng = random.Random(7)
    for _ in range(25):
        E = random_complex(R, rng, 3, 3)
        phi = random_quasi_automorphism(E, rng)
        psi, H, H2 = quasi_automorphism_inverse(phi)
        I = identity(E)
        assert homotopy_check(H, compose(phi, psi), I)
        assert homotopy_check(H2, compose(psi, phi), I)
        assert is_qiso(psi)


def test_g1_edges_give_equal_classes():
    rng = random.Random(8)
    for _ in range(25):
        E = random_complex(QQ, rng, 3, 3)
        phi = random_quasi_automorphism(E, rng)
        H = random_hom(E, E, -1, rng)
        psi = phi + hom_differential(H)
        assert verify_g1_edge(AutWitness("G1_EDGE", E, {"phi": phi, "psi": psi, "H": H}))
        assert ext_equal(ExtClass.of(phi), ExtClass.of(psi))
        y = random_non_cocycle(E, -1, rng)
        if y is not None:
            assert not verify_g1_edge(AutWitness("G1_EDGE", E, {"phi": phi, "psi": psi, "H": H + y}))
