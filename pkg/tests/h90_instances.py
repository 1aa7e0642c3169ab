"""Instances for the descent tests: disguised quasi-isomorphisms and a negative family."""

from __future__ import annotations

import random

from perfcx.complexes import Complex, GradedMap, compose, hom_differential, is_chain_map
from perfcx.derived import base_change, base_change_map
from perfcx.linalg import Matrix
from perfcx.rings import PolynomialRing, Ring
from perfcx.testing import complex_from_pieces, random_complex, random_hom, random_qiso


def elementary_automorphism(C: Complex, R: PolynomialRing, rng: random.Random) -> GradedMap:
    """``1 + c u^e E_ij`` in one degree where that is a chain map over ``R`` (else the identity)."""
    u = R.variable(R.vars[0])
    Cu = base_change(C, R)
    ident = tuple(Matrix.identity(R, r) for r in C.ranks)
    for _ in range(10):
        n = rng.choice(list(C.degrees))
        r = C.rank(n)
        if r < 2:
            continue
        i, j = rng.sample(range(r), 2)
        e = [[R.zero] * r for _ in range(r)]
        e[i][j] = R.mul(R.from_int(rng.choice((1, -1, 2))), R.pow(u, rng.randint(1, 2)))
        comps = list(ident)
        comps[n - C.lo] = ident[n - C.lo] + Matrix(R, r, r, tuple(tuple(x) for x in e))
        g = GradedMap(Cu, Cu, 0, tuple(comps))
        if is_chain_map(g):
            return g
    return GradedMap(Cu, Cu, 0, ident)


def disguised_qiso(k: Ring, rng: random.Random, var: str = "u"):
    """``(P, Q, f)`` with ``f = a o phi o b + d(H)`` over ``k[u]`` for a qiso ``phi`` over ``k``.

    ``a`` and ``b`` are polynomial-entry automorphisms and ``H`` is a random
    polynomial homotopy, so ``f`` has several monomial coefficients, which
    need not be quasi-isomorphisms individually.
    """
    R = PolynomialRing(k, (var,))
    P = random_complex(k, rng, max_rank=4, max_window=3)
    while not any(P.ranks):
        P = random_complex(k, rng, max_rank=4, max_window=3)
    phi, Q = random_qiso(P, rng)
    b = elementary_automorphism(P, R, rng)
    a = elementary_automorphism(Q, R, rng)
    f = compose(a, compose(base_change_map(phi, R), b))
    H = random_hom(f.source, f.target, -1, rng, bound=2)
    return P, Q, f + hom_differential(H)


def negative_instance(k: Ring, rng: random.Random, var: str = "u"):
    """A map over ``k[u]`` no k-linear combination of whose coefficients is a qiso.

    Every coefficient kills the cohomology of a fixed summand, so no
    specialization can be injective on cohomology.
    """
    R = PolynomialRing(k, (var,))
    h = rng.randint(1, 2)
    P = complex_from_pieces(k, 0, [h + 1], [0])
    u = R.variable(var)
    Pu = base_change(P, R)
    r = P.rank(0)
    entries = [[R.zero] * r for _ in range(r)]
    for i in range(r - 1):
        entries[i][i] = R.add(R.one, R.mul(R.from_int(rng.randint(1, 3)), u))
    # last basis vector is sent to zero by every coefficient
    f = GradedMap(Pu, Pu, 0, (Matrix(R, r, r, tuple(tuple(x) for x in entries)),))
    return P, P, f
