"""Seeded generators of random complexes, maps and instances for property tests.

Every generator takes a ``random.Random`` so that corpora are reproducible.
Complexes are built from cohomology and contractible pieces ``k --1--> k`` and
then conjugated degreewise by random invertible matrices, so every
isomorphism type within the rank bound can occur.
"""

from __future__ import annotations

import random
from typing import Sequence

from .complexes import Complex, GradedMap, compose, hom_differential, is_qiso
from .derived import hom_differential_matrix, hom_rank, kernel_basis, vector_to_map
from .linalg import Matrix
from .rings import DualNumbers, PolynomialRing, PrimeField, RationalFunctionField, Rationals, Ring

FIELD_KINDS = ("QQ", "GF5", "QQ(u)")


def field_of_kind(kind: str) -> Ring:
    if kind == "QQ":
        return Rationals()
    if kind.startswith("GF"):
        return PrimeField(int(kind[2:]))
    if kind == "QQ(u)":
        return RationalFunctionField(Rationals(), ("u",))
    raise ValueError(kind)


def random_element(R: Ring, rng: random.Random, bound: int = 5):
    """Small random element; over rational functions a polynomial of degree <= 1 in each variable."""
    if isinstance(R, (RationalFunctionField, PolynomialRing)):
        x = R.from_base(R.base.from_int(rng.randrange(-bound, bound + 1)))
        for v in R.vars:
            c = rng.randrange(-bound, bound + 1)
            if c:
                x = R.add(x, R.mul(R.from_base(R.base.from_int(c)), R.variable(v)))
        return x
    if isinstance(R, DualNumbers):
        return R.lift(random_element(R.base, rng, bound), random_element(R.base, rng, bound))
    return R.from_int(rng.randrange(-bound, bound + 1))


def random_unit(R: Ring, rng: random.Random, bound: int = 5):
    while True:
        x = R.from_int(rng.randrange(1, bound + 1) * rng.choice((1, -1)))
        if not R.is_zero(x):
            return x


def random_matrix(R: Ring, rows: int, cols: int, rng: random.Random, bound: int = 5,
                  density: float = 1.0) -> Matrix:
    return Matrix(R, rows, cols, tuple(
        tuple(random_element(R, rng, bound) if rng.random() < density else R.zero for _ in range(cols))
        for _ in range(rows)))


def random_invertible(R: Ring, n: int, rng: random.Random, bound: int = 3) -> tuple[Matrix, Matrix]:
    """``(g, g^-1)`` as a product of unitriangular factors and a unit diagonal."""
    def unitriangular(lower: bool) -> Matrix:
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                if i == j:
                    row.append(R.one)
                elif (i > j) == lower:
                    row.append(random_element(R, rng, bound))
                else:
                    row.append(R.zero)
            rows.append(tuple(row))
        return Matrix(R, n, n, tuple(rows))

    def inverse_unitriangular(m: Matrix, lower: bool) -> Matrix:
        # forward substitution column by column
        cols = []
        for j in range(n):
            x = [R.zero] * n
            order = range(n) if lower else range(n - 1, -1, -1)
            for i in order:
                acc = R.one if i == j else R.zero
                others = range(i) if lower else range(i + 1, n)
                for k in others:
                    acc = R.sub(acc, R.mul(m.entries[i][k], x[k]))
                x[i] = acc
            cols.append(x)
        return Matrix.from_columns(R, cols, n)

    L, U = unitriangular(True), unitriangular(False)
    diag = [random_unit(R, rng) for _ in range(n)]
    D = Matrix(R, n, n, tuple(tuple(diag[i] if i == j else R.zero for j in range(n)) for i in range(n)))
    Dinv = Matrix(R, n, n, tuple(tuple(R.inv(diag[i]) if i == j else R.zero for j in range(n))
                                 for i in range(n)))
    g = L @ D @ U
    ginv = inverse_unitriangular(U, False) @ Dinv @ inverse_unitriangular(L, True)
    return g, ginv


def complex_from_pieces(R: Ring, lo: int, cohomology: Sequence[int], contractible: Sequence[int],
                        rng: random.Random | None = None, bound: int = 3) -> Complex:
    """Cohomology ``h_n`` plus ``a_n`` pieces ``k --1--> k`` in degrees ``n, n+1``.

    ``cohomology[i]`` and ``contractible[i]`` refer to degree ``lo + i``; with
    ``rng`` the result is conjugated by random invertible matrices.
    """
    L = len(cohomology)
    a = list(contractible) + [0] * (L - len(contractible))
    ranks, diffs = {}, {}
    # basis order in degree n: cohomology, targets of pieces from n-1, sources of pieces at n
    for i in range(L):
        prev = a[i - 1] if i > 0 else 0
        ranks[lo + i] = cohomology[i] + prev + a[i]
    for i in range(L - 1):
        n = lo + i
        rows, cols = ranks[n + 1], ranks[n]
        h_next = cohomology[i + 1]
        src0 = cohomology[i] + (a[i - 1] if i > 0 else 0)
        entries = [[R.zero] * cols for _ in range(rows)]
        for p in range(a[i]):
            entries[h_next + p][src0 + p] = R.one
        diffs[n] = Matrix(R, rows, cols, tuple(tuple(r) for r in entries))
    c = Complex.build(R, ranks, diffs, lo=lo, hi=lo + L - 1)
    if rng is None:
        return c
    return conjugate(c, rng, bound)[0]


def conjugate(c: Complex, rng: random.Random, bound: int = 3):
    """``(g c g^-1, g)`` with ``g`` a random degreewise invertible chain isomorphism ``c -> g c g^-1``."""
    R = c.ring
    gs = [random_invertible(R, r, rng, bound) for r in c.ranks]
    diffs = tuple(gs[i + 1][0] @ d @ gs[i][1] for i, d in enumerate(c.diffs))
    c2 = Complex(R, c.lo, c.ranks, diffs)
    g = GradedMap(c, c2, 0, tuple(x[0] for x in gs))
    return c2, g


def random_complex(R: Ring, rng: random.Random, max_rank: int = 4, max_window: int = 4,
                   lo_range: tuple[int, int] = (-2, 1), conjugated: bool = True) -> Complex:
    L = rng.randint(1, max_window)
    lo = rng.randint(*lo_range)
    while True:
        h = [rng.randint(0, 2) for _ in range(L)]
        a = [rng.randint(0, 2) for _ in range(L - 1)] + [0]
        ranks = [h[i] + a[i] + (a[i - 1] if i else 0) for i in range(L)]
        if max(ranks) <= max_rank:
            break
    return complex_from_pieces(R, lo, h, a, rng if conjugated else None)


def random_hom(P: Complex, Q: Complex, degree: int, rng: random.Random, bound: int = 3) -> GradedMap:
    R = P.ring
    comps = {n: random_matrix(R, Q.rank(n + degree), P.rank(n), rng, bound) for n in P.degrees}
    return GradedMap.build(P, Q, degree, comps)


def random_cocycle(P: Complex, Q: Complex, degree: int, rng: random.Random, bound: int = 3) -> GradedMap:
    """Random combination of a basis of ``Z^degree Hom(P, Q)``."""
    R = P.ring
    basis = kernel_basis(hom_differential_matrix(P, Q, degree))
    v = [R.zero] * hom_rank(P, Q, degree)
    for b in basis:
        c = R.from_int(rng.randrange(-bound, bound + 1))
        v = [R.add(x, R.mul(c, y)) for x, y in zip(v, b)]
    return vector_to_map(P, Q, degree, tuple(v))


def random_chain_map(P: Complex, Q: Complex, rng: random.Random, bound: int = 3) -> GradedMap:
    return random_cocycle(P, Q, 0, rng, bound)


def random_qiso(M: Complex, rng: random.Random, extra_pieces: int = 1) -> tuple[GradedMap, Complex]:
    """A quasi-isomorphism ``M -> M'`` with ``M'`` = (M + contractible) conjugated, plus a null-homotopic term."""
    R = M.ring
    L = len(M.ranks)
    a = [0] * L
    for _ in range(extra_pieces):
        if L > 1:
            a[rng.randrange(L - 1)] += 1
    C = complex_from_pieces(R, M.lo, [0] * L, a)
    lo, hi = M.lo, M.hi
    ranks = {n: M.rank(n) + C.rank(n) for n in range(lo, hi + 1)}
    diffs = {n: Matrix.block(R, [[M.d(n), Matrix.zeros(R, M.rank(n + 1), C.rank(n))],
                                 [Matrix.zeros(R, C.rank(n + 1), M.rank(n)), C.d(n)]]) for n in range(lo, hi)}
    S = Complex.build(R, ranks, diffs, lo=lo, hi=hi)
    inc = GradedMap.build(M, S, 0, {n: Matrix.block(R, [[Matrix.identity(R, M.rank(n))],
                                                        [Matrix.zeros(R, C.rank(n), M.rank(n))]])
                                    for n in M.degrees})
    M2, g = conjugate(S, rng)
    f = compose(g, inc)
    h = random_hom(M, M2, -1, rng)
    return f + hom_differential(h), M2


def random_quasi_automorphism(E: Complex, rng: random.Random, attempts: int = 20) -> GradedMap:
    """A random chain map ``E -> E`` that is a quasi-isomorphism (identity as a fallback)."""
    from .complexes import identity

    for _ in range(attempts):
        f = random_chain_map(E, E, rng)
        if is_qiso(f):
            return f
    return identity(E)


def random_square_zero(k: Ring, rng: random.Random, max_rank: int = 3, max_window: int = 3):
    """``(E, F, phi0)``: deformations over ``k[eps]`` and a chain map of reductions.

    ``d1`` is a random degree 1 cocycle of ``Hom(E0, E0)`` (this is exactly the
    condition for ``d0 + eps d1`` to square to zero).  Some instances use
    ``E = F``, ``phi0`` the identity, or coboundary ``d1`` so both outcomes of
    the lifting problem occur.
    """
    A = DualNumbers(k)
    E0 = random_complex(k, rng, max_rank, max_window)
    mode = rng.randrange(4)
    F0 = E0 if mode == 0 else random_complex(k, rng, max_rank, max_window)

    def deform(C: Complex, coboundary: bool) -> Complex:
        if coboundary:
            d1 = hom_differential(random_hom(C, C, 0, rng))
        else:
            d1 = random_cocycle(C, C, 1, rng)
        diffs = tuple(Matrix(A, d.rows, d.cols, tuple(
            tuple(A.lift(x, y) for x, y in zip(rx, ry)) for rx, ry in zip(d.entries, e.entries)))
            for d, e in zip(C.diffs, (d1.component(n) for n in C.degrees)))
        return Complex(A, C.lo, C.ranks, diffs)

    E = deform(E0, mode == 1)
    F = E if mode == 0 and rng.random() < 0.5 else deform(F0, mode == 1)
    if mode == 0 and rng.random() < 0.5:
        from .complexes import identity

        phi0 = identity(E0)
    else:
        phi0 = random_chain_map(E0, F0, rng)
    return E, F, phi0


def random_non_cocycle(E: Complex, degree: int, rng: random.Random, attempts: int = 50) -> GradedMap | None:
    """A degree ``degree`` map ``E -> E`` with nonzero Hom-differential, if one exists."""
    if hom_differential_matrix(E, E, degree).is_zero():
        return None
    for _ in range(attempts):
        y = random_hom(E, E, degree, rng)
        if not hom_differential(y).is_zero():
            return y
    return None


def witness_complex(k: Ring, rng: random.Random) -> Complex:
    """A complex on which every witness component admits a non-cocycle perturbation."""
    while True:
        E = random_complex(k, rng, max_rank=3, max_window=4, lo_range=(-2, 0))
        if all(not hom_differential_matrix(E, E, s).is_zero() for s in (-2, -1, 0)):
            return E


def random_witness(kind: str, E: Complex, rng: random.Random):
    """A valid witness of the given kind built from random data and the defining equations."""
    from .simplicial import AutWitness

    qa = lambda: random_quasi_automorphism(E, rng)  # noqa: E731
    hom = lambda s: random_hom(E, E, s, rng)  # noqa: E731
    d = hom_differential
    if kind == "G1_VERTEX":
        return AutWitness(kind, E, {"phi": qa()})
    if kind == "G1_EDGE":
        phi, H = qa(), hom(-1)
        return AutWitness(kind, E, {"phi": phi, "psi": phi + d(H), "H": H})
    phi01, phi12, alpha = qa(), qa(), hom(-1)
    phi02 = compose(phi12, phi01) + d(alpha)
    comps = {"phi01": phi01, "phi12": phi12, "phi02": phi02, "alpha": alpha}
    if kind == "G2_VERTEX":
        return AutWitness(kind, E, comps)
    H = {ij: hom(-1) for ij in ("01", "12", "02")}
    psi = {ij: comps[f"phi{ij}"] + d(H[ij]) for ij in H}
    Theta = hom(-2)
    beta = d(Theta) + H["02"] - compose(H["12"], phi01) - compose(psi["12"], H["01"]) + alpha
    comps.update({f"psi{ij}": psi[ij] for ij in psi})
    comps.update({f"H{ij}": H[ij] for ij in H})
    comps.update({"beta": beta, "Theta": Theta})
    return AutWitness("G2_EDGE", E, comps)


def mutate_witness(w, name: str, rng: random.Random):
    """The witness with one component perturbed by a non-cocycle of the same degree."""
    from .simplicial import AutWitness

    f = w.components[name]
    y = random_non_cocycle(w.complex, f.degree, rng)
    if y is None:
        return None
    comps = dict(w.components)
    comps[name] = f + y
    return AutWitness(w.kind, w.complex, comps)
