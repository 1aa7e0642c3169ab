"""Truncated Dold-Kan construction and the coherence data of Aut(E).

``dk_build`` applies Dold-Kan to ``truncate_le(c, 0)`` up to simplicial level
3.  Level ``n`` is the direct sum over surjections ``sigma: [n] -> [k]`` of
``C_k = c^(-k)``.  For ``theta: [m] -> [n]`` factor ``sigma theta = delta o
sigma'`` (epi then mono); the summand map is the identity when ``delta`` is the
identity, the differential when ``delta`` skips 0, and zero otherwise.  The
normalized complex is then ``N_n = ker d_1 n ... n ker d_n`` with boundary
``d_0``.

Witness checks return a :class:`WitnessFailure` naming the first broken
equation, or ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Mapping

from .complexes import (
    Complex,
    GradedMap,
    compose,
    hom_differential,
    identity,
    is_chain_map,
    is_qiso,
)
from .derived import (
    hom_differential_matrix,
    map_to_vector,
    primitive,
    truncate_le,
    vector_to_map,
)
from .errors import InternalError, NonFieldRing, NotQiso, ShapeMismatch
from .linalg import Matrix, kernel_basis, rank, solve

LEVELS = 3

Surjection = tuple[int, ...]


@lru_cache(maxsize=None)
def surjections(n: int, k: int) -> tuple[Surjection, ...]:
    """Monotone surjections ``[n] -> [k]`` as value tuples, in lexicographic order."""
    out = []
    for jumps in combinations(range(1, n + 1), k):
        vals, v, js = [], 0, set(jumps)
        for i in range(n + 1):
            if i in js:
                v += 1
            vals.append(v)
        out.append(tuple(vals))
    return tuple(sorted(out))


def coface(i: int, n: int) -> tuple[int, ...]:
    """``delta^i: [n-1] -> [n]`` skipping ``i``."""
    return tuple(j if j < i else j + 1 for j in range(n))


def codegeneracy(j: int, n: int) -> tuple[int, ...]:
    """``sigma^j: [n+1] -> [n]`` hitting ``j`` twice."""
    return tuple(i if i <= j else i - 1 for i in range(n + 2))


@dataclass(frozen=True)
class DKTruncation:
    base: Complex            # truncate_le(c, 0)
    offsets: tuple           # per level: {(k, sigma): offset}
    level_ranks: tuple[int, ...]
    faces: tuple             # faces[n][i]: level n -> level n-1 (n >= 1)
    degeneracies: tuple      # degeneracies[n][j]: level n -> level n+1 (n < LEVELS)

    def face(self, n: int, i: int) -> Matrix:
        return self.faces[n][i]

    def degeneracy(self, n: int, j: int) -> Matrix:
        return self.degeneracies[n][j]


def _chain(c: Complex, k: int) -> int:
    return c.rank(-k)


def _boundary(c: Complex, k: int) -> Matrix:
    """``C_k -> C_(k-1)`` i.e. ``d^(-k)``."""
    return c.d(-k)


def _level_layout(c: Complex, n: int) -> tuple[dict, int]:
    offsets, pos = {}, 0
    for k in range(n + 1):
        r = _chain(c, k)
        for sigma in surjections(n, k):
            offsets[(k, sigma)] = pos
            pos += r
    return offsets, pos


def _operator(c: Complex, theta: tuple[int, ...], m: int, n: int, layouts) -> Matrix:
    """Matrix of ``theta^*: level n -> level m`` for ``theta: [m] -> [n]``."""
    R = c.ring
    src, rows_src = layouts[n]
    tgt, rows_tgt = layouts[m]
    M = [[R.zero] * rows_src for _ in range(rows_tgt)]
    for (k, sigma), off in src.items():
        r = _chain(c, k)
        if not r:
            continue
        comp = tuple(sigma[t] for t in theta)
        image = sorted(set(comp))
        j = len(image) - 1
        sigma2 = tuple(image.index(x) for x in comp)
        if j == k:
            block = Matrix.identity(R, r)
        elif j == k - 1 and image == list(range(1, k + 1)):
            block = _boundary(c, k)
        else:
            continue
        toff = tgt[(j, sigma2)]
        for a in range(block.rows):
            row = block.entries[a]
            for b in range(block.cols):
                if not R.is_zero(row[b]):
                    M[toff + a][off + b] = row[b]
    return Matrix(R, rows_tgt, rows_src, tuple(tuple(r) for r in M))


def dk_build(c: Complex) -> DKTruncation:
    if not c.ring.is_field:
        raise NonFieldRing(f"Dold-Kan truncation over {c.ring} is not supported")
    base = truncate_le(c, 0)
    layouts = [_level_layout(base, n) for n in range(LEVELS + 1)]
    faces = [()]
    for n in range(1, LEVELS + 1):
        faces.append(tuple(_operator(base, coface(i, n), n - 1, n, layouts) for i in range(n + 1)))
    degens = []
    for n in range(LEVELS):
        degens.append(tuple(_operator(base, codegeneracy(j, n), n + 1, n, layouts) for j in range(n + 1)))
    dk = DKTruncation(base, tuple(l[0] for l in layouts), tuple(l[1] for l in layouts),
                      tuple(faces), tuple(degens))
    failure = simplicial_identity_failure(dk)
    if failure is not None:
        raise InternalError(f"simplicial identity {failure} fails")
    return dk


def simplicial_identity_failure(dk: DKTruncation) -> str | None:
    """First violated simplicial identity (as text), checked for levels <= 3."""
    d, s = dk.face, dk.degeneracy
    L = LEVELS
    R = dk.base.ring
    for n in range(2, L + 1):
        for j in range(n + 1):
            for i in range(j):
                if d(n - 1, i) @ d(n, j) != d(n - 1, j - 1) @ d(n, i):
                    return f"d{i} d{j} = d{j - 1} d{i} at level {n}"
    for n in range(L):
        ident = Matrix.identity(R, dk.level_ranks[n])
        for j in range(n + 1):
            if d(n + 1, j) @ s(n, j) != ident or d(n + 1, j + 1) @ s(n, j) != ident:
                return f"d{j} s{j} = d{j + 1} s{j} = id at level {n}"
            for i in range(n + 2):
                if i < j:
                    if d(n + 1, i) @ s(n, j) != s(n - 1, j - 1) @ d(n, i):
                        return f"d{i} s{j} = s{j - 1} d{i} at level {n}"
                elif i > j + 1:
                    if d(n + 1, i) @ s(n, j) != s(n - 1, j) @ d(n, i - 1):
                        return f"d{i} s{j} = s{j} d{i - 1} at level {n}"
    for n in range(L - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                if s(n + 1, i) @ s(n, j) != s(n + 1, j + 1) @ s(n, i):
                    return f"s{i} s{j} = s{j + 1} s{i} at level {n}"
    return None


def normalized_basis(dk: DKTruncation, n: int) -> Matrix:
    """Columns spanning ``N_n = ker d_1 n ... n ker d_n``."""
    R = dk.base.ring
    size = dk.level_ranks[n]
    if n == 0:
        return Matrix.identity(R, size)
    stacked = Matrix.block(R, [[dk.face(n, i)] for i in range(1, n + 1)])
    return Matrix.from_columns(R, kernel_basis(stacked), size)


def dk_pi(c: Complex, k: int) -> int:
    """``dim pi_k`` as the homology of the normalized complex of :func:`dk_build`."""
    if k not in (0, 1, 2):
        raise ValueError("pi_k is available for k in {0, 1, 2} at truncation level 3")
    dk = dk_build(c)
    Nk = normalized_basis(dk, k)
    cycles = Nk.cols - (rank(dk.face(k, 0) @ Nk) if k else 0)
    Nk1 = normalized_basis(dk, k + 1)
    return cycles - rank(dk.face(k + 1, 0) @ Nk1)


def dk_pi_unnormalized(c: Complex, k: int) -> int:
    """Same homotopy group from the full alternating-face complex."""
    dk = dk_build(c)

    def boundary(n):
        m = dk.face(n, 0)
        for i in range(1, n + 1):
            f = dk.face(n, i)
            m = m + f if i % 2 == 0 else m - f
        return m

    inner = rank(boundary(k)) if k else 0
    return dk.level_ranks[k] - inner - rank(boundary(k + 1))


# ---------------------------------------------------------------------------
# Aut(E) witnesses


@dataclass(frozen=True)
class WitnessFailure:
    equation: str
    degree: int | None = None


@dataclass(frozen=True)
class AutWitness:
    """``kind`` is one of G1_VERTEX, G1_EDGE, G2_VERTEX, G2_EDGE.

    Component names: ``phi`` (G1_VERTEX); ``phi, psi, H`` (G1_EDGE);
    ``phi01, phi12, phi02, alpha`` (G2_VERTEX); additionally ``psi01, psi12,
    psi02, beta, H01, H02, H12, Theta`` (G2_EDGE).
    """

    kind: str
    complex: Complex
    components: Mapping[str, GradedMap] = field(default_factory=dict)

    def __getitem__(self, name: str) -> GradedMap:
        return self.components[name]


WITNESS_COMPONENTS = {
    "G1_VERTEX": {"phi": 0},
    "G1_EDGE": {"phi": 0, "psi": 0, "H": -1},
    "G2_VERTEX": {"phi01": 0, "phi12": 0, "phi02": 0, "alpha": -1},
    "G2_EDGE": {"phi01": 0, "phi12": 0, "phi02": 0, "alpha": -1,
                "psi01": 0, "psi12": 0, "psi02": 0, "beta": -1,
                "H01": -1, "H02": -1, "H12": -1, "Theta": -2},
}


def _check_shapes(E: Complex, maps: Mapping[str, GradedMap], expected: Mapping[str, int]) -> None:
    for name, deg in expected.items():
        if name not in maps:
            raise ShapeMismatch(f"missing component {name}")
        f = maps[name]
        if f.source != E or f.target != E or f.degree != deg:
            raise ShapeMismatch(f"component {name} must be a degree {deg} map E -> E")


def _first_mismatch(lhs: GradedMap, rhs: GradedMap) -> int | None:
    for n in lhs.source.degrees:
        if lhs.component(n) != rhs.component(n):
            return n
    return None


def _qiso_failure(name: str, f: GradedMap) -> WitnessFailure | None:
    if not is_chain_map(f):
        n = next(n for n in f.source.degrees if not hom_differential(f).component(n).is_zero())
        return WitnessFailure(f"{name} is a chain map", n)
    if not is_qiso(f):
        return WitnessFailure(f"{name} is a quasi-isomorphism")
    return None


def _homotopy_failure(label: str, h: GradedMap, phi: GradedMap, psi: GradedMap) -> WitnessFailure | None:
    n = _first_mismatch(hom_differential(h), psi - phi)
    return None if n is None else WitnessFailure(label, n)


def check_g1_vertex(E: Complex, phi: GradedMap) -> WitnessFailure | None:
    _check_shapes(E, {"phi": phi}, WITNESS_COMPONENTS["G1_VERTEX"])
    return _qiso_failure("phi", phi)


def check_g1_edge(E: Complex, phi: GradedMap, psi: GradedMap, H: GradedMap) -> WitnessFailure | None:
    _check_shapes(E, {"phi": phi, "psi": psi, "H": H}, WITNESS_COMPONENTS["G1_EDGE"])
    return (_qiso_failure("phi", phi) or _qiso_failure("psi", psi)
            or _homotopy_failure("d(H) = psi - phi", H, phi, psi))


def check_g2_vertex(E: Complex, phi01: GradedMap, phi12: GradedMap, phi02: GradedMap,
                    alpha: GradedMap) -> WitnessFailure | None:
    maps = {"phi01": phi01, "phi12": phi12, "phi02": phi02, "alpha": alpha}
    _check_shapes(E, maps, WITNESS_COMPONENTS["G2_VERTEX"])
    for name in ("phi01", "phi12", "phi02"):
        fail = _qiso_failure(name, maps[name])
        if fail:
            return fail
    return _homotopy_failure("d(alpha) = phi02 - phi12 phi01", alpha, compose(phi12, phi01), phi02)


def check_g2_edge(E: Complex, m: Mapping[str, GradedMap]) -> WitnessFailure | None:
    _check_shapes(E, m, WITNESS_COMPONENTS["G2_EDGE"])
    fail = check_g2_vertex(E, m["phi01"], m["phi12"], m["phi02"], m["alpha"])
    if fail:
        return fail
    fail = check_g2_vertex(E, m["psi01"], m["psi12"], m["psi02"], m["beta"])
    if fail:
        return WitnessFailure(fail.equation.replace("phi", "psi").replace("alpha", "beta"), fail.degree)
    for ij in ("01", "02", "12"):
        fail = _homotopy_failure(f"d(H{ij}) = psi{ij} - phi{ij}", m[f"H{ij}"], m[f"phi{ij}"], m[f"psi{ij}"])
        if fail:
            return fail
    rhs = (-m["H02"] + compose(m["H12"], m["phi01"]) + compose(m["psi12"], m["H01"])
           + m["beta"] - m["alpha"])
    n = _first_mismatch(hom_differential(m["Theta"]), rhs)
    if n is not None:
        return WitnessFailure("d(Theta) = -H02 + H12 phi01 + psi12 H01 + beta - alpha", n)
    return None


def check_witness(w: AutWitness) -> WitnessFailure | None:
    if w.kind not in WITNESS_COMPONENTS:
        raise ShapeMismatch(f"unknown witness kind {w.kind!r}")
    extra = set(w.components) - set(WITNESS_COMPONENTS[w.kind])
    if extra:
        raise ShapeMismatch(f"unexpected components {sorted(extra)}")
    m, E = w.components, w.complex
    if w.kind == "G1_VERTEX":
        return check_g1_vertex(E, m.get("phi"))
    if w.kind == "G1_EDGE":
        _check_shapes(E, m, WITNESS_COMPONENTS["G1_EDGE"])
        return check_g1_edge(E, m["phi"], m["psi"], m["H"])
    if w.kind == "G2_VERTEX":
        _check_shapes(E, m, WITNESS_COMPONENTS["G2_VERTEX"])
        return check_g2_vertex(E, m["phi01"], m["phi12"], m["phi02"], m["alpha"])
    return check_g2_edge(E, m)


def verify_g1_edge(w: AutWitness) -> bool:
    return w.kind == "G1_EDGE" and check_witness(w) is None


def verify_g2_vertex(w: AutWitness) -> bool:
    return w.kind == "G2_VERTEX" and check_witness(w) is None


def verify_g2_edge(w: AutWitness) -> bool:
    return w.kind == "G2_EDGE" and check_witness(w) is None


def fill_inner_horn(phi01: GradedMap, phi12: GradedMap) -> AutWitness:
    """Fill the inner 2-horn by strict composition with ``alpha = 0``."""
    E = phi01.source
    for f in (phi01, phi12):
        if f.source != E or f.target != E:
            raise ShapeMismatch("horn edges must be maps E -> E")
        if not (is_chain_map(f) and is_qiso(f)):
            raise NotQiso("horn edges must be quasi-isomorphisms")
    alpha = GradedMap.build(E, E, -1)
    return AutWitness("G2_VERTEX", E, {"phi01": phi01, "phi12": phi12,
                                       "phi02": compose(phi12, phi01), "alpha": alpha})


def quasi_automorphism_inverse(phi: GradedMap) -> tuple[GradedMap, GradedMap, GradedMap]:
    """``(psi, H, H')`` with ``d(H) = id - phi psi`` and ``d(H') = id - psi phi``.

    ``psi`` and ``H`` solve one linear system in ``Hom^0 + Hom^-1``:
    ``d(psi) = 0`` and ``phi psi + d(H) = id``.
    """
    E = phi.source
    R = E.ring
    if not R.is_field:
        raise NonFieldRing(f"{R} is not a field")
    if phi.target != E or not is_chain_map(phi) or not is_qiso(phi):
        raise NotQiso("phi must be a quasi-automorphism E -> E")
    d0 = hom_differential_matrix(E, E, 0)   # Hom^0 -> Hom^1
    dm1 = hom_differential_matrix(E, E, -1)  # Hom^-1 -> Hom^0
    n0, nm1 = d0.cols, dm1.cols
    # postcomposition by phi on Hom^0
    cols = []
    for j in range(n0):
        e = tuple(R.one if i == j else R.zero for i in range(n0))
        cols.append(map_to_vector(compose(phi, vector_to_map(E, E, 0, e))))
    post = Matrix.from_columns(R, cols, n0)
    top = Matrix.block(R, [[d0, Matrix.zeros(R, d0.rows, nm1)]])
    bottom = Matrix.block(R, [[post, dm1]])
    system = Matrix.block(R, [[top], [bottom]])
    rhs = (R.zero,) * d0.rows + map_to_vector(identity(E))
    x = solve(system, rhs)
    if x is None:
        raise InternalError("no homotopy inverse found for a quasi-isomorphism over a field")
    psi = vector_to_map(E, E, 0, x[:n0])
    H = vector_to_map(E, E, -1, x[n0:])
    H2 = primitive(identity(E) - compose(psi, phi))
    if H2 is None:
        raise InternalError("psi phi is not homotopic to the identity")
    return psi, H, H2
