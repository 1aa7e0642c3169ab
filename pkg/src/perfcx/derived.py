"""Hom complexes, Ext, extension classes, truncations, Tor amplitude, base change."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .complexes import (
    Complex,
    GradedMap,
    ModulePresentation,
    check_chain_map,
    cohomology_dims,
    compose,
    hom_differential,
    is_chain_map,
    tensor,
)
from .errors import (
    NonFieldRing,
    NotAComplex,
    NotACocycle,
    NotExtension,
    RingMismatch,
    ShapeMismatch,
    UnsupportedEmbedding,
    UnsupportedRing,
)
from .linalg import Matrix, image_basis, kernel_basis, rank, solve, solve_matrix
from .rings import (
    BASE_FIELDS,
    DualNumbers,
    PolynomialRing,
    RationalFunctionField,
    Ring,
)

# ---------------------------------------------------------------------------
# Hom complex with the matrix-unit basis ordered by
# (source degree, source index, target index)


def hom_rank(P: Complex, Q: Complex, n: int) -> int:
    return sum(P.rank(i) * Q.rank(i + n) for i in P.degrees)


def _offsets(P: Complex, Q: Complex, n: int) -> dict[int, int]:
    out, pos = {}, 0
    for i in P.degrees:
        out[i] = pos
        pos += P.rank(i) * Q.rank(i + n)
    return out


def map_to_vector(f: GradedMap) -> tuple:
    """Coordinates of a degree ``s`` map in the basis of ``Hom^s``."""
    out = []
    for i in f.source.degrees:
        m = f.component(i)
        for s in range(m.cols):
            out.extend(m.entries[a][s] for a in range(m.rows))
    return tuple(out)


def vector_to_map(P: Complex, Q: Complex, n: int, v) -> GradedMap:
    if len(v) != hom_rank(P, Q, n):
        raise ShapeMismatch(f"vector of length {len(v)} for Hom^{n} of rank {hom_rank(P, Q, n)}")
    comps, pos = {}, 0
    for i in P.degrees:
        a, b = Q.rank(i + n), P.rank(i)
        block = v[pos:pos + a * b]
        pos += a * b
        comps[i] = Matrix(P.ring, a, b, tuple(tuple(block[s * a + r] for s in range(b)) for r in range(a)))
    return GradedMap.build(P, Q, n, comps)


def hom_differential_matrix(P: Complex, Q: Complex, n: int) -> Matrix:
    """Matrix of ``d: Hom^n(P, Q) -> Hom^(n+1)(P, Q)``."""
    R = P.ring
    src, tgt = _offsets(P, Q, n), _offsets(P, Q, n + 1)
    rows, cols = hom_rank(P, Q, n + 1), hom_rank(P, Q, n)
    M = [[R.zero] * cols for _ in range(rows)]
    odd = n % 2 == 1
    for i in P.degrees:
        q_n, q_n1 = Q.rank(i + n), Q.rank(i + n + 1)
        dq = Q.d(i + n).entries
        dp = P.d(i - 1).entries  # P^(i-1) -> P^i
        p_prev = P.rank(i - 1)
        for s in range(P.rank(i)):
            for a in range(q_n):
                col = src[i] + s * q_n + a
                # d_Q o E_{a,s} lands in component i
                for a2 in range(q_n1):
                    x = dq[a2][a]
                    if not R.is_zero(x):
                        M[tgt[i] + s * q_n1 + a2][col] = x
                # -(-1)^n E_{a,s} o d_P lands in component i-1
                if p_prev:
                    base = tgt[i - 1]
                    for s2 in range(p_prev):
                        x = dp[s][s2]
                        if not R.is_zero(x):
                            M[base + s2 * q_n + a][col] = x if odd else R.neg(x)
    return Matrix(R, rows, cols, tuple(tuple(r) for r in M))


def hom_complex(P: Complex, Q: Complex) -> Complex:
    if P.ring != Q.ring:
        raise RingMismatch(f"{P.ring} vs {Q.ring}")
    lo, hi = Q.lo - P.hi, Q.hi - P.lo
    ranks = {n: hom_rank(P, Q, n) for n in range(lo, hi + 1)}
    diffs = {n: hom_differential_matrix(P, Q, n) for n in range(lo, hi)}
    return Complex.build(P.ring, ranks, diffs, lo=lo, hi=hi)


def ext_dims(P: Complex, Q: Complex) -> dict[int, int]:
    """``dim H^n Hom(P, Q)`` over the Hom window."""
    return cohomology_dims(hom_complex(P, Q))


def primitive(f: GradedMap) -> GradedMap | None:
    """Some ``g`` of degree ``s - 1`` with ``d(g) = f`` (free variables zero), else ``None``."""
    P, Q, n = f.source, f.target, f.degree
    x = solve(hom_differential_matrix(P, Q, n - 1), map_to_vector(f))
    return None if x is None else vector_to_map(P, Q, n - 1, x)


def is_coboundary(f: GradedMap) -> bool:
    return primitive(f) is not None


@dataclass(frozen=True)
class ExtClass:
    """The class of a Hom-cocycle; equality of classes is :func:`ext_equal`."""

    source: Complex
    target: Complex
    degree: int
    cocycle: GradedMap

    def __post_init__(self):
        f = self.cocycle
        if f.source != self.source or f.target != self.target or f.degree != self.degree:
            raise ShapeMismatch("cocycle does not match the class data")
        if not hom_differential(f).is_zero():
            raise NotACocycle(f"degree {self.degree} map has nonzero Hom-differential")

    @classmethod
    def of(cls, cocycle: GradedMap) -> "ExtClass":
        return cls(cocycle.source, cocycle.target, cocycle.degree, cocycle)

    def is_zero(self) -> bool:
        return is_coboundary(self.cocycle)

    def __sub__(self, other: "ExtClass") -> "ExtClass":
        return ExtClass.of(self.cocycle - other.cocycle)

    def __add__(self, other: "ExtClass") -> "ExtClass":
        return ExtClass.of(self.cocycle + other.cocycle)


def ext_equal(a: ExtClass, b: ExtClass) -> bool:
    if (a.source, a.target, a.degree) != (b.source, b.target, b.degree):
        raise ShapeMismatch("classes live in different Ext groups")
    return is_coboundary(a.cocycle - b.cocycle)


# ---------------------------------------------------------------------------
# degreewise split extensions N -> T -> E0


@dataclass(frozen=True)
class Extension:
    sub: Complex
    total: Complex
    quotient: Complex
    inclusion: GradedMap
    projection: GradedMap

    def __post_init__(self):
        i, p = self.inclusion, self.projection
        if (i.source, i.target, p.source, p.target) != (self.sub, self.total, self.total, self.quotient):
            raise NotExtension("maps do not match N -> T -> E0")
        for m in (i, p):
            if not is_chain_map(m):
                raise NotExtension("inclusion and projection must be chain maps")
        T = self.total
        for n in range(min(T.lo, self.sub.lo, self.quotient.lo), max(T.hi, self.sub.hi, self.quotient.hi) + 1):
            a, b = self.sub.rank(n), self.quotient.rank(n)
            if T.rank(n) != a + b:
                raise NotExtension(f"ranks do not add up in degree {n}")
            if not (p.component(n) @ i.component(n)).is_zero():
                raise NotExtension(f"p o i != 0 in degree {n}")
            if rank(i.component(n)) != a or rank(p.component(n)) != b:
                raise NotExtension(f"sequence is not exact in degree {n}")


def splitting(t: Extension) -> GradedMap:
    """Degreewise section ``s`` of the projection (free variables zero)."""
    comps = {}
    for n in t.quotient.degrees:
        s = solve_matrix(t.projection.component(n), Matrix.identity(t.total.ring, t.quotient.rank(n)))
        if s is None:
            raise NotExtension(f"projection is not surjective in degree {n}")
        comps[n] = s
    return GradedMap.build(t.quotient, t.total, 0, comps)


def classify_extension(t: Extension, section: GradedMap | None = None) -> ExtClass:
    """Class in ``Ext^1(E0, N)`` of the splitting defect ``d s - s d``."""
    s = splitting(t) if section is None else section
    p = t.projection
    for n in t.quotient.degrees:
        if not (p.component(n) @ s.component(n) == Matrix.identity(s.ring, t.quotient.rank(n))):
            raise NotExtension(f"section is not a right inverse of p in degree {n}")
    defect = hom_differential(s)  # degree 1 map E0 -> T
    comps = {}
    for n in t.quotient.degrees:
        x = solve_matrix(t.inclusion.component(n + 1), defect.component(n))
        if x is None:
            raise NotExtension(f"splitting defect leaves N in degree {n + 1}")
        comps[n] = x
    return ExtClass.of(GradedMap.build(t.quotient, t.sub, 1, comps))


def _twisted(N: Complex, E0: Complex, twist: GradedMap) -> Extension:
    """``N + E0`` with differential ``[[d_N, twist], [0, d_E0]]``."""
    R = N.ring
    lo, hi = min(N.lo, E0.lo), max(N.hi, E0.hi)
    ranks = {n: N.rank(n) + E0.rank(n) for n in range(lo, hi + 1)}
    diffs = {
        n: Matrix.block(R, [
            [N.d(n), twist.component(n)],
            [Matrix.zeros(R, E0.rank(n + 1), N.rank(n)), E0.d(n)],
        ])
        for n in range(lo, hi)
    }
    T = Complex.build(R, ranks, diffs, lo=lo, hi=hi)
    inc = GradedMap.build(N, T, 0, {
        n: Matrix.block(R, [[Matrix.identity(R, N.rank(n))],
                            [Matrix.zeros(R, E0.rank(n), N.rank(n))]]) for n in N.degrees})
    proj = GradedMap.build(T, E0, 0, {
        n: Matrix.block(R, [[Matrix.zeros(R, E0.rank(n), N.rank(n)), Matrix.identity(R, E0.rank(n))]])
        for n in T.degrees})
    return Extension(N, T, E0, inc, proj)


def pushforward_extension(t: Extension, f: GradedMap) -> Extension:
    """``N -> f_* T -> E0`` for a chain map ``f: N' -> N`` out of the sub-object."""
    if f.source != t.sub:
        raise ShapeMismatch("f must start at the sub-object of the extension")
    check_chain_map(f)
    delta = classify_extension(t).cocycle
    return _twisted(f.target, t.quotient, compose(f, delta))


def pullback_extension(t: Extension, lam: GradedMap) -> Extension:
    """``N -> lam^* T -> E0'`` for a chain map ``lam: E0' -> E0`` into the quotient."""
    if lam.target != t.quotient:
        raise ShapeMismatch("lambda must land in the quotient of the extension")
    check_chain_map(lam)
    delta = classify_extension(t).cocycle
    return _twisted(t.sub, lam.source, compose(delta, lam))


def retraction(t: Extension, section: GradedMap | None = None) -> GradedMap:
    """``r: T -> N`` with ``i r + s p = id`` for the chosen section."""
    s = splitting(t) if section is None else section
    R = t.total.ring
    comps = {}
    for n in t.total.degrees:
        rest = Matrix.identity(R, t.total.rank(n)) - s.component(n) @ t.projection.component(n)
        comps[n] = solve_matrix(t.inclusion.component(n), rest)
    return GradedMap.build(t.total, t.sub, 0, comps)


def pushforward_comparison(t: Extension, f: GradedMap, pushed: Extension) -> GradedMap:
    """The map ``T -> f_* T``, ``x -> (f r x, p x)``, completing the push-out square."""
    r = retraction(t)
    R = t.total.ring
    return GradedMap.build(t.total, pushed.total, 0, {
        n: Matrix.block(R, [[(f.component(n) @ r.component(n))], [t.projection.component(n)]])
        for n in t.total.degrees
    })


def pullback_comparison(t: Extension, lam: GradedMap, pulled: Extension) -> GradedMap:
    """The map ``lam^* T -> T``, ``(n, e) -> i n + s lam e``."""
    s = splitting(t)
    R = t.total.ring
    return GradedMap.build(pulled.total, t.total, 0, {
        n: Matrix.block(R, [[t.inclusion.component(n), s.component(n) @ lam.component(n)]])
        for n in pulled.total.degrees
    })


# ---------------------------------------------------------------------------
# truncations and Tor amplitude


def _field_only(c: Complex) -> None:
    if not c.ring.is_field:
        raise NonFieldRing(f"truncation over {c.ring} is not supported")


def truncate_le(c: Complex, n: int) -> Complex:
    """Smart truncation: keep degrees below ``n``, replace ``c^n`` by ``ker d^n``."""
    _field_only(c)
    R = c.ring
    if n >= c.hi:
        return c
    if n < c.lo:
        return Complex.zero(R, c.lo)
    K = Matrix.from_columns(R, kernel_basis(c.d(n)), c.rank(n))
    ranks = {m: c.rank(m) for m in range(c.lo, n)}
    ranks[n] = K.cols
    diffs = {m: c.d(m) for m in range(c.lo, n - 1)}
    if n > c.lo:
        coords = solve_matrix(K, c.d(n - 1))
        if coords is None:
            raise NotAComplex(n - 1, "image of d is not inside the kernel")
        diffs[n - 1] = coords
    return Complex.build(R, ranks, diffs, lo=c.lo, hi=n)


def truncate_ge(c: Complex, n: int) -> Complex:
    """Smart truncation: keep degrees above ``n``, replace ``c^n`` by ``coker d^(n-1)``."""
    _field_only(c)
    R = c.ring
    if n <= c.lo:
        return c
    if n > c.hi:
        return Complex.zero(R, c.hi)
    img = image_basis(c.d(n - 1))
    pivots = {next(j for j, x in enumerate(v) if not R.is_zero(x)) for v in img}
    complement = [j for j in range(c.rank(n)) if j not in pivots]
    section = Matrix.from_columns(
        R, [tuple(R.one if i == j else R.zero for i in range(c.rank(n))) for j in complement], c.rank(n))
    ranks = {m: c.rank(m) for m in range(n + 1, c.hi + 1)}
    ranks[n] = len(complement)
    diffs = {m: c.d(m) for m in range(n + 1, c.hi)}
    if n < c.hi:
        diffs[n] = c.d(n) @ section
    return Complex.build(R, ranks, diffs, lo=n, hi=c.hi)


def cokernel_projection(c: Complex, n: int) -> Matrix:
    """Projection ``c^n -> (truncate_ge(c, n))^n`` matching the chosen complement basis."""
    R = c.ring
    img = image_basis(c.d(n - 1))
    pivots = {next(j for j, x in enumerate(v) if not R.is_zero(x)) for v in img}
    complement = [j for j in range(c.rank(n)) if j not in pivots]
    basis = [tuple(v) for v in img] + [
        tuple(R.one if i == j else R.zero for i in range(c.rank(n))) for j in complement]
    B = Matrix.from_columns(R, basis, c.rank(n))
    inv = solve_matrix(B, Matrix.identity(R, c.rank(n)))
    return inv.submatrix(len(img), c.rank(n), 0, c.rank(n))


def tor_amplitude(c: Complex) -> tuple[int, int] | None:
    """Minimal window of nonzero cohomology of ``c (x) k``; ``None`` when empty."""
    R = c.ring
    if isinstance(R, DualNumbers):
        c = tensor(c, ModulePresentation.residue_field(R))
    elif not R.is_field:
        raise UnsupportedRing(f"Tor amplitude over {R} is not supported")
    nonzero = [n for n, h in cohomology_dims(c).items() if h]
    if not nonzero:
        return None
    return (min(nonzero), max(nonzero))


# ---------------------------------------------------------------------------
# flat base change


def embedding(source: Ring, target: Ring) -> Callable:
    """Coefficient embedding for the supported flat maps."""
    if source == target:
        return lambda x: x
    if isinstance(source, BASE_FIELDS) and isinstance(target, (PolynomialRing, RationalFunctionField)) \
            and target.base == source:
        return target.from_base
    if isinstance(source, PolynomialRing) and isinstance(target, RationalFunctionField) \
            and (source.base, source.vars) == (target.base, target.vars):
        return target.from_polynomial
    raise UnsupportedEmbedding(f"no supported flat embedding {source} -> {target}")


def base_change(c: Complex, target_ring: Ring) -> Complex:
    emb = embedding(c.ring, target_ring)
    if c.ring == target_ring:
        return c
    return Complex(target_ring, c.lo, c.ranks, tuple(d.map(emb, target_ring) for d in c.diffs))


def base_change_map(f: GradedMap, target_ring: Ring) -> GradedMap:
    emb = embedding(f.ring, target_ring)
    if f.ring == target_ring:
        return f
    return GradedMap(base_change(f.source, target_ring), base_change(f.target, target_ring), f.degree,
                     tuple(m.map(emb, target_ring) for m in f.components))
