"""Bounded cochain complexes of finite free modules and maps between them.

Sign conventions, fixed once for the whole package:

* differentials raise degree;
* ``shift(c, k)`` has ``c[k]^n = c^(n+k)`` and differential ``(-1)^k d``;
* the cone of ``f: P -> Q`` has ``C^n = P^(n+1) + Q^n`` and differential
  ``[[-d_P, 0], [f, d_Q]]``;
* a degree ``s`` map ``F`` has Hom-differential ``d(F) = d_Q F - (-1)^s F d_P``,
  so for a homotopy (``s = -1``) ``d(H) = d H + H d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple

from .errors import (
    NonFieldRing,
    NotAComplex,
    NotChainMap,
    RingMismatch,
    ShapeMismatch,
    UnsupportedModule,
)
from .linalg import Matrix, rank
from .rings import DualNumbers, Ring


@dataclass(frozen=True)
class Complex:
    """``ranks[i]`` is the rank in degree ``lo + i``; ``diffs[i]`` is ``d^(lo+i)``."""

    ring: Ring
    lo: int
    ranks: tuple[int, ...]
    diffs: tuple[Matrix, ...]

    def __post_init__(self):
        if not self.ranks:
            raise NotAComplex(self.lo, "empty window")
        if len(self.diffs) != len(self.ranks) - 1:
            raise NotAComplex(self.lo, "need one differential per consecutive pair of degrees")

    @classmethod
    def build(cls, ring: Ring, ranks: Mapping[int, int], diffs: Mapping[int, Matrix | list] | None = None,
              lo: int | None = None, hi: int | None = None) -> "Complex":
        """Build from ``{degree: rank}`` and ``{degree: matrix}``; missing differentials are zero."""
        diffs = dict(diffs or {})
        degrees = [n for n, r in ranks.items() if r] or [0]
        lo = min(degrees) if lo is None else lo
        hi = max(degrees) if hi is None else hi
        if lo > hi:
            raise NotAComplex(lo, "lo > hi")
        rk = tuple(ranks.get(n, 0) for n in range(lo, hi + 1))
        for n, r in ranks.items():
            if r and not lo <= n <= hi:
                raise NotAComplex(n, "nonzero rank outside the window")
        ds = []
        for n in range(lo, hi):
            m = diffs.pop(n, None)
            shape = (rk[n + 1 - lo], rk[n - lo])
            if m is None:
                m = Matrix.zeros(ring, *shape)
            elif not isinstance(m, Matrix):
                m = Matrix.from_rows(ring, m, cols=shape[1])
            if m.shape != shape:
                raise NotAComplex(n, f"d^{n} has shape {m.shape}, expected {shape}")
            if m.ring != ring:
                raise NotAComplex(n, f"d^{n} is over {m.ring}, expected {ring}")
            ds.append(m)
        for n, m in diffs.items():
            if not isinstance(m, Matrix) or not m.is_zero():
                raise NotAComplex(n, "differential outside the window")
        return cls(ring, lo, rk, tuple(ds))

    @classmethod
    def zero(cls, ring: Ring, lo: int = 0, hi: int | None = None) -> "Complex":
        hi = lo if hi is None else hi
        return cls.build(ring, {}, lo=lo, hi=hi)

    @classmethod
    def free(cls, ring: Ring, rank_: int, degree: int = 0) -> "Complex":
        return cls.build(ring, {degree: rank_}, lo=degree, hi=degree)

    @property
    def hi(self) -> int:
        return self.lo + len(self.ranks) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def rank(self, n: int) -> int:
        return self.ranks[n - self.lo] if self.lo <= n <= self.hi else 0

    def d(self, n: int) -> Matrix:
        """``d^n : C^n -> C^(n+1)`` (a zero matrix outside the window)."""
        if self.lo <= n < self.hi:
            return self.diffs[n - self.lo]
        return Matrix.zeros(self.ring, self.rank(n + 1), self.rank(n))

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * self.rank(n) for n in self.degrees)

    def __repr__(self):
        return f"Complex<{self.ring} ranks={dict(zip(self.degrees, self.ranks))}>"


@dataclass(frozen=True)
class GradedMap:
    """A degree ``s`` map: ``component(n) : source^n -> target^(n+s)``."""

    source: Complex
    target: Complex
    degree: int
    components: tuple[Matrix, ...]

    def __post_init__(self):
        if self.source.ring != self.target.ring:
            raise RingMismatch(f"{self.source.ring} vs {self.target.ring}")
        if len(self.components) != len(self.source.ranks):
            raise ShapeMismatch("one component per source degree is required")
        for n, m in zip(self.source.degrees, self.components):
            shape = (self.target.rank(n + self.degree), self.source.rank(n))
            if m.shape != shape:
                raise ShapeMismatch(f"component {n} has shape {m.shape}, expected {shape}")

    @classmethod
    def build(cls, source: Complex, target: Complex, degree: int = 0,
              components: Mapping[int, Matrix | list] | None = None) -> "GradedMap":
        """Missing components are zero."""
        comps = dict(components or {})
        R = source.ring
        out = []
        for n in source.degrees:
            shape = (target.rank(n + degree), source.rank(n))
            m = comps.pop(n, None)
            if m is None:
                m = Matrix.zeros(R, *shape)
            elif not isinstance(m, Matrix):
                m = Matrix.from_rows(R, m, cols=shape[1])
            if m.shape != shape:
                raise ShapeMismatch(f"component {n} has shape {m.shape}, expected {shape}")
            out.append(m)
        for n, m in comps.items():
            if not isinstance(m, Matrix) or not m.is_zero():
                raise ShapeMismatch(f"nonzero component {n} outside the source window")
        return cls(source, target, degree, tuple(out))

    @property
    def ring(self) -> Ring:
        return self.source.ring

    def component(self, n: int) -> Matrix:
        if self.source.lo <= n <= self.source.hi:
            return self.components[n - self.source.lo]
        return Matrix.zeros(self.ring, self.target.rank(n + self.degree), self.source.rank(n))

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.components)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        return add(self, other)

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return add(self, neg(other))

    def __neg__(self) -> "GradedMap":
        return neg(self)

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        return compose(self, other)

    def __repr__(self):
        return f"GradedMap<deg {self.degree}: {self.source!r} -> {self.target!r}>"


# ---------------------------------------------------------------------------
# validation


def validate(c: Complex) -> None:
    """Raise :class:`NotAComplex` at the first degree where shapes or ``d o d`` fail."""
    for n in range(c.lo, c.hi):
        m = c.diffs[n - c.lo]
        if m.ring != c.ring:
            raise NotAComplex(n, f"d^{n} is over {m.ring}")
        if m.shape != (c.rank(n + 1), c.rank(n)):
            raise NotAComplex(n, f"d^{n} has shape {m.shape}")
    for n in range(c.lo, c.hi - 1):
        if not (c.d(n + 1) @ c.d(n)).is_zero():
            raise NotAComplex(n, f"d^{n + 1} d^{n} != 0")


def is_valid(c: Complex) -> bool:
    try:
        validate(c)
    except NotAComplex:
        return False
    return True


def chain_map_defect(f: GradedMap) -> int | None:
    """First source degree where ``d f != (-1)^s f d`` fails, or ``None``.

    For ``s = 0`` this is the chain map equation; in general it says the
    Hom-differential of ``f`` vanishes.
    """
    d = hom_differential(f)
    for n in d.source.degrees:
        if not d.component(n).is_zero():
            return n
    return None


def is_chain_map(f: GradedMap) -> bool:
    return f.degree == 0 and chain_map_defect(f) is None


def check_chain_map(f: GradedMap) -> None:
    if f.degree != 0:
        raise NotChainMap(None, f"degree {f.degree} map is not a chain map")
    n = chain_map_defect(f)
    if n is not None:
        raise NotChainMap(n)


# ---------------------------------------------------------------------------
# module structure on graded maps


def _same_shape(f: GradedMap, g: GradedMap) -> None:
    if f.source != g.source or f.target != g.target or f.degree != g.degree:
        raise ShapeMismatch("maps must share source, target and degree")


def add(f: GradedMap, g: GradedMap) -> GradedMap:
    _same_shape(f, g)
    return GradedMap(f.source, f.target, f.degree,
                     tuple(a + b for a, b in zip(f.components, g.components)))


def neg(f: GradedMap) -> GradedMap:
    return GradedMap(f.source, f.target, f.degree, tuple(-a for a in f.components))


def scale(s, f: GradedMap) -> GradedMap:
    return GradedMap(f.source, f.target, f.degree, tuple(a.scale(s) for a in f.components))


def compose(g: GradedMap, f: GradedMap) -> GradedMap:
    """``g o f``; degrees add."""
    if f.target != g.source:
        raise ShapeMismatch("target of f must be the source of g")
    comps = tuple(g.component(n + f.degree) @ f.component(n) for n in f.source.degrees)
    return GradedMap(f.source, g.target, f.degree + g.degree, comps)


def zero_map(source: Complex, target: Complex, degree: int = 0) -> GradedMap:
    return GradedMap.build(source, target, degree)


def identity(c: Complex) -> GradedMap:
    return GradedMap(c, c, 0, tuple(Matrix.identity(c.ring, r) for r in c.ranks))


def hom_differential(f: GradedMap) -> GradedMap:
    """``d(F) = d_target F - (-1)^s F d_source`` (degree ``s + 1``)."""
    s = f.degree
    P, Q = f.source, f.target
    sign = -1 if s % 2 == 0 else 1
    comps = []
    for n in P.degrees:
        a = Q.d(n + s) @ f.component(n)
        b = f.component(n + 1) @ P.d(n)
        comps.append(a - b if sign == -1 else a + b)
    return GradedMap(P, Q, s + 1, tuple(comps))


def homotopy_check(h: GradedMap, phi: GradedMap, psi: GradedMap) -> bool:
    """True iff ``d(H) = psi - phi`` for the degree ``-1`` map ``H``."""
    if h.degree != -1:
        raise ShapeMismatch("a homotopy has degree -1")
    _same_shape(phi, psi)
    if h.source != phi.source or h.target != phi.target:
        raise ShapeMismatch("homotopy and maps must share source and target")
    dh = hom_differential(h)
    return all(dh.component(n) == psi.component(n) - phi.component(n) for n in h.source.degrees)


# ---------------------------------------------------------------------------
# shifts and cones


def shift(c: Complex, k: int) -> Complex:
    sign = -1 if k % 2 else 1
    diffs = tuple(-m for m in c.diffs) if sign == -1 else c.diffs
    return Complex(c.ring, c.lo - k, c.ranks, diffs)


def shift_map(f: GradedMap, k: int) -> GradedMap:
    """Same components between ``shift(source, k)`` and ``shift(target, k)``."""
    return GradedMap(shift(f.source, k), shift(f.target, k), f.degree, f.components)


class Cone(NamedTuple):
    complex: Complex
    inclusion: GradedMap   # target -> cone
    projection: GradedMap  # cone -> source[1]


def cone(f: GradedMap) -> Cone:
    check_chain_map(f)
    P, Q, R = f.source, f.target, f.ring
    lo = min(P.lo - 1, Q.lo)
    hi = max(P.hi - 1, Q.hi)
    ranks = {n: P.rank(n + 1) + Q.rank(n) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo, hi):
        b = Q.rank(n)
        diffs[n] = Matrix.block(R, [
            [-P.d(n + 1), Matrix.zeros(R, P.rank(n + 2), b)],
            [f.component(n + 1), Q.d(n)],
        ])
    C = Complex.build(R, ranks, diffs, lo=lo, hi=hi)
    inclusion = GradedMap.build(Q, C, 0, {
        n: Matrix.block(R, [[Matrix.zeros(R, P.rank(n + 1), Q.rank(n))],
                            [Matrix.identity(R, Q.rank(n))]])
        for n in Q.degrees
    })
    projection = GradedMap.build(C, shift(P, 1), 0, {
        n: Matrix.block(R, [[Matrix.identity(R, P.rank(n + 1)), Matrix.zeros(R, P.rank(n + 1), Q.rank(n))]])
        for n in C.degrees
    })
    return Cone(C, inclusion, projection)


# ---------------------------------------------------------------------------
# cohomology


def _require_field(c: Complex) -> None:
    if not c.ring.is_field:
        raise NonFieldRing(f"cohomology over {c.ring} is not computed; reduce or specialize first")


def cohomology_dims(c: Complex) -> dict[int, int]:
    _require_field(c)
    ranks = {n: rank(c.d(n)) for n in range(c.lo - 1, c.hi + 1)}
    return {n: c.rank(n) - ranks[n] - ranks[n - 1] for n in c.degrees}


def is_exact(c: Complex) -> bool:
    return not any(cohomology_dims(c).values())


def is_qiso(f: GradedMap) -> bool:
    _require_field(f.source)
    return is_exact(cone(f).complex)


def direct_sum(a: Complex, b: Complex) -> Complex:
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    R = a.ring
    lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
    ranks = {n: a.rank(n) + b.rank(n) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo, hi):
        diffs[n] = _block_diag(R, a.d(n), b.d(n))
    return Complex.build(R, ranks, diffs, lo=lo, hi=hi)


def _block_diag(R: Ring, x: Matrix, y: Matrix) -> Matrix:
    rows = [r + (R.zero,) * y.cols for r in x.entries]
    rows += [(R.zero,) * x.cols + r for r in y.entries]
    return Matrix(R, x.rows + y.rows, x.cols + y.cols, tuple(rows))


def direct_sum_maps(f: GradedMap, g: GradedMap) -> GradedMap:
    if f.degree != g.degree:
        raise ShapeMismatch("summands must have the same degree")
    S, T = direct_sum(f.source, g.source), direct_sum(f.target, g.target)
    R = S.ring
    return GradedMap.build(S, T, f.degree, {
        n: _block_diag(R, f.component(n), g.component(n)) for n in S.degrees
    })


# ---------------------------------------------------------------------------
# base change along ring -> ring/(relations)


@dataclass(frozen=True)
class ModulePresentation:
    """``ring^generators / image(relations)``."""

    ring: Ring
    generators: int
    relations: Matrix

    @classmethod
    def free(cls, ring: Ring) -> "ModulePresentation":
        return cls(ring, 1, Matrix.zeros(ring, 1, 0))

    @classmethod
    def residue_field(cls, ring: Ring) -> "ModulePresentation":
        if isinstance(ring, DualNumbers):
            return cls(ring, 1, Matrix(ring, 1, 1, ((ring.eps,),)))
        if ring.is_field:
            return cls.free(ring)
        raise UnsupportedModule(f"no residue field presentation for {ring}")


def tensor(c: Complex, m: ModulePresentation) -> Complex:
    """Degreewise ``c (x) m``; since ``c`` is free this is the derived tensor."""
    if m.ring != c.ring:
        raise RingMismatch(f"{m.ring} vs {c.ring}")
    if m.generators == 1 and m.relations.is_zero():
        return c
    if isinstance(c.ring, DualNumbers) and m == ModulePresentation.residue_field(c.ring):
        B = c.ring.base
        return Complex(B, c.lo, c.ranks, tuple(d.map(lambda x: x[0], B) for d in c.diffs))
    raise UnsupportedModule("only the ring itself and the residue field of k[eps] are supported")
