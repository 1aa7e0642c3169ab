"""Lifting chain maps along the square-zero extension ``k[eps]/eps^2 -> k``.

A deformation ``E`` over ``A = k[eps]`` has differential ``d0 + eps d1`` where
``d0`` is the reduction.  For a chain map ``phi0: E0 -> F0`` the constant lift
fails to be a chain map by ``eps * o`` with ``o = d1_F phi0 - phi0 d1_E``, a
degree 1 cocycle in ``Hom(E0, F0)``.  A lift exists iff ``o`` is a coboundary.

The same class is recovered from the extensions ``eps E -> E -> E0`` of
k-complexes, as ``[phi0^* F] - [(phi0)_* E]``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import Complex, GradedMap, check_chain_map, hom_differential, validate
from .derived import (
    ExtClass,
    Extension,
    classify_extension,
    primitive,
    pullback_extension,
    pushforward_extension,
)
from .errors import InternalError, RingMismatch, ShapeMismatch
from .linalg import Matrix
from .rings import DualNumbers, Ring


@dataclass(frozen=True)
class SquareZeroContext:
    total_ring: DualNumbers

    @classmethod
    def over(cls, base: Ring) -> "SquareZeroContext":
        return cls(DualNumbers(base))

    @property
    def base_ring(self) -> Ring:
        return self.total_ring.base

    @property
    def ideal_generator(self):
        return self.total_ring.eps


def _constant_part(m: Matrix) -> Matrix:
    return m.map(lambda a: a[0], m.ring.base)


def _eps_part(m: Matrix) -> Matrix:
    return m.map(lambda a: a[1], m.ring.base)


def _lift_matrix(ring: DualNumbers, c: Matrix, e: Matrix | None = None) -> Matrix:
    if e is None:
        return c.map(ring.lift, ring)
    return Matrix(ring, c.rows, c.cols, tuple(
        tuple(ring.lift(x, y) for x, y in zip(rc, re)) for rc, re in zip(c.entries, e.entries)))


def _require_dual(ring: Ring) -> DualNumbers:
    if not isinstance(ring, DualNumbers):
        raise RingMismatch(f"expected a complex over dual numbers, got {ring}")
    return ring


def reduce(E: Complex) -> Complex:
    """Entrywise ``eps -> 0``."""
    ring = _require_dual(E.ring)
    return Complex(ring.base, E.lo, E.ranks, tuple(_constant_part(d) for d in E.diffs))


def reduce_map(f: GradedMap) -> GradedMap:
    return GradedMap(reduce(f.source), reduce(f.target), f.degree,
                     tuple(_constant_part(m) for m in f.components))


def eps_coefficient(f: GradedMap, source: Complex, target: Complex) -> GradedMap:
    """The ``eps`` part of each component, as a map between the given k-complexes."""
    return GradedMap(source, target, f.degree, tuple(_eps_part(m) for m in f.components))


@dataclass(frozen=True)
class DeformedComplex:
    total: Complex

    def __post_init__(self):
        _require_dual(self.total.ring)
        validate(self.total)

    @property
    def reduction(self) -> Complex:
        return reduce(self.total)

    @property
    def context(self) -> SquareZeroContext:
        return SquareZeroContext(self.total.ring)

    def first_order(self, n: int) -> Matrix:
        """``d1`` in degree ``n``."""
        return _eps_part(self.total.d(n))


def _as_deformed(E) -> DeformedComplex:
    return E if isinstance(E, DeformedComplex) else DeformedComplex(E)


def _check_inputs(E: DeformedComplex, F: DeformedComplex, phi0: GradedMap) -> None:
    if E.total.ring != F.total.ring:
        raise RingMismatch(f"{E.total.ring} vs {F.total.ring}")
    if phi0.source != E.reduction or phi0.target != F.reduction or phi0.degree != 0:
        raise ShapeMismatch("phi0 must be a degree 0 map E.reduction -> F.reduction")
    check_chain_map(phi0)


def constant_lift(E: DeformedComplex, F: DeformedComplex, phi0: GradedMap) -> GradedMap:
    ring = E.total.ring
    return GradedMap(E.total, F.total, 0, tuple(_lift_matrix(ring, m) for m in phi0.components))


def obstruction(E, F, phi0: GradedMap) -> ExtClass:
    """Class in ``Ext^1(E0, F0)`` of the eps-coefficient of ``d Phi - Phi d``."""
    E, F = _as_deformed(E), _as_deformed(F)
    _check_inputs(E, F, phi0)
    defect = hom_differential(constant_lift(E, F, phi0))
    if not reduce_map(defect).is_zero():
        raise InternalError("constant lift defect is not divisible by eps")
    return ExtClass.of(eps_coefficient(defect, E.reduction, F.reduction))


def lift(E, F, phi0: GradedMap) -> GradedMap | None:
    """A chain map ``phi0 + eps Phi1`` over the dual numbers, or ``None``."""
    E, F = _as_deformed(E), _as_deformed(F)
    o = obstruction(E, F, phi0).cocycle
    g = primitive(o)
    if g is None:
        return None
    ring = E.total.ring
    Phi = GradedMap(E.total, F.total, 0, tuple(
        _lift_matrix(ring, c, (-e)) for c, e in zip(phi0.components, g.components)))
    check_chain_map(Phi)
    return Phi


def restrict_scalars(m: Matrix) -> Matrix:
    """A dual-number matrix as a k-matrix on coordinates ``(eps part, constant part)``."""
    B = m.ring.base
    c, e = _constant_part(m), _eps_part(m)
    return Matrix.block(B, [[c, e], [Matrix.zeros(B, c.rows, c.cols), c]])


def deformation_extension(E) -> Extension:
    """``eps E -> E -> E0`` as an extension of k-complexes, with ``eps E`` identified with ``E0``."""
    E = _as_deformed(E)
    T, E0 = E.total, E.reduction
    B = E0.ring
    total = Complex(B, T.lo, tuple(2 * r for r in T.ranks), tuple(restrict_scalars(d) for d in T.diffs))

    def inc(r):
        return Matrix.block(B, [[Matrix.identity(B, r)], [Matrix.zeros(B, r, r)]])

    def proj(r):
        return Matrix.block(B, [[Matrix.zeros(B, r, r), Matrix.identity(B, r)]])

    return Extension(E0, total, E0,
                     GradedMap(E0, total, 0, tuple(inc(r) for r in T.ranks)),
                     GradedMap(total, E0, 0, tuple(proj(r) for r in T.ranks)))


def obstruction_via_triangles(E, F, phi0: GradedMap) -> ExtClass:
    """``[phi0^* F] - [f_* E]`` where ``f: eps E -> eps F`` is induced by ``phi0``."""
    E, F = _as_deformed(E), _as_deformed(F)
    _check_inputs(E, F, phi0)
    tE, tF = deformation_extension(E), deformation_extension(F)
    pulled = classify_extension(pullback_extension(tF, phi0))
    pushed = classify_extension(pushforward_extension(tE, phi0))
    return pulled - pushed
