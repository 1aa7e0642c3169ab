"""Descending a quasi-isomorphism from ``k[u_*]`` to ``k``.

A chain map ``f`` between base-changed complexes splits by monomials into
chain maps ``f_i`` over ``k``.  The generic morphism ``sum t_i f_i`` over
``k[t_*]`` is specialized at random points until the cone is exact; the
accepted specialization is a quasi-isomorphism over ``k``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .complexes import (
    Complex,
    GradedMap,
    check_chain_map,
    cohomology_dims,
    cone,
    is_exact,
    is_qiso,
)
from .derived import base_change, base_change_map
from .errors import (
    EmptyFamily,
    FieldTooSmall,
    MissingVariable,
    NoPointFound,
    NotBaseChanged,
    NotQisoInput,
    RingMismatch,
    ShapeMismatch,
)
from .linalg import Matrix, evaluate
from .rings import BASE_FIELDS, PolynomialRing, RationalFunctionField, Ring

Monomial = tuple[int, ...]


def descend_complex(c: Complex) -> Complex:
    """The complex over ``k`` whose base change is ``c`` (constant differentials required)."""
    R = c.ring
    if not isinstance(R, PolynomialRing):
        raise RingMismatch(f"expected a polynomial ring, got {R}")
    diffs = []
    for n, d in zip(c.degrees, c.diffs):
        for row in d.entries:
            for x in row:
                if not R.is_constant(x):
                    raise NotBaseChanged(f"differential d^{n} has non-constant entry {R.render(x)}")
        diffs.append(d.map(R.constant_term, R.base))
    return Complex(R.base, c.lo, c.ranks, tuple(diffs))


def _monomial_key(m: Monomial):
    return (sum(m), tuple(-e for e in m))


def coefficient_decomposition(f: GradedMap) -> list[tuple[Monomial, GradedMap]]:
    """``[(monomial, f_m)]`` with ``f = sum monomial * f_m``, constant term first."""
    R = f.ring
    P, Q = descend_complex(f.source), descend_complex(f.target)
    check_chain_map(f)
    B = R.base
    coeffs: dict[Monomial, dict[tuple[int, int, int], object]] = {}
    for n, m in zip(f.source.degrees, f.components):
        for i, row in enumerate(m.entries):
            for j, x in enumerate(row):
                for exps, c in R.terms(x):
                    coeffs.setdefault(exps, {})[(n, i, j)] = c
    out = []
    for mono in sorted(coeffs, key=_monomial_key):
        entries = coeffs[mono]
        comps = {}
        for n in P.degrees:
            rows, cols = Q.rank(n + f.degree), P.rank(n)
            comps[n] = Matrix(B, rows, cols, tuple(
                tuple(entries.get((n, i, j), B.zero) for j in range(cols)) for i in range(rows)))
        fm = GradedMap.build(P, Q, f.degree, comps)
        check_chain_map(fm)
        out.append((mono, fm))
    return out


def reassemble(R: PolynomialRing, pieces: Sequence[tuple[Monomial, GradedMap]],
               source: Complex, target: Complex) -> GradedMap:
    """``sum monomial * f_m`` over ``R`` between the given base-changed complexes."""
    total = GradedMap.build(source, target, pieces[0][1].degree if pieces else 0)
    for mono, fm in pieces:
        x = R.monomial(mono)
        total = total + GradedMap(source, target, fm.degree, tuple(
            m.map(R.from_base, R).map(lambda a: R.mul(x, a), R) for m in fm.components))
    return total


@dataclass(frozen=True)
class GenericMorphism:
    P: Complex
    Q: Complex
    coefficient_maps: tuple[GradedMap, ...]
    generic: GradedMap

    @property
    def ring(self) -> PolynomialRing:
        return self.generic.ring

    @property
    def variables(self) -> tuple[str, ...]:
        return self.ring.vars


def generic_morphism(P: Complex, Q: Complex, coefficient_maps: Sequence[GradedMap]) -> GenericMorphism:
    maps = tuple(coefficient_maps)
    if not maps:
        raise EmptyFamily("at least one coefficient map is required")
    k = P.ring
    if not isinstance(k, BASE_FIELDS):
        raise RingMismatch(f"coefficient maps must be over QQ or GF(p), got {k}")
    for f in maps:
        if f.source != P or f.target != Q or f.degree != 0:
            raise ShapeMismatch("coefficient maps must be degree 0 maps P -> Q")
        check_chain_map(f)
    R = PolynomialRing(k, tuple(f"t{i}" for i in range(1, len(maps) + 1)))
    Pt, Qt = base_change(P, R), base_change(Q, R)
    comps = []
    for idx, n in enumerate(P.degrees):
        acc = Matrix.zeros(R, Q.rank(n), P.rank(n))
        for v, f in zip(R.vars, maps):
            t = R.variable(v)
            acc = acc + f.component(n).map(lambda a: R.mul(t, R.from_base(a)), R)
        comps.append(acc)
    g = GradedMap(Pt, Qt, 0, tuple(comps))
    check_chain_map(g)
    return GenericMorphism(P, Q, maps, g)


def _point_mapping(g: GenericMorphism, point) -> dict[str, object]:
    if isinstance(point, Mapping):
        return dict(point)
    values = list(point)
    if len(values) != len(g.variables):
        raise MissingVariable(f"expected {len(g.variables)} values, got {len(values)}")
    return dict(zip(g.variables, values))


def specialize(g: GenericMorphism, point) -> GradedMap:
    """Entrywise evaluation of the generic morphism at ``point``."""
    pt = _point_mapping(g, point)
    return GradedMap(g.P, g.Q, 0, tuple(evaluate(m, pt) for m in g.generic.components))


@dataclass(frozen=True)
class TrivializationReport:
    point: tuple[tuple[str, object], ...]
    specialized_map: GradedMap
    certificate: dict
    trials: int
    seed: int
    sample_bound: int
    generic: GenericMorphism
    generic_certified: bool = False

    @property
    def point_mapping(self) -> dict[str, object]:
        return dict(self.point)


def _check_sample_bound(k: Ring, sample_bound: int, max_trials: int) -> None:
    if sample_bound < 1:
        raise ValueError("sample_bound must be >= 1")
    if max_trials < 1:
        raise ValueError("max_trials must be >= 1")
    if k.size is not None and sample_bound > k.size:
        raise FieldTooSmall(f"{k} has {k.size} elements, fewer than sample_bound {sample_bound}")


def find_trivializing_point(g: GenericMorphism, seed: int, sample_bound: int, max_trials: int,
                            generic_certified: bool = False) -> TrivializationReport:
    """First sampled point whose specialization has an exact cone.

    Points are drawn coordinate by coordinate from one ``random.Random(seed)``
    stream, so the accepted point depends only on the inputs.
    """
    k = g.P.ring
    _check_sample_bound(k, sample_bound, max_trials)
    rng = random.Random(seed)
    for trial in range(1, max_trials + 1):
        values = tuple(k.random_element(rng, sample_bound) for _ in g.variables)
        f = specialize(g, values)
        c = cone(f).complex
        if is_exact(c):
            return TrivializationReport(
                tuple(zip(g.variables, values)), f, cohomology_dims(c), trial, seed,
                sample_bound, g, generic_certified)
    raise NoPointFound(
        f"no sampled point in {max_trials} trials gave a quasi-isomorphism; either no k-linear "
        "combination of the coefficient maps is one or the sample set is too small, and this "
        "search cannot tell which")


def generic_cone_is_exact(g: GenericMorphism) -> bool:
    """Exactness of the cone of the generic morphism over ``k(t_*)``."""
    K = RationalFunctionField(g.ring.base, g.ring.vars)
    return is_exact(cone(base_change_map(g.generic, K)).complex)


def descend(P: Complex, Q: Complex, f: GradedMap, seed: int = 0, sample_bound: int = 100,
            max_trials: int = 20, certify_generic: bool = False,
            assert_qiso: bool = False) -> TrivializationReport:
    """A quasi-isomorphism ``P -> Q`` over ``k`` from one over ``k[u_*]``.

    ``certify_generic`` decides nonemptiness of the good locus by rank over
    ``k(t_*)`` before sampling; ``assert_qiso`` turns a failed generic check
    into :class:`NotQisoInput`.
    """
    R = f.ring
    if not isinstance(R, PolynomialRing) or R.base != P.ring:
        raise RingMismatch(f"f must be over a polynomial ring over {P.ring}")
    if f.source != base_change(P, R) or f.target != base_change(Q, R) or f.degree != 0:
        raise ShapeMismatch("f must be a degree 0 map between the base changes of P and Q")
    _check_sample_bound(P.ring, sample_bound, max_trials)
    pieces = coefficient_decomposition(f)
    if not pieces:
        pieces = [(tuple(0 for _ in R.vars), GradedMap.build(P, Q, 0))]
    g = generic_morphism(P, Q, [fm for _, fm in pieces])
    certified = False
    if certify_generic or assert_qiso:
        certified = generic_cone_is_exact(g)
        if not certified:
            if assert_qiso:
                raise NotQisoInput("the generic specialization is not a quasi-isomorphism")
            raise NoPointFound("no point exists: the cone is not exact at the generic point")
    return find_trivializing_point(g, seed, sample_bound, max_trials, certified)


def verify_form_triviality(P: Complex, Q: Complex, report: TrivializationReport) -> bool:
    """Re-specialize at the stored point and recheck quasi-isomorphy from scratch."""
    f = report.specialized_map
    if f.source != P or f.target != Q:
        return False
    try:
        again = specialize(report.generic, report.point_mapping)
    except MissingVariable:
        return False
    return again == f and is_qiso(again)
