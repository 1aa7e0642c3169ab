"""Exact homological algebra for strictly perfect complexes over small rings."""

from .complexes import (
    Complex,
    GradedMap,
    cohomology_dims,
    compose,
    cone,
    homotopy_check,
    identity,
    is_chain_map,
    is_exact,
    is_qiso,
    shift,
    validate,
)
from .deformation import DeformedComplex, lift, obstruction, obstruction_via_triangles, reduce
from .derived import (
    ExtClass,
    Extension,
    base_change,
    base_change_map,
    classify_extension,
    ext_dims,
    ext_equal,
    hom_complex,
    pullback_extension,
    pushforward_extension,
    tor_amplitude,
    truncate_ge,
    truncate_le,
)
from .errors import PerfcxError
from .hilbert90 import (
    GenericMorphism,
    TrivializationReport,
    coefficient_decomposition,
    descend,
    find_trivializing_point,
    generic_morphism,
    specialize,
    verify_form_triviality,
)
from .linalg import Matrix, kernel_basis, rank, solve
from .rings import QQ, DualNumbers, PolynomialRing, PrimeField, RationalFunctionField, Rationals, random_scalar
from .simplicial import (
    AutWitness,
    dk_build,
    dk_pi,
    fill_inner_horn,
    quasi_automorphism_inverse,
    verify_g1_edge,
    verify_g2_edge,
    verify_g2_vertex,
)

__all__ = [
    "AutWitness",
    "base_change",
    "base_change_map",
    "classify_extension",
    "coefficient_decomposition",
    "cohomology_dims",
    "Complex",
    "compose",
    "cone",
    "DeformedComplex",
    "descend",
    "dk_build",
    "dk_pi",
    "DualNumbers",
    "ext_dims",
    "ext_equal",
    "ExtClass",
    "Extension",
    "fill_inner_horn",
    "find_trivializing_point",
    "generic_morphism",
    "GenericMorphism",
    "GradedMap",
    "hom_complex",
    "homotopy_check",
    "identity",
    "is_chain_map",
    "is_exact",
    "is_qiso",
    "kernel_basis",
    "lift",
    "Matrix",
    "obstruction",
    "obstruction_via_triangles",
    "PerfcxError",
    "PolynomialRing",
    "PrimeField",
    "pullback_extension",
    "pushforward_extension",
    "QQ",
    "quasi_automorphism_inverse",
    "random_scalar",
    "rank",
    "RationalFunctionField",
    "Rationals",
    "reduce",
    "shift",
    "solve",
    "specialize",
    "tor_amplitude",
    "TrivializationReport",
    "truncate_ge",
    "truncate_le",
    "validate",
    "verify_form_triviality",
    "verify_g1_edge",
    "verify_g2_edge",
    "verify_g2_vertex",
]

__version__ = "0.1.0"
