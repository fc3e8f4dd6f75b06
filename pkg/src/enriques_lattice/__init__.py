"""Exact lattice computations for divisor classes on Enriques surfaces.

The package is layered: :mod:`exact_lattice` (Gram lattices and classes),
:mod:`curve_config` (curve graphs and their ambient lattice),
:mod:`divisor_calculus` (nefness, Weyl reduction, Phi, negative
definiteness, effectivity), :mod:`fano_reye` (10-sequences and Fano
polarizations), :mod:`scenarios` (bundled surfaces) and :mod:`cli`.
"""
from .curve_config import AmbientModel, ClassSpec, ConfigError, CurveConfig, SequenceDecl, build_ambient, class_of, curve_gram
from .divisor_calculus import (
    IsotropicSlice,
    ModelIntegrityError,
    PhiResult,
    ReductionError,
    ReductionTrace,
    cone_membership,
    enumerate_isotropic_slice,
    is_negative_definite_divisor,
    is_nef_against,
    iter_cone_solutions,
    negative_definite_witness,
    phi,
    reference_ample,
    weyl_reduce,
)
from .exact_lattice import (
    DivClass,
    GramLattice,
    LatticeProfile,
    divide_in_lattice,
    e10_standard,
    is_primitive,
    lattice_profile,
    pair,
    signature,
)
from .fano_reye import (
    FanoReport,
    IsotropicSequence,
    check_E_membership,
    fano_from_sequence,
    hat_transform,
    pattern_check,
    pattern_square,
    reye_criterion,
    sequence_from_decl,
    special_triple_check,
    validate_sequence,
)

__all__ = [
    "AmbientModel",
    "ClassSpec",
    "ConfigError",
    "CurveConfig",
    "DivClass",
    "FanoReport",
    "GramLattice",
    "IsotropicSequence",
    "IsotropicSlice",
    "LatticeProfile",
    "ModelIntegrityError",
    "PhiResult",
    "ReductionError",
    "ReductionTrace",
    "SequenceDecl",
    "build_ambient",
    "check_E_membership",
    "class_of",
    "cone_membership",
    "curve_gram",
    "divide_in_lattice",
    "e10_standard",
    "enumerate_isotropic_slice",
    "fano_from_sequence",
    "hat_transform",
    "is_nef_against",
    "is_negative_definite_divisor",
    "is_primitive",
    "iter_cone_solutions",
    "lattice_profile",
    "negative_definite_witness",
    "pair",
    "pattern_check",
    "pattern_square",
    "phi",
    "reference_ample",
    "reye_criterion",
    "sequence_from_decl",
    "signature",
    "special_triple_check",
    "validate_sequence",
    "weyl_reduce",
]

__version__ = "0.1.0"
