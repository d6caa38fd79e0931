"""Exact braiding of SU(2) level 4 anyons and the qutrit gate groups they generate."""

from .cyclo import (
    CyclotomicField,
    CyclotomicNumber,
    FieldMismatchError,
    FieldTooSmallError,
    cyclotomic_field,
    default_field,
    exp_i_pi,
    parse,
    root_of_unity,
    sqrt_constant,
    sqrt_rational,
)
from .exact_linalg import ExactMatrix, StateVector, canonical_projective_form, scalar_multiple_of
from .tqft import SU2Level4, default_theory, fusion_allowed
from .braidsim import (
    BraidOperator,
    FusionSpace,
    ancilla_protocol,
    apply_word,
    change_basis_qutrit,
    enumerate_basis,
    middle_braid_2211,
    parse_braid_word,
    project_internal,
    sigma_matrix,
)
from .groups import GeneratorCatalog, GroupClosure, closure, element_order, fingerprint, identity_suite
from .presentations import GroupPresentation, check_relations, parse_presentation, todd_coxeter

__version__ = "0.1.0"

__all__ = [
    "CyclotomicField", "CyclotomicNumber", "FieldMismatchError", "FieldTooSmallError",
    "cyclotomic_field", "default_field", "exp_i_pi", "parse", "root_of_unity",
    "sqrt_constant", "sqrt_rational", "ExactMatrix", "StateVector",
    "canonical_projective_form", "scalar_multiple_of", "SU2Level4", "default_theory",
    "fusion_allowed", "BraidOperator", "FusionSpace", "ancilla_protocol", "apply_word",
    "change_basis_qutrit", "enumerate_basis", "middle_braid_2211", "parse_braid_word",
    "project_internal", "sigma_matrix", "GeneratorCatalog", "GroupClosure", "closure",
    "element_order", "fingerprint", "identity_suite", "GroupPresentation",
    "check_relations", "parse_presentation", "todd_coxeter",
]
