"""Frey curves, S-unit equations and Fermat-type criteria over number fields."""

__version__ = "0.1.0"

from . import errors
from ._kernels import BACKEND
from .qfield import (
    QQ,
    AlgebraicNumber,
    ClassData,
    FieldDescriptor,
    PrimeSlot,
    SplittingType,
    abstract_field,
    class_data,
    element,
    field_from_d,
    fundamental_unit,
    make_field,
    primes_above,
    roots_of_unity,
    splitting_type,
    valuation,
)
from .sunit import (
    Relevance,
    SUnitGroup,
    SUnitSolution,
    classify,
    congruence_filters,
    orbit_partition,
    orbit_reduce,
    slots_above,
    solve_sunit,
    sunit_group,
)
from .legendre import frey_lambda, j_from_solution, j_of_lambda, lambda_orbit, s_integrality
from .frey import (
    FreyTriple,
    conductor_support,
    invariants,
    nonprimitive_family,
    slot_profiles,
    validate_triple,
)
from .criteria import (
    CriterionVerdict,
    Status,
    contradiction_trace,
    corollary_q24,
    corollary_quadratic,
    corollary_ramified,
    corollary_splits3,
    theoremA_check,
    theoremB_check,
    z2_layer_check,
)
from .density import membership_sample, residue_fractions, squarefree_sieve
from .report import RunConfig

__all__ = [
    "__version__",
    "errors",
    "BACKEND",
    "QQ",
    "AlgebraicNumber",
    "ClassData",
    "FieldDescriptor",
    "PrimeSlot",
    "SplittingType",
    "abstract_field",
    "class_data",
    "element",
    "field_from_d",
    "fundamental_unit",
    "make_field",
    "primes_above",
    "roots_of_unity",
    "splitting_type",
    "valuation",
    "Relevance",
    "SUnitGroup",
    "SUnitSolution",
    "classify",
    "congruence_filters",
    "orbit_partition",
    "orbit_reduce",
    "slots_above",
    "solve_sunit",
    "sunit_group",
    "frey_lambda",
    "j_from_solution",
    "j_of_lambda",
    "lambda_orbit",
    "s_integrality",
    "FreyTriple",
    "conductor_support",
    "invariants",
    "nonprimitive_family",
    "slot_profiles",
    "validate_triple",
    "CriterionVerdict",
    "Status",
    "contradiction_trace",
    "corollary_q24",
    "corollary_quadratic",
    "corollary_ramified",
    "corollary_splits3",
    "theoremA_check",
    "theoremB_check",
    "z2_layer_check",
    "membership_sample",
    "residue_fractions",
    "squarefree_sieve",
    "RunConfig",
]
