"""Exact group cohomology of finite groups, connecting homomorphisms and BD structures on KG (x) H*(G, A)."""

from .bd import (
    BDAlgebra,
    BDElement,
    GradedAlgebraInstance,
    ThetaFamily,
    bd_bracket,
    bd_delta,
    bd_mul,
    theta_x,
    validate_situation_starstar,
    verify_bd_axioms,
    verify_pr_axioms,
)
from .cohomology import Cochain, CohomologyClass, CohomologyContext, coboundary, is_cocycle
from .connecting import ShortExactSequence, bockstein_ses, theta_class, theta_cochain, validate_situation_star
from .examples import build_c3_family, build_cp_bockstein_family, report_delta_table
from .group import FiniteGroup, tuple_decode, tuple_encode, validate_group
from .modules import AdditiveMap, Carrier, GAlgebra, GModule, Subgroup, SubgroupMap, equivariant_extension_exists, kernel
from .products import CupTable, Pairing, cup_class, cup_cochain

__version__ = "0.1.0"

__all__ = [
    "AdditiveMap",
    "bd_bracket",
    "bd_delta",
    "bd_mul",
    "BDAlgebra",
    "BDElement",
    "bockstein_ses",
    "build_c3_family",
    "build_cp_bockstein_family",
    "Carrier",
    "coboundary",
    "Cochain",
    "CohomologyClass",
    "CohomologyContext",
    "cup_class",
    "cup_cochain",
    "CupTable",
    "equivariant_extension_exists",
    "FiniteGroup",
    "GAlgebra",
    "GModule",
    "GradedAlgebraInstance",
    "is_cocycle",
    "kernel",
    "Pairing",
    "report_delta_table",
    "ShortExactSequence",
    "Subgroup",
    "SubgroupMap",
    "theta_class",
    "theta_cochain",
    "theta_x",
    "ThetaFamily",
    "tuple_decode",
    "tuple_encode",
    "validate_group",
    "validate_situation_star",
    "validate_situation_starstar",
    "verify_bd_axioms",
    "verify_pr_axioms",
]
