"""Almost paracontact metric structures induced by G2* structures on 7-dimensional Lie algebras."""

from .apcms import APCMS, FTensor, axiom_audit, f_tensor, induce, is_killing
from .classify import ClassReport, classify, normality_defect, paracontact_defect
from .errors import (
    ChainBrokenError,
    ConsistencyError,
    G2ParaError,
    NonTimelikeUnitError,
    NotG2StarFormError,
    ValidationError,
)
from .exterior import KForm, Metric, Vector
from .g2star import G2Bundle, calibrate, example_phi, standard_phi
from .liealg import LieAlgebra, check_jacobi, levi_civita
from .problem import ProblemSpec, load_problem, parse_spec
from .scalar import BACKEND, QuadExt, parse_scalar
from .symbolic import deduction_chain

__version__ = "0.1.0"

__all__ = [
    "APCMS", "BACKEND", "ChainBrokenError", "ClassReport", "ConsistencyError", "FTensor",
    "G2Bundle", "G2ParaError", "KForm", "LieAlgebra", "Metric", "NonTimelikeUnitError",
    "NotG2StarFormError", "ProblemSpec", "QuadExt", "ValidationError", "Vector",
    "axiom_audit", "calibrate", "check_jacobi", "classify", "deduction_chain",
    "example_phi", "f_tensor", "induce", "is_killing", "levi_civita", "load_problem",
    "normality_defect", "paracontact_defect", "parse_scalar", "parse_spec", "standard_phi",
]
