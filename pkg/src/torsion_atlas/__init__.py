"""Exact computations with torsion images of elliptic curves on P^1."""

from .algnum import INF, AlgebraicNumber, ComplexBall, isolate_roots
from .closure import (
    ClosureState,
    GenerationRule,
    closure_explore,
    cube_root_identities,
    four_torsion_of_set,
    product_root_step,
    sqrt_shift_step,
)
from .divpoly import (
    DivisionPolynomial,
    TorsionImage,
    oracle_torsion_fp,
    primitive_divpoly,
    symmetric_family_divpoly,
    torsion_image,
)
from .errors import BadInput, BudgetExceeded, PrecisionExhausted, VerificationFailure
from .exactmath import MPoly, UniPoly, jordan_totient, resultant, squarefree_factor
from .intersect import census_3_5, census_3_n, eliminate, moduli_scan
from .projgeom import FourSet, MobiusMap, SymmetricCurve, WeierstrassCurve

__all__ = [
    "INF", "AlgebraicNumber", "ComplexBall", "isolate_roots",
    "ClosureState", "GenerationRule", "closure_explore", "cube_root_identities",
    "four_torsion_of_set", "product_root_step", "sqrt_shift_step",
    "DivisionPolynomial", "TorsionImage", "oracle_torsion_fp", "primitive_divpoly",
    "symmetric_family_divpoly", "torsion_image",
    "BadInput", "BudgetExceeded", "PrecisionExhausted", "VerificationFailure",
    "MPoly", "UniPoly", "jordan_totient", "resultant", "squarefree_factor",
    "census_3_5", "census_3_n", "eliminate", "moduli_scan",
    "FourSet", "MobiusMap", "SymmetricCurve", "WeierstrassCurve",
]
