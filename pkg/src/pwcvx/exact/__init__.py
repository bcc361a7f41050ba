"""Exact rational arithmetic, linear programming, elimination and PSD tests."""

from .fourier_motzkin import CapabilityError, fourier_motzkin
from .ldlt import LdltFactors, NotPsd, NotSymmetricError, Psd, ldlt_psd
from .linalg import affine_rank, nullspace, rank, solve_affine
from .lp import (
    DimensionError,
    Infeasible,
    LinearProgram,
    Optimal,
    Unbounded,
    feasible_point,
    lp_solve,
    maximize,
)
from .numbers import (
    Matrix,
    Rational,
    Vector,
    format_rational,
    format_vector,
    mat,
    q,
    vec,
)

__all__ = [
    "CapabilityError",
    "DimensionError",
    "Infeasible",
    "LdltFactors",
    "LinearProgram",
    "Matrix",
    "NotPsd",
    "NotSymmetricError",
    "Optimal",
    "Psd",
    "Rational",
    "Unbounded",
    "Vector",
    "affine_rank",
    "feasible_point",
    "format_rational",
    "format_vector",
    "fourier_motzkin",
    "ldlt_psd",
    "lp_solve",
    "mat",
    "maximize",
    "nullspace",
    "q",
    "rank",
    "solve_affine",
    "vec",
]
