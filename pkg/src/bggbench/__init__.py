"""Exact-arithmetic workbench for exterior-algebra modules, BGG
linearizations, and spectral sequences of m-adically filtered complexes."""

from .fields import QQ, FieldError, PrimeField, RationalField, field_from_tag
from .linalg import (
    Matrix,
    MonomialBasis,
    mat_kernel_basis,
    mat_rank,
    mat_rref,
    monomial_basis,
    solve_in_image,
)

__all__ = [
    "QQ",
    "FieldError",
    "PrimeField",
    "RationalField",
    "field_from_tag",
    "Matrix",
    "MonomialBasis",
    "mat_kernel_basis",
    "mat_rank",
    "mat_rref",
    "monomial_basis",
    "solve_in_image",
]
