"""Exact arithmetic over finite fields and dense linear algebra."""

from .field import Field, FieldElement, FieldSpec, clmul, get_field, gf, is_irreducible
from .linalg import Echelon, Matrix, SolveOutcome, mat_vec, minor, nullspace, rank, rref, solve_determined

__all__ = [
    "Echelon",
    "Field",
    "FieldElement",
    "FieldSpec",
    "Matrix",
    "SolveOutcome",
    "clmul",
    "get_field",
    "gf",
    "is_irreducible",
    "mat_vec",
    "minor",
    "nullspace",
    "rank",
    "rref",
    "solve_determined",
]
