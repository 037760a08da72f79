"""Exact arithmetic in F_p, F_{p^k} and F_p(t_1, ..., t_m)."""

from .field import (
    FieldDescriptor, FieldElem, FpElem, FqElem, RatElem,
    prime_field, finite_field, rational_field, galois_field,
)
from .gf import is_prime, prime_factors
from .linalg import Echelon, solve
from .parse import parse_expression, parse_field_elem
from .poly import Poly, gcd, prs_gcd
from .semilinear import (SemilinearSystem, frobenius_solve, frobenius_solve_sparse,
                         semilinear_solve)


def inv(x: FieldElem) -> FieldElem:
    return x.inv()


def frobenius(x: FieldElem, e: int = 1) -> FieldElem:
    return x.frobenius(e)


def pth_root(x: FieldElem, e: int = 1) -> FieldElem:
    return x.pth_root(e)


__all__ = [
    "FieldDescriptor", "FieldElem", "FpElem", "FqElem", "RatElem",
    "prime_field", "finite_field", "rational_field", "galois_field",
    "Echelon", "solve", "parse_expression", "parse_field_elem", "Poly", "gcd", "prs_gcd",
    "SemilinearSystem", "frobenius_solve", "frobenius_solve_sparse", "semilinear_solve",
    "inv", "frobenius", "pth_root", "is_prime", "prime_factors",
]
