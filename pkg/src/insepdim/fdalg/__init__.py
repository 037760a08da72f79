"""Finite-dimensional commutative algebras over exact fields."""

from .algebra import (Algebra, AlgebraElem, StructureConstants, Subspace, algebra_from_json,
                      algebra_to_json, check_axioms, from_products, make_algebra)
from .ops import (Filtration, Idempotents, base_change, idempotents, inverse, is_invertible,
                  is_local, lmul_matrix, make_embedding, nilradical, ppower_filtration,
                  structure_constant_descent, subalgebra_closure, tensor,
                  to_structure_constants)

__all__ = [
    "algebra_from_json", "algebra_to_json",
    "Algebra", "AlgebraElem", "StructureConstants", "Subspace", "check_axioms",
    "from_products", "make_algebra", "Filtration", "Idempotents", "base_change",
    "idempotents", "inverse", "is_invertible", "is_local", "lmul_matrix",
    "make_embedding", "nilradical", "ppower_filtration", "structure_constant_descent",
    "subalgebra_closure", "tensor", "to_structure_constants",
]
