"""Solving sum_i lambda_i^q v_i = w for the unknowns lambda_i.

The map lambda -> sum lambda_i^q v_i is additive and q-semilinear, so the
solution set is an affine subspace.  Put mu_i = lambda_i^q in K^q.  Over
K = F_p(t_1..t_m) the field K is free over K^q on the monomials t^alpha,
0 <= alpha_j < q; splitting every coordinate along that basis turns the
system into an ordinary linear one over K^q, and pulling back through the
q-th root isomorphism K^q -> K gives a linear system for the lambda_i
themselves.  Over F_{p^k} the basis is {1} and the pull-back is the inverse
Frobenius.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import NoSolution, UnsupportedField, ValidationError
from .field import FieldDescriptor, RatElem
from .linalg import solve, sparse
from .poly import Poly


@dataclass(frozen=True)
class SemilinearSystem:
    field: FieldDescriptor
    q: int
    vectors: tuple          # each a dense tuple of FieldElem
    target: tuple

    def __post_init__(self):
        p, q = self.field.p, self.q
        while q % p == 0 and q > 1:
            q //= p
        if q != 1 or self.q < p:
            raise ValidationError(f"q = {self.q} is not a positive power of {p}")
        n = len(self.target)
        if any(len(v) != n for v in self.vectors):
            raise ValidationError("all vectors must have the same length")


def _split(x, q):
    """Coordinates of x in the basis {t^alpha} over K^q, pulled back to K.

    Returns ``{alpha: coefficient in K}`` with x = sum t^alpha * c_alpha^q.
    """
    f = x.field
    if f.kind == "rational":
        # x = N D^(q-1) / D^q
        num = x.num * (x.den ** (q - 1)) if not x.den.is_one() else x.num
        num.check_degree(f.degree_limit * q)
        parts = num.split_residues(q)
        one = Poly.const(f.p, f.nvars, 1)
        return {a: RatElem(f, P, x.den if not x.den.is_one() else one)
                for a, P in parts.items()}
    e = 0
    while f.p ** e < q:
        e += 1
    return {(): x.pth_root(e)} if not x.is_zero() else {}


def frobenius_solve(system: SemilinearSystem):
    """Full solution set of sum_i lambda_i^q v_i = w.

    Returns ``(particular, homogeneous_basis)``; raises NoSolution when the
    target is not attained.
    """
    return frobenius_solve_sparse(system.field, system.q,
                                  [sparse(v) for v in system.vectors], sparse(system.target))


def frobenius_solve_sparse(f: FieldDescriptor, q: int, vectors: Sequence[dict], target: dict):
    """:func:`frobenius_solve` on sparse ``{row: FieldElem}`` columns and target."""
    if f.kind not in ("prime", "finite", "rational"):
        raise UnsupportedField(f"frobenius_solve does not support {f}")

    def split_vec(v):
        out = {}
        for r, x in v.items():
            if not x.is_zero():
                for a, c in _split(x, q).items():
                    out[(r, a)] = c
        return out

    columns = [split_vec(v) for v in vectors]
    target = split_vec(target)
    # give the equations a deterministic integer order
    keys = sorted({k for col in columns for k in col} | set(target))
    index = {k: i for i, k in enumerate(keys)}
    columns = [{index[k]: v for k, v in col.items()} for col in columns]
    target = {index[k]: v for k, v in target.items()}
    particular, kernel = solve(columns, target, f)
    if particular is None:
        raise NoSolution("target is not in the image of the semilinear map")
    return particular, kernel


def semilinear_solve(field, q, vectors: Sequence, target: Sequence):
    """Convenience wrapper building the :class:`SemilinearSystem`."""
    return frobenius_solve(SemilinearSystem(field, q, tuple(map(tuple, vectors)), tuple(target)))
