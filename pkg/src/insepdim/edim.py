"""Closed-form essential dimension bookkeeping for truncated-algebra types.

tau(n, e) = n * sum_i p^{s_i - i e_i} is computed three ways: directly, as the
Pickert-coefficient count times n (the descent upper bound), and as
n * (dim Lie(G_e) - dim G_e) from the scheme dimensions (the lower bound).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SandwichMismatch, ValidationError
from .exact import is_prime
from .truncated import EType, SchemeDims, scheme_dims


def _check(n: int, p: int) -> None:
    if not is_prime(p):
        raise ValidationError(f"p = {p} is not prime")
    if n < 1:
        raise ValidationError(f"n = {n} must be >= 1")


def tau(n: int, e, p: int) -> int:
    e = EType.parse(e)
    _check(n, p)
    return n * sum(p ** (e.s(i) - i * e.e[i - 1]) for i in range(1, e.r + 1))


def upper_bound(n: int, e, p: int) -> int:
    """n times the number of indices (i, d) with 0 <= d_j < p^{e_j - e_i}, j < i."""
    e = EType.parse(e)
    _check(n, p)
    count = 0
    for i in range(1, e.r + 1):
        size = 1
        for j in range(i - 1):
            size *= p ** (e.e[j] - e.e[i - 1])
        count += size
    return n * count


def tv_lower(n: int, e, p: int) -> int:
    """n * (dim Lie(G_e) - dim G_e)."""
    _check(n, p)
    d = scheme_dims(e, p)
    return n * (d.dim_LieG - d.dim_G)


@dataclass(frozen=True)
class EdReport:
    p: int
    n: int
    e: EType
    tau: int
    upper: int
    tv_lower: int
    dims: SchemeDims
    ratio_bound_ok: bool

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "e": list(self.e.e), "tau": self.tau,
                "upper": self.upper, "tv_lower": self.tv_lower,
                "dim_G": self.n * self.dims.dim_G, "dim_LieG": self.n * self.dims.dim_LieG,
                "ratio_ok": self.ratio_bound_ok}


def ratio_ok(value: int, n: int, e: EType, p: int) -> bool:
    """value / (n p^{s_r}) <= r / p^r <= 1/p."""
    e = EType.parse(e)
    ratio = Fraction(value, n * e.dim(p))
    return ratio <= Fraction(e.r, p ** e.r) <= Fraction(1, p)


def ed_report(n: int, e, p: int) -> EdReport:
    e = EType.parse(e)
    t, u, lo = tau(n, e, p), upper_bound(n, e, p), tv_lower(n, e, p)
    if not t == u == lo:
        raise SandwichMismatch(f"tau = {t}, upper = {u}, tv_lower = {lo} for n={n}, e={e}, p={p}")
    return EdReport(p, n, e, t, u, lo, scheme_dims(e, p), ratio_ok(u, n, e, p))
