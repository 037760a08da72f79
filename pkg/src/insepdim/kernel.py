"""Vectorized arithmetic over F_q for exhaustive enumeration.

Field elements are integer codes (see :mod:`insepdim.exact.gf`); arithmetic
goes through q x q lookup tables.  An algebra over F_q becomes a list of
nonzero structure constants (i, j, h, c) acting on arrays of shape (N, dim)
that hold N elements at once.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ResourceGuard, UnsupportedField

DEFAULT_GUARD = 2 ** 24
CHUNK = 1 << 16


class FqArith:
    def __init__(self, field):
        if not field.is_finite:
            raise UnsupportedField(f"{field} is not finite")
        q = field.order
        if q > 1024:
            raise ResourceGuard(f"lookup tables for F_{q} are too large")
        self.field = field
        self.q = q
        self.p = field.p
        elems = list(field.elements())
        self.add = np.array([[(a + b).code() for b in elems] for a in elems], dtype=np.int64)
        self.mul = np.array([[(a * b).code() for b in elems] for a in elems], dtype=np.int64)
        self.neg = np.array([(-a).code() for a in elems], dtype=np.int64)
        self.inv = np.array([a.inv().code() if a else 0 for a in elems], dtype=np.int64)


@lru_cache(maxsize=32)
def arith(field) -> FqArith:
    return FqArith(field)


class BatchAlgebra:
    """Structure constants of an algebra over F_q acting on batches of elements."""

    def __init__(self, A):
        self.A = A
        self.F = arith(A.base)
        self.dim = A.dim
        terms = []
        for i in range(A.dim):
            for j in range(A.dim):
                for h, c in A.basis_product(i, j).items():
                    terms.append((i, j, h, c.code()))
        self.terms = terms
        self.unit = np.zeros(A.dim, dtype=np.int64)
        for h, c in A.unit.items():
            self.unit[h] = c.code()

    def mul(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        add, mul = self.F.add, self.F.mul
        out = np.zeros(np.broadcast_shapes(X.shape, Y.shape), dtype=np.int64)
        cache = {}
        for i, j, h, c in self.terms:
            t = cache.get((i, j))
            if t is None:
                t = mul[X[..., i], Y[..., j]]
                cache[(i, j)] = t
            if c != 1:
                t = mul[c, t]
            out[..., h] = add[out[..., h], t]
        return out

    def power(self, X: np.ndarray, n: int) -> np.ndarray:
        result = np.broadcast_to(self.unit, X.shape).copy()
        base = X
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result


def check_guard(count: int, guard: int, what: str) -> None:
    if count > guard:
        raise ResourceGuard(f"{what}: {count} candidates exceed the enumeration guard {guard}")


def decode(indices: np.ndarray, q: int, width: int) -> np.ndarray:
    """Rows of base-q digits, most significant first (lexicographic order)."""
    out = np.empty((len(indices), width), dtype=np.int64)
    rest = indices.copy()
    for k in range(width - 1, -1, -1):
        out[:, k] = rest % q
        rest //= q
    return out


def all_elements(q: int, width: int, chunk: int = CHUNK):
    """Yield (start, codes) covering all q**width coordinate vectors in order."""
    total = q ** width
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        yield start, decode(idx, q, width)


def batch_rank(M: np.ndarray, F: FqArith) -> np.ndarray:
    """Ranks of a stack of matrices, shape (N, rows, cols), over F_q."""
    M = M.copy()
    N, R, C = M.shape
    rank = np.zeros(N, dtype=np.int64)
    ar = np.arange(N)
    for col in range(C):
        # candidate pivot rows are those at index >= current rank
        rows = np.arange(R)[None, :]
        usable = (M[:, :, col] != 0) & (rows >= rank[:, None])
        has = usable.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(usable, axis=1)
        sel = ar[has]
        pr, rk = piv[has], rank[has]
        # swap pivot row into position rank
        tmp = M[sel, pr].copy()
        M[sel, pr] = M[sel, rk]
        M[sel, rk] = tmp
        # normalize and eliminate below
        inv = F.inv[M[sel, rk, col]]
        M[sel, rk] = F.mul[inv[:, None], M[sel, rk]]
        pivrow = M[sel, rk]
        for r in range(R):
            below = rk < r
            if not below.any():
                continue
            s = sel[below]
            f = M[s, r, col]
            nz = f != 0
            if not nz.any():
                continue
            s, f = s[nz], f[nz]
            prow = pivrow[below][nz]
            M[s, r] = F.add[M[s, r], F.mul[F.neg[f][:, None], prow]]
        rank[has] += 1
    return rank


def matvec(M: np.ndarray, v: np.ndarray, F: FqArith) -> np.ndarray:
    """M @ v over F_q for a single (R, C) matrix and (C,) vector."""
    out = np.zeros(M.shape[0], dtype=np.int64)
    for c in range(M.shape[1]):
        if v[c]:
            out = F.add[out, F.mul[M[:, c], v[c]]]
    return out


def matmul(A: np.ndarray, B: np.ndarray, F: FqArith) -> np.ndarray:
    """A @ B over F_q for single matrices."""
    return np.stack([matvec(A, B[:, j], F) for j in range(B.shape[1])], axis=1)
