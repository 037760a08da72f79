"""Sparse exact linear algebra over any supported field.

Vectors are dicts ``{index: nonzero FieldElem}``.  :class:`Echelon` exposes a
basis in reduced row-echelon form (pivot = lowest index, pivot entry 1, every
pivot column zero in all other rows), so the basis of a subspace is canonical
and independent of insertion order.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Sequence

Vec = dict


def vec_add(a: Vec, b: Vec, scale=None) -> Vec:
    """a + scale*b (scale defaults to 1)."""
    out = dict(a)
    for i, v in b.items():
        if scale is not None:
            v = v * scale
        w = out.get(i)
        w = v if w is None else w + v
        if w.is_zero():
            out.pop(i, None)
        else:
            out[i] = w
    return out


def vec_scale(a: Vec, c) -> Vec:
    if c.is_zero():
        return {}
    return {i: v * c for i, v in a.items()}


def dense(v: Vec, n: int, zero) -> tuple:
    return tuple(v.get(i, zero) for i in range(n))


def sparse(values: Iterable) -> Vec:
    return {i: x for i, x in enumerate(values) if not x.is_zero()}


class Echelon:
    """Incrementally maintained echelon basis.

    Rows are stored in semi-echelon form (distinct pivots, pivot entry 1, no
    entries left of the pivot), which makes insertion cost independent of the
    rank.  :attr:`rows` gives the canonical reduced form, computed on demand.
    """

    __slots__ = ("_rows", "_rref")

    def __init__(self, vectors: Iterable[Vec] = ()):
        self._rows: dict[int, Vec] = {}
        self._rref: dict[int, Vec] | None = None
        for v in vectors:
            self.insert(v)

    def copy(self) -> "Echelon":
        e = Echelon()
        e._rows = dict(self._rows)
        e._rref = self._rref
        return e

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> dict[int, Vec]:
        """Reduced row-echelon rows keyed by pivot: every pivot column is zero elsewhere."""
        if self._rref is None:
            rref: dict[int, Vec] = {}
            for piv in sorted(self._rows, reverse=True):
                row = self._rows[piv]
                hits = [j for j in row if j != piv and j in rref]
                if hits:
                    row = dict(row)
                    for j in hits:
                        c = row.pop(j)
                        for h, x in rref[j].items():
                            if h == j:
                                continue
                            w = row.get(h)
                            t = x * c
                            w = -t if w is None else w - t
                            if w.is_zero():
                                row.pop(h, None)
                            else:
                                row[h] = w
                rref[piv] = row
            self._rref = rref
        return self._rref

    def reduce(self, v: Vec) -> Vec:
        """Remainder of v modulo the span; zero iff v lies in the span."""
        rows = self._rows
        heap = [i for i in v if i in rows]
        if not heap:
            return v
        heapq.heapify(heap)
        out = dict(v)
        while heap:
            i = heapq.heappop(heap)
            c = out.get(i)
            if c is None:
                continue
            for j, x in rows[i].items():
                w = out.get(j)
                t = x * c
                if w is None:
                    out[j] = -t
                    if j in rows:
                        heapq.heappush(heap, j)
                else:
                    w = w - t
                    if w.is_zero():
                        del out[j]
                    else:
                        out[j] = w
        return out

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def insert(self, v: Vec) -> bool:
        """Add v to the span; True if the rank grew."""
        r = self.reduce(v)
        if not r:
            return False
        piv = min(r)
        inv = r[piv].inv()
        if not inv.is_one():
            r = {i: x * inv for i, x in r.items()}
        self._rows[piv] = r
        self._rref = None
        return True

    def basis(self) -> list[Vec]:
        rows = self.rows
        return [rows[k] for k in sorted(rows)]

    def pivots(self) -> list[int]:
        return sorted(self._rows)


def solve(columns: Sequence[Vec], target: Vec, field):
    """Solve sum_j x_j * columns[j] = target.

    Returns ``(particular, kernel)`` where ``particular`` is a dense tuple or
    None when the system is inconsistent, and ``kernel`` is a list of dense
    tuples spanning the homogeneous solutions.  Free variables are set to 0 in
    the particular solution.
    """
    n = len(columns)
    rhs = n
    eqs: dict = {}
    for j, col in enumerate(columns):
        for r, v in col.items():
            eqs.setdefault(r, {})[j] = v
    for r, v in target.items():
        eqs.setdefault(r, {})[rhs] = v
    ech = Echelon(eqs[r] for r in sorted(eqs))
    zero, one = field.zero(), field.one()
    pivots = ech.pivots()
    free = [j for j in range(n) if j not in ech.rows]
    kernel = []
    for f in free:
        x = [zero] * n
        x[f] = one
        for pcol in pivots:
            if pcol == rhs:
                continue
            c = ech.rows[pcol].get(f)
            if c is not None:
                x[pcol] = -c
        kernel.append(tuple(x))
    if rhs in ech.rows:
        return None, kernel
    x = [zero] * n
    for pcol in pivots:
        c = ech.rows[pcol].get(rhs)
        if c is not None:
            x[pcol] = c
    return tuple(x), kernel


def rank(rows: Iterable[Vec]) -> int:
    return Echelon(rows).rank
