"""Finite-dimensional commutative unital algebras and their elements.

An algebra is anything exposing ``base``, ``dim``, ``unit`` (a sparse vector)
and ``basis_product(i, j)`` (the sparse vector of b_i * b_j).  Arithmetic on
elements, subspaces and every operation in :mod:`insepdim.fdalg.ops` only
use that surface, so towers of field extensions (which compute products by
reducing monomials instead of reading a table) plug in unchanged.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from ..errors import BadUnit, NotAssociative, NotCommutative, ValidationError
from ..exact import FieldDescriptor
from ..exact.linalg import Echelon, Vec, dense, sparse, vec_add, vec_scale


class Algebra:
    """Shared multiplication machinery; subclasses provide basis products."""

    base: FieldDescriptor
    dim: int
    unit: Vec

    def __init__(self):
        self._frob_cache: dict = {}

    def basis_product(self, i: int, j: int) -> Vec:
        raise NotImplementedError

    def basis_label(self, i: int) -> str:
        return f"b{i}"

    def mul(self, a: Vec, b: Vec) -> Vec:
        if not a or not b:
            return {}
        if len(a) > len(b):
            a, b = b, a
        out: Vec = {}
        for i, x in a.items():
            for j, y in b.items():
                xy = x * y
                for h, c in self.basis_product(i, j).items():
                    t = c * xy
                    w = out.get(h)
                    w = t if w is None else w + t
                    if w.is_zero():
                        del out[h]
                    else:
                        out[h] = w
        return out

    def power(self, a: Vec, n: int) -> Vec:
        result = dict(self.unit)
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def basis_frobenius(self, i: int) -> Vec:
        """b_i^p, cached."""
        v = self._frob_cache.get(i)
        if v is None:
            v = self.power({i: self.base.one()}, self.base.p)
            self._frob_cache[i] = v
        return v

    def frob(self, a: Vec, e: int = 1) -> Vec:
        """a^(p^e), using (sum c_i b_i)^p = sum c_i^p b_i^p (commutative, char p)."""
        for _ in range(e):
            out: Vec = {}
            for i, c in a.items():
                cp = c.frobenius(1)
                unit = cp.is_one()
                for h, x in self.basis_frobenius(i).items():
                    t = x if unit else x * cp
                    w = out.get(h)
                    w = t if w is None else w + t
                    if w.is_zero():
                        del out[h]
                    else:
                        out[h] = w
            a = out
        return a

    # element constructors

    def elem(self, coords) -> "AlgebraElem":
        if isinstance(coords, dict):
            return AlgebraElem(self, {i: self.base(c) for i, c in coords.items()
                                      if not self.base(c).is_zero()})
        coords = list(coords)
        if len(coords) != self.dim:
            raise ValidationError(f"expected {self.dim} coordinates, got {len(coords)}")
        return AlgebraElem(self, sparse(self.base(c) for c in coords))

    def basis_elem(self, i: int) -> "AlgebraElem":
        return AlgebraElem(self, {i: self.base.one()})

    def basis(self) -> list["AlgebraElem"]:
        return [self.basis_elem(i) for i in range(self.dim)]

    def one(self) -> "AlgebraElem":
        return AlgebraElem(self, dict(self.unit))

    def zero(self) -> "AlgebraElem":
        return AlgebraElem(self, {})

    def scalar(self, c) -> "AlgebraElem":
        return AlgebraElem(self, vec_scale(self.unit, self.base(c)))


class StructureConstants(Algebra):
    """An algebra given by its table c[i][j][h]: b_i b_j = sum_h c[i][j][h] b_h."""

    def __init__(self, base: FieldDescriptor, dim: int, products: Sequence[Sequence[Vec]],
                 unit: Vec, labels: Sequence[str] | None = None):
        super().__init__()
        self.base = base
        self.dim = dim
        self._products = products
        self.unit = unit
        self.labels = list(labels) if labels is not None else None

    def basis_product(self, i, j):
        return self._products[i][j]

    def basis_label(self, i):
        return self.labels[i] if self.labels else f"b{i}"

    def c(self, i, j, h):
        return self._products[i][j].get(h, self.base.zero())

    @property
    def table(self) -> list:
        """Dense nested table c[i][j][h]."""
        z = self.base.zero()
        n = self.dim
        return [[dense(self._products[i][j], n, z) for j in range(n)] for i in range(n)]

    @property
    def unit_coords(self) -> tuple:
        return dense(self.unit, self.dim, self.base.zero())

    def __eq__(self, other):
        if not isinstance(other, StructureConstants):
            return NotImplemented
        return (self.base == other.base and self.dim == other.dim
                and self.unit == other.unit
                and all(self._products[i][j] == other._products[i][j]
                        for i in range(self.dim) for j in range(self.dim)))

    __hash__ = None

    def __repr__(self):
        return f"<StructureConstants dim={self.dim} over {self.base}>"


def check_axioms(A: Algebra, *, triples: str | int = "all", seed: int = 0) -> None:
    """Verify commutativity, the unit and associativity.

    ``triples="all"`` checks every basis triple (O(n^4) field operations);
    an integer checks that many random triples instead.
    """
    n = A.dim
    for i in range(n):
        for j in range(i + 1, n):
            a, b = A.basis_product(i, j), A.basis_product(j, i)
            if a != b:
                h = min(k for k in set(a) | set(b) if a.get(k) != b.get(k))
                raise NotCommutative(f"c[{i}][{j}][{h}] != c[{j}][{i}][{h}]", indices=(i, j, h))
    for i in range(n):
        if A.mul(A.unit, {i: A.base.one()}) != {i: A.base.one()}:
            raise BadUnit(f"unit * b{i} != b{i}", indices=(i,))
    if triples == "all":
        idx = [(i, j, h) for i in range(n) for j in range(n) for h in range(n)]
    else:
        rng = random.Random(seed)
        idx = [(rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(int(triples))]
    one = A.base.one()
    for i, j, h in idx:
        left = A.mul(A.basis_product(i, j), {h: one})
        right = A.mul({i: one}, A.basis_product(j, h))
        if left != right:
            raise NotAssociative(f"(b{i} b{j}) b{h} != b{i} (b{j} b{h})", indices=(i, j, h))


def make_algebra(table, unit, base: FieldDescriptor, *, labels=None,
                 check: str | int = "all") -> StructureConstants:
    """Validated algebra from a dense table ``table[i][j][h]`` and unit coordinates.

    Entries may be FieldElems, ints or expression strings.
    """
    n = len(table)
    if n < 1:
        raise ValidationError("an algebra needs dimension >= 1")
    if len(unit) != n:
        raise ValidationError(f"unit has {len(unit)} coordinates, expected {n}")
    products = []
    for i in range(n):
        if len(table[i]) != n:
            raise ValidationError(f"table row {i} has length {len(table[i])}, expected {n}")
        row = []
        for j in range(n):
            if len(table[i][j]) != n:
                raise ValidationError(f"table entry [{i}][{j}] has length {len(table[i][j])}")
            row.append(sparse(base(c) for c in table[i][j]))
        products.append(row)
    A = StructureConstants(base, n, products, sparse(base(c) for c in unit), labels)
    if check:
        check_axioms(A, triples=check)
    return A


def algebra_to_json(A: Algebra) -> dict:
    """Structure-constant document with a flat row-major table of expression strings."""
    n, z = A.dim, A.base.zero()
    table = [str(A.basis_product(i, j).get(h, z))
             for i in range(n) for j in range(n) for h in range(n)]
    return {"p": A.base.p, "base": A.base.to_json(), "dim": n,
            "unit": [str(c) for c in dense(A.unit, n, z)], "table": table}


def algebra_from_json(d: dict, *, check: str | int = "all") -> StructureConstants:
    try:
        base = FieldDescriptor.from_json(d["base"])
        n, flat, unit = int(d["dim"]), d["table"], d["unit"]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed algebra document: {exc}") from None
    if d.get("p", base.p) != base.p:
        raise ValidationError(f"p = {d['p']} disagrees with the base field {base}")
    if n < 1 or len(flat) != n ** 3:
        raise ValidationError(f"table has {len(flat)} entries, expected dim^3 = {n ** 3}")
    table = [[flat[(i * n + j) * n:(i * n + j + 1) * n] for j in range(n)] for i in range(n)]
    return make_algebra(table, unit, base, check=check)


def from_products(base, dim, product_fn, unit: Vec, labels=None) -> StructureConstants:
    """Table built from ``product_fn(i, j) -> Vec``; trusted, not validated."""
    products = [[None] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            v = product_fn(i, j)
            products[i][j] = v
            products[j][i] = v
    return StructureConstants(base, dim, products, unit, labels)


class AlgebraElem:
    __slots__ = ("algebra", "vec")

    def __init__(self, algebra: Algebra, vec: Vec):
        self.algebra = algebra
        self.vec = vec

    @property
    def coords(self) -> tuple:
        return dense(self.vec, self.algebra.dim, self.algebra.base.zero())

    def codes(self) -> tuple:
        """Coordinates as integer codes (finite base fields)."""
        return tuple(c.code() for c in self.coords)

    def _wrap(self, v):
        return AlgebraElem(self.algebra, v)

    def _other(self, other):
        if isinstance(other, AlgebraElem):
            return other.vec
        return vec_scale(self.algebra.unit, self.algebra.base(other))

    def __add__(self, other):
        return self._wrap(vec_add(self.vec, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(vec_add(self.vec, self._other(other), -self.algebra.base.one()))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self._wrap(vec_scale(self.vec, -self.algebra.base.one()))

    def __mul__(self, other):
        if isinstance(other, AlgebraElem):
            return self._wrap(self.algebra.mul(self.vec, other.vec))
        try:
            c = self.algebra.base(other)
        except Exception:
            return NotImplemented
        return self._wrap(vec_scale(self.vec, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, AlgebraElem):
            from .ops import inverse
            return self * inverse(other)
        return self * self.algebra.base(other).inv()

    def __rtruediv__(self, other):
        from .ops import inverse
        return inverse(self) * other

    def __pow__(self, n: int):
        if n < 0:
            from .ops import inverse
            return inverse(self) ** (-n)
        return self._wrap(self.algebra.power(self.vec, n))

    def frobenius(self, e: int = 1) -> "AlgebraElem":
        return self._wrap(self.algebra.frob(self.vec, e))

    def is_zero(self):
        return not self.vec

    def __bool__(self):
        return bool(self.vec)

    def __eq__(self, other):
        if isinstance(other, AlgebraElem):
            return self.algebra is other.algebra and self.vec == other.vec
        if isinstance(other, int):
            return self.vec == self._other(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted((i, hash(c)) for i, c in self.vec.items())))

    def __str__(self):
        if not self.vec:
            return "0"
        parts = []
        for i in sorted(self.vec):
            c = self.vec[i]
            label = self.algebra.basis_label(i)
            cs = str(c)
            if label == "1":
                parts.append(cs if " " not in cs else f"({cs})")
            elif c.is_one():
                parts.append(label)
            else:
                parts.append(f"({cs})*{label}" if " " in cs else f"{cs}*{label}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<{self}>"


class Subspace:
    """A subspace of an algebra with its canonical reduced echelon basis."""

    __slots__ = ("algebra", "echelon")

    def __init__(self, algebra: Algebra, echelon: Echelon | None = None):
        self.algebra = algebra
        self.echelon = echelon if echelon is not None else Echelon()

    @classmethod
    def span(cls, algebra: Algebra, elems: Iterable) -> "Subspace":
        ech = Echelon()
        for x in elems:
            ech.insert(x.vec if isinstance(x, AlgebraElem) else x)
        return cls(algebra, ech)

    @property
    def dim(self) -> int:
        return self.echelon.rank

    @property
    def basis(self) -> list[AlgebraElem]:
        return [AlgebraElem(self.algebra, v) for v in self.echelon.basis()]

    def contains(self, x) -> bool:
        return self.echelon.contains(x.vec if isinstance(x, AlgebraElem) else x)

    __contains__ = contains

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.echelon.basis())

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.echelon.rows == other.echelon.rows

    __hash__ = None

    def __repr__(self):
        return f"<Subspace dim={self.dim} of {self.algebra!r}>"
