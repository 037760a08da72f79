"""Operations on finite-dimensional algebras: linear algebra, closures,
nilradical, idempotents, the p-power filtration and base change."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .. import kernel
from ..errors import (BadEmbedding, DivisionByZero, NotLambdaForm, NotLocal,
                      UnsupportedField, ValidationError)
from ..exact import FieldDescriptor, FieldElem, Echelon, solve
from ..exact.semilinear import SemilinearSystem, frobenius_solve
from ..exact.linalg import dense, sparse
from .algebra import Algebra, AlgebraElem, StructureConstants, Subspace, from_products


# linear algebra

def lmul_matrix(a: AlgebraElem) -> list[list[FieldElem]]:
    """Matrix of x -> a*x; column j holds the coordinates of a*b_j."""
    A = a.algebra
    z = A.base.zero()
    cols = [dense(A.mul(a.vec, {j: A.base.one()}), A.dim, z) for j in range(A.dim)]
    return [[cols[j][i] for j in range(A.dim)] for i in range(A.dim)]


def is_invertible(a: AlgebraElem) -> bool:
    A = a.algebra
    one = A.base.one()
    cols = (A.mul(a.vec, {j: one}) for j in range(A.dim))
    return Echelon(cols).rank == A.dim


def inverse(a: AlgebraElem) -> AlgebraElem:
    """Solve a*x = 1 by linear algebra on the left multiplication map."""
    A = a.algebra
    one = A.base.one()
    cols = [A.mul(a.vec, {j: one}) for j in range(A.dim)]
    x, kernel_ = solve(cols, A.unit, A.base)
    if x is None or kernel_:
        raise DivisionByZero(f"{a} is not invertible")
    return AlgebraElem(A, sparse(x))


# subalgebras

def subalgebra_closure(A: Algebra, gens: Iterable, with_unit: bool = True,
                       start: Subspace | None = None) -> Subspace:
    """Smallest subspace containing ``gens`` (and 1) closed under products.

    Every vector entering the span is multiplied by every generator, so the
    span is stable under multiplication by the generators and hence by the
    algebra they generate.  With ``start`` (a subalgebra S) the result is
    S[gens]: the rows of S only need multiplying by the new generators.
    """
    gens = [g.vec if isinstance(g, AlgebraElem) else g for g in gens]
    ech = start.echelon.copy() if start is not None else Echelon()
    queue = []
    if start is not None:
        queue.extend(start.echelon.basis())
    if with_unit and ech.insert(A.unit):
        queue.append(A.unit)
    for g in gens:
        if ech.insert(g):
            queue.append(g)
    while queue:
        v = queue.pop()
        for g in gens:
            w = A.mul(v, g)
            if w and ech.insert(w):
                queue.append(w)
    return Subspace(A, ech)


def _nil_exponent(p: int, dim: int) -> int:
    N = 1
    while p ** N < dim:
        N += 1
    return N


def nilradical(A: Algebra) -> Subspace:
    """{x : x^(p^N) = 0} for p^N >= dim, as a single semilinear solve."""
    p = A.base.p
    N = _nil_exponent(p, A.dim)
    z = A.base.zero()
    one = A.base.one()
    vectors = [dense(A.frob({i: one}, N), A.dim, z) for i in range(A.dim)]
    _, homog = frobenius_solve(SemilinearSystem(A.base, p ** N, tuple(vectors),
                                                (z,) * A.dim))
    N_ = Subspace.span(A, (sparse(h) for h in homog))
    for v in N_.echelon.basis():
        for j in range(A.dim):
            if not N_.contains(A.mul(v, {j: one})):
                raise AssertionError("nilradical is not an ideal")
    return N_


def is_local(A: Algebra) -> bool:
    """Local with residue field the base field: nilradical of codimension 1."""
    return nilradical(A).dim == A.dim - 1


# idempotents (finite base fields only)

@dataclass
class Idempotents:
    all: list
    minimal: list

    def __iter__(self):
        return iter(self.all)

    def __len__(self):
        return len(self.all)


def idempotents(A: StructureConstants, guard: int = kernel.DEFAULT_GUARD) -> Idempotents:
    """Exhaustive list of e with e^2 = e, in coordinate-tuple order."""
    if not A.base.is_finite:
        raise UnsupportedField("idempotent search needs a finite base field")
    q = A.base.order
    kernel.check_guard(q ** A.dim, guard, "idempotent search")
    B = kernel.BatchAlgebra(A)
    found = []
    for _, X in kernel.all_elements(q, A.dim):
        hit = (B.mul(X, X) == X).all(axis=1)
        found.extend(X[hit].tolist())
    elems = [A.elem([A.base.from_code(c) for c in row]) for row in found]
    nonzero = [e for e in elems if e]
    table = {x.codes(): x for x in elems}
    decomposable = set()
    for i, a in enumerate(nonzero):
        for b in nonzero[i:]:
            if not (a * b):
                s = a + b
                if s.codes() in table:
                    decomposable.add(s.codes())
    minimal = [e for e in nonzero if e.codes() not in decomposable]
    return Idempotents(elems, minimal)


# p-power filtration

@dataclass(frozen=True)
class Filtration:
    dims: tuple[int, ...]
    type: tuple[int, ...]


def _log_p(p, n):
    k = 0
    while n % p == 0 and n > 1:
        n //= p
        k += 1
    return k if n == 1 else None


def ppower_filtration(A: Algebra, check_local: bool = True) -> Filtration:
    """Dimensions d_j of the subalgebras generated by the p^j-th powers.

    For Lambda_e, d_j / d_{j+1} = p^{#{i : e_i > j}}, which recovers e.
    """
    if check_local and not is_local(A):
        raise NotLocal("algebra is not local with residue field the base field")
    p = A.base.p
    one = A.base.one()
    dims = []
    j = 0
    while True:
        gens = [A.frob({i: one}, j) for i in range(A.dim)]
        d = subalgebra_closure(A, gens, with_unit=True).dim
        dims.append(d)
        if d == 1:
            break
        if len(dims) > 1 and d == dims[-2]:
            raise NotLambdaForm(f"p-power filtration stalls at dimension {d}")
        j += 1
    ms = []
    for a, b in zip(dims, dims[1:]):
        if a % b:
            raise NotLambdaForm(f"filtration dimensions {dims} are not nested by p-powers")
        m = _log_p(p, a // b)
        if m is None:
            raise NotLambdaForm(f"ratio {a // b} in {dims} is not a power of {p}")
        ms.append(m)
    if any(x < y for x, y in zip(ms, ms[1:])):
        raise NotLambdaForm(f"filtration {dims} is inconsistent with any type")
    r = ms[0] if ms else 0
    etype = tuple(sum(1 for m in ms if m >= i) for i in range(1, r + 1))
    return Filtration(tuple(dims), etype)


# base change

def make_embedding(source: FieldDescriptor, target: FieldDescriptor,
                   images: dict | None = None) -> Callable[[FieldElem], FieldElem]:
    """Field embedding source -> target.

    ``images`` maps variable names (rational source) or ``"g"`` (finite
    source) to target elements or expression strings.  Missing images
    default to the identically named target variable, or to the smallest
    root of the modulus for finite fields.
    """
    if source.p != target.p:
        raise BadEmbedding(f"characteristics differ: {source} -> {target}")
    images = {k: target(v) for k, v in (images or {}).items()}
    if source.kind == "prime":
        return lambda x: target(x.value)
    if source.kind == "finite":
        if not target.is_finite or target.k % source.k:
            raise BadEmbedding(f"{source} does not embed in {target}")
        mod = source.modulus
        def minpoly(y):
            acc = target.zero()
            for c in reversed(mod):
                acc = acc * y + c
            return acc
        g = images.get("g")
        if g is None:
            g = next((y for y in target.elements() if not minpoly(y)), None)
        if g is None or minpoly(g):
            raise BadEmbedding(f"image of g is not a root of the modulus of {source}")
        def emb(x):
            acc = target.zero()
            for c in reversed(x.coeffs()):
                acc = acc * g + c
            return acc
        return emb
    if target.kind != "rational":
        raise BadEmbedding(f"{source} does not embed in {target}")
    imgs = []
    for name in source.vars:
        y = images.get(name)
        if y is None:
            if name not in target.vars:
                raise BadEmbedding(f"no image given for {name}")
            y = target.var(name)
        imgs.append(y)
    # spot-check: images must be nonconstant and pairwise distinct
    for y in imgs:
        if y.num.is_const() and y.den.is_const():
            raise BadEmbedding(f"image {y} is constant; the map would not be injective")
    if len(set(imgs)) != len(imgs):
        raise BadEmbedding("images of distinct variables coincide")
    return lambda x: x.substitute(imgs, target)


def base_change(A: Algebra, target: FieldDescriptor, embedding=None) -> StructureConstants:
    """The same structure constants pushed through a field embedding.

    ``embedding`` is a callable, a dict of generator images, or None for the
    default embedding given by :func:`make_embedding`.
    """
    if embedding is None or isinstance(embedding, dict):
        embedding = make_embedding(A.base, target, embedding)
    def push(v):
        out = {}
        for h, c in v.items():
            d = embedding(c)
            if not d.is_zero():
                out[h] = d
        return out
    labels = [A.basis_label(i) for i in range(A.dim)]
    return from_products(target, A.dim, lambda i, j: push(A.basis_product(i, j)),
                         push(A.unit), labels)


def to_structure_constants(A: Algebra) -> StructureConstants:
    labels = [A.basis_label(i) for i in range(A.dim)]
    return from_products(A.base, A.dim, A.basis_product, dict(A.unit), labels)


def tensor(A: Algebra, B: Algebra) -> StructureConstants:
    """A (x) B over their common base field; basis b_i (x) b'_j at index i*dim(B)+j."""
    if A.base != B.base:
        raise ValidationError("tensor factors must share the base field")
    n, m = A.dim, B.dim
    def prod(x, y):
        (i1, j1), (i2, j2) = divmod(x, m), divmod(y, m)
        out = {}
        for h1, c1 in A.basis_product(i1, i2).items():
            for h2, c2 in B.basis_product(j1, j2).items():
                out[h1 * m + h2] = c1 * c2
        return {k: v for k, v in out.items() if not v.is_zero()}
    unit = {i * m + j: a * b for i, a in A.unit.items() for j, b in B.unit.items()}
    labels = [f"{A.basis_label(i)}*{B.basis_label(j)}" for i in range(n) for j in range(m)]
    return from_products(A.base, n * m, prod, unit, labels)


def structure_constant_descent(A: StructureConstants) -> list[FieldElem]:
    """Distinct non-constant structure constants; they generate a field of definition."""
    seen = {}
    for i in range(A.dim):
        for j in range(i, A.dim):
            for c in A.basis_product(i, j).values():
                if not _is_constant(c):
                    seen.setdefault(str(c), c)
    for c in A.unit.values():
        if not _is_constant(c):
            seen.setdefault(str(c), c)
    return [seen[k] for k in sorted(seen)]


def _is_constant(c: FieldElem) -> bool:
    if c.field.kind == "rational":
        return c.num.is_const() and c.den.is_const()
    if c.field.kind == "finite":
        return c.code() < c.field.p
    return True
