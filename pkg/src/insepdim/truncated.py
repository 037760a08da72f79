"""Truncated polynomial algebras and point counts of their automorphism schemes.

Lambda_e = k[x_1..x_r]/(x_1^{q_1}, ..., x_r^{q_r}) with q_i = p^{e_i}, and
Lambda_{n,e} its n-fold product.  Over a finite field F_q the schemes
alpha_{q_l} (Weil-restricted to Lambda_e), End(Lambda_e), Aut(Lambda_e) and
Aut(Lambda_{n,e}) have finitely many points; this module counts them by
exhaustive enumeration and compares against closed forms.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import kernel
from .errors import NotBlockPermuting, ResourceGuard, ValidationError, WreathMismatch
from .exact import FieldDescriptor, galois_field, is_prime, prime_factors
from .fdalg import AlgebraElem, StructureConstants, from_products

MAX_LAMBDA_DIM = 1 << 16


@dataclass(frozen=True)
class EType:
    """The exponent sequence e_1 >= ... >= e_r >= 1."""

    e: tuple[int, ...]

    def __post_init__(self):
        e = tuple(int(x) for x in self.e)
        object.__setattr__(self, "e", e)
        if not e:
            raise ValidationError("a type needs r >= 1 exponents")
        if any(x < 1 for x in e):
            raise ValidationError(f"exponents must be >= 1, got {e}")
        if any(a < b for a, b in zip(e, e[1:])):
            raise ValidationError(f"exponents must be nonincreasing, got {e}")

    @classmethod
    def parse(cls, text: str | Sequence[int] | "EType") -> "EType":
        if isinstance(text, EType):
            return text
        if isinstance(text, str):
            try:
                parts = [int(x) for x in text.replace(" ", "").strip("()").split(",") if x]
            except ValueError:
                raise ValidationError(f"cannot parse type {text!r}") from None
            return cls(tuple(parts))
        return cls(tuple(text))

    @property
    def r(self) -> int:
        return len(self.e)

    def s(self, i: int) -> int:
        """s_i = e_1 + ... + e_i (1-based; s_0 = 0)."""
        return sum(self.e[:i])

    def q(self, i: int, p: int) -> int:
        return p ** self.e[i - 1]

    def qs(self, p: int) -> tuple[int, ...]:
        return tuple(p ** x for x in self.e)

    def dim(self, p: int) -> int:
        return p ** self.s(self.r)

    def pickert_terms(self, p: int) -> list[int]:
        """p^{s_i - i e_i} for i = 1..r: the number of coefficients at level i."""
        return [p ** (self.s(i) - i * self.e[i - 1]) for i in range(1, self.r + 1)]

    def __iter__(self):
        return iter(self.e)

    def __len__(self):
        return len(self.e)

    def __str__(self):
        return "(" + ",".join(map(str, self.e)) + ")"


def all_types(max_r: int, max_e1: int) -> list[EType]:
    out = []
    for r in range(1, max_r + 1):
        for combo in itertools.combinations_with_replacement(range(max_e1, 0, -1), r):
            out.append(EType(combo))
    return out


# monomial bookkeeping

def monomials(qs: Sequence[int]) -> list[tuple[int, ...]]:
    """Exponent vectors 0 <= a_i < q_i in lexicographic order (x_1 most significant)."""
    return list(itertools.product(*(range(q) for q in qs)))


def mono_index(a: Sequence[int], qs: Sequence[int]) -> int:
    idx = 0
    for x, q in zip(a, qs):
        idx = idx * q + x
    return idx


def mono_label(a: Sequence[int], names: Sequence[str]) -> str:
    parts = [n if x == 1 else f"{n}^{x}" for n, x in zip(names, a) if x]
    return "*".join(parts) or "1"


def var_names(r: int) -> list[str]:
    return ["x"] if r == 1 else [f"x{i}" for i in range(1, r + 1)]


def lambda_algebra(n: int, e: EType | Sequence[int] | str, base: FieldDescriptor,
                   max_dim: int = MAX_LAMBDA_DIM) -> StructureConstants:
    """Lambda_{n,e} over ``base``; basis index = block * p^{s_r} + monomial index."""
    e = EType.parse(e)
    if n < 1:
        raise ValidationError("n must be >= 1")
    p = base.p
    qs = e.qs(p)
    D = e.dim(p)
    if n * D > max_dim:
        raise ResourceGuard(f"Lambda_{{{n},{e}}} has dimension {n * D} > {max_dim}")
    monos = monomials(qs)
    one = base.one()

    def prod(i, j):
        bi, ai = divmod(i, D)
        bj, aj = divmod(j, D)
        if bi != bj:
            return {}
        a, b = monos[ai], monos[aj]
        c = tuple(x + y for x, y in zip(a, b))
        if any(x >= q for x, q in zip(c, qs)):
            return {}
        return {bi * D + mono_index(c, qs): one}

    names = var_names(e.r)
    labels = []
    for b in range(n):
        for a in monos:
            lab = mono_label(a, names)
            labels.append(lab if n == 1 else f"{lab}@{b + 1}")
    unit = {b * D: one for b in range(n)}
    return from_products(base, n * D, prod, unit, labels)


# dimensions

@dataclass(frozen=True)
class SchemeDims:
    dim_X: int
    dim_factor: tuple[int, ...]
    dim_tangent: int
    dim_G: int
    dim_LieG: int

    def to_json(self) -> dict:
        return {"dim_X": self.dim_X, "dim_factor": list(self.dim_factor),
                "dim_tangent": self.dim_tangent, "dim_G": self.dim_G,
                "dim_LieG": self.dim_LieG}


def scheme_dims(e, p: int, n: int = 1) -> SchemeDims:
    """Closed-form dimensions of End(Lambda_e), its factors, G_e and Lie(G_e).

    With n > 1 the group and Lie algebra dimensions are those of G_{n,e}
    (n times the single-block values); dim_X and dim_factor stay per block.
    """
    e = EType.parse(e)
    if not is_prime(p):
        raise ValidationError(f"p = {p} is not prime")
    top = e.dim(p)
    factor = tuple(top - t for t in e.pickert_terms(p))
    dim_X = sum(factor)
    tangent = e.r * top
    return SchemeDims(dim_X, factor, tangent, n * dim_X, n * tangent)


# point counting

def _prime_of(q: int) -> int:
    if q < 2:
        raise ValidationError(f"q = {q} is not a prime power")
    ps = prime_factors(q)
    if len(ps) != 1:
        raise ValidationError(f"q = {q} is not a prime power")
    return ps[0]


def _check_q(p: int, q: int) -> None:
    if _prime_of(q) != p:
        raise ValidationError(f"q = {q} is not a power of p = {p}")


@dataclass(frozen=True)
class PointCount:
    p: int
    q: int
    e: EType
    scheme: str
    count: int | None
    closed_form: int
    l: int | None = None
    n: int | None = None

    @property
    def match(self) -> bool:
        return self.count is not None and self.count == self.closed_form

    def to_json(self) -> dict:
        out = {"p": self.p, "q": self.q, "e": list(self.e.e), "scheme": self.scheme,
               "count": self.count, "closed_form": self.closed_form, "match": self.match}
        if self.l is not None:
            out["l"] = self.l
        if self.n is not None:
            out["n"] = self.n
        if self.count is None:
            out["formula_only"] = True
        return out


class _Setup:
    """Lambda_e over F_q with its batched arithmetic."""

    def __init__(self, e: EType, q: int):
        self.e = e
        self.q = q
        self.p = _prime_of(q)
        self.field = galois_field(q)
        self.D = e.dim(self.p)
        self.A = lambda_algebra(1, e, self.field)
        self.B = kernel.BatchAlgebra(self.A)
        self.F = self.B.F


def _parallel_sum(fn, chunks, workers: int):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, chunks))
    return [fn(c) for c in chunks]


def _nil_mask(S: _Setup, exponent: int, workers: int = 1) -> np.ndarray:
    """Boolean mask over all q^D elements (lex order): X^exponent == 0."""
    total = S.q ** S.D
    starts = list(range(0, total, kernel.CHUNK))

    def run(start):
        idx = np.arange(start, min(total, start + kernel.CHUNK), dtype=np.int64)
        X = kernel.decode(idx, S.q, S.D)
        return ~S.B.power(X, exponent).any(axis=1)

    return np.concatenate(_parallel_sum(run, starts, workers))


def alpha_closed_form(e, l: int, q: int) -> int:
    e = EType.parse(e)
    return q ** scheme_dims(e, _prime_of(q)).dim_factor[l - 1]


def alpha_points(e, l: int, q: int, *, guard: int = kernel.DEFAULT_GUARD,
                 mode: str = "enumerate", workers: int = 1) -> PointCount:
    """|{X in Lambda_e (x) F_q : X^{q_l} = 0}| by enumeration, with the closed form."""
    e = EType.parse(e)
    p = _prime_of(q)
    if not 1 <= l <= e.r:
        raise ValidationError(f"l = {l} outside 1..{e.r}")
    closed = alpha_closed_form(e, l, q)
    if mode == "closed":
        return PointCount(p, q, e, "alpha", None, closed, l=l)
    kernel.check_guard(q ** e.dim(p), guard, "alpha enumeration")
    S = _Setup(e, q)
    count = int(_nil_mask(S, e.q(l, p), workers).sum())
    return PointCount(p, q, e, "alpha", count, closed, l=l)


def iter_alpha(e, l: int, q: int, guard: int = kernel.DEFAULT_GUARD) -> Iterator[AlgebraElem]:
    e = EType.parse(e)
    p = _prime_of(q)
    kernel.check_guard(q ** e.dim(p), guard, "alpha enumeration")
    S = _Setup(e, q)
    mask = _nil_mask(S, e.q(l, p))
    for idx in np.flatnonzero(mask):
        yield _elem(S, int(idx))


def _elem(S: _Setup, idx: int) -> AlgebraElem:
    codes = kernel.decode(np.array([idx]), S.q, S.D)[0]
    return S.A.elem([S.field.from_code(int(c)) for c in codes])


def _factor_masks(S: _Setup, workers: int) -> list[np.ndarray]:
    cache = {}
    out = []
    for i in range(1, S.e.r + 1):
        qi = S.e.q(i, S.p)
        if qi not in cache:
            cache[qi] = _nil_mask(S, qi, workers)
        out.append(cache[qi])
    return out


def end_closed_form(e, q: int) -> int:
    e = EType.parse(e)
    return q ** scheme_dims(e, _prime_of(q)).dim_X


def end_points(e, q: int, *, guard: int = kernel.DEFAULT_GUARD, mode: str = "enumerate",
               workers: int = 1) -> PointCount:
    """Endomorphisms counted as tuples (F_1..F_r) with F_i^{q_i} = 0.

    Every r-tuple of elements is visited (in lexicographic order); the test
    F_i^{q_i} = 0 is evaluated once per element and looked up per tuple.
    """
    e = EType.parse(e)
    p = _prime_of(q)
    closed = end_closed_form(e, q)
    if mode == "closed":
        return PointCount(p, q, e, "end", None, closed)
    N = q ** e.dim(p)
    kernel.check_guard(N ** e.r, guard, "endomorphism enumeration")
    S = _Setup(e, q)
    masks = _factor_masks(S, workers)
    total = N ** e.r
    starts = list(range(0, total, kernel.CHUNK))

    def run(start):
        T = np.arange(start, min(total, start + kernel.CHUNK), dtype=np.int64)
        ok = np.ones(len(T), dtype=bool)
        for i in range(e.r - 1, -1, -1):
            ok &= masks[i][T % N]
            T //= N
        return int(ok.sum())

    count = sum(_parallel_sum(run, starts, workers))
    return PointCount(p, q, e, "end", count, closed)


@dataclass(frozen=True)
class EndoPoint:
    images: tuple[AlgebraElem, ...]

    def __str__(self):
        return "(" + ", ".join(map(str, self.images)) + ")"


def iter_end(e, q: int, guard: int = kernel.DEFAULT_GUARD) -> Iterator[EndoPoint]:
    e = EType.parse(e)
    p = _prime_of(q)
    N = q ** e.dim(p)
    kernel.check_guard(N ** e.r, guard, "endomorphism enumeration")
    S = _Setup(e, q)
    choices = [np.flatnonzero(m) for m in _factor_masks(S, 1)]
    for combo in itertools.product(*choices):
        yield EndoPoint(tuple(_elem(S, int(i)) for i in combo))


def _gl_order(m: int, q: int) -> int:
    out = 1
    for i in range(m):
        out *= q ** m - q ** i
    return out


def aut_closed_form(e, q: int) -> int:
    """|Aut(Lambda_e)(F_q)| from the linear parts of endomorphisms.

    An endomorphism is invertible iff its action on m/m^2 is (Nakayama).  The
    linear coefficient of x_j in F(x_l) is free when e_j <= e_l and forced to
    0 otherwise, so the linear parts form a block-triangular group with one
    GL_m block per run of equal exponents.
    """
    e = EType.parse(e)
    end = end_closed_form(e, q)
    runs = [len(list(g)) for _, g in itertools.groupby(e.e)]
    num = 1
    den = 1
    for m in runs:
        num *= _gl_order(m, q)
        den *= q ** (m * m)
    return end * num // den


def _endo_arrays(S: _Setup, workers: int):
    masks = _factor_masks(S, workers)
    return [np.flatnonzero(m) for m in masks]


def _monomial_images(S: _Setup, F: np.ndarray) -> np.ndarray:
    """F has shape (N, r, D); returns (N, D, D) with column a = F^a."""
    N = F.shape[0]
    qs = S.e.qs(S.p)
    pows = []
    for j in range(S.e.r):
        cur = np.broadcast_to(S.B.unit, (N, S.D)).copy()
        pj = [cur]
        for _ in range(1, qs[j]):
            cur = S.B.mul(cur, F[:, j])
            pj.append(cur)
        pows.append(pj)
    M = np.empty((N, S.D, S.D), dtype=np.int64)
    for col, a in enumerate(monomials(qs)):
        v = pows[0][a[0]]
        for j in range(1, S.e.r):
            v = S.B.mul(v, pows[j][a[j]])
        M[:, :, col] = v
    return M


def aut_points(e, q: int, *, guard: int = kernel.DEFAULT_GUARD, mode: str = "enumerate",
               workers: int = 1) -> PointCount:
    """Endomorphisms whose induced linear map on Lambda_e (x) F_q is nonsingular."""
    e = EType.parse(e)
    p = _prime_of(q)
    closed = aut_closed_form(e, q)
    if mode == "closed":
        return PointCount(p, q, e, "aut", None, closed)
    N = q ** e.dim(p)
    kernel.check_guard(N ** e.r, guard, "automorphism enumeration")
    S = _Setup(e, q)
    choices = _endo_arrays(S, workers)
    sizes = [len(c) for c in choices]
    total = math.prod(sizes)
    starts = list(range(0, total, kernel.CHUNK // max(1, S.D)))

    def run(start):
        T = np.arange(start, min(total, start + kernel.CHUNK // max(1, S.D)), dtype=np.int64)
        F = np.empty((len(T), e.r, S.D), dtype=np.int64)
        rest = T.copy()
        for j in range(e.r - 1, -1, -1):
            F[:, j] = kernel.decode(choices[j][rest % sizes[j]], q, S.D)
            rest //= sizes[j]
        ranks = kernel.batch_rank(_monomial_images(S, F), S.F)
        return int((ranks == S.D).sum())

    count = sum(_parallel_sum(run, starts, workers))
    return PointCount(p, q, e, "aut", count, closed)


# automorphisms of Lambda_{n,e}

@dataclass
class Automorphism:
    """A linear map of Lambda_{n,e} (x) F_q given by its matrix in the monomial basis.

    ``matrix[:, j]`` holds the codes of the image of basis vector j.
    """

    algebra: StructureConstants
    matrix: np.ndarray
    n: int = 1

    @property
    def F(self):
        return kernel.arith(self.algebra.base)

    def apply(self, x: AlgebraElem) -> AlgebraElem:
        v = np.array(x.codes(), dtype=np.int64)
        w = kernel.matvec(self.matrix, v, self.F)
        return self.algebra.elem([self.algebra.base.from_code(int(c)) for c in w])

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self o other."""
        return Automorphism(self.algebra, kernel.matmul(self.matrix, other.matrix, self.F), self.n)

    def __matmul__(self, other):
        return self.compose(other)

    def __eq__(self, other):
        return isinstance(other, Automorphism) and np.array_equal(self.matrix, other.matrix)

    def is_homomorphism(self) -> bool:
        A = self.algebra
        if self.apply(A.one()) != A.one():
            return False
        basis = A.basis()
        imgs = [self.apply(b) for b in basis]
        for i in range(A.dim):
            for j in range(i, A.dim):
                if self.apply(basis[i] * basis[j]) != imgs[i] * imgs[j]:
                    return False
        return True


def block_idempotents(A: StructureConstants, n: int) -> list[AlgebraElem]:
    D = A.dim // n
    return [A.basis_elem(b * D) for b in range(n)]


def aut_to_permutation(f: Automorphism) -> tuple[int, ...]:
    """pi (0-based tuple) with f(alpha_i) = alpha_{pi(i)} for the block idempotents."""
    alphas = block_idempotents(f.algebra, f.n)
    index = {a.codes(): i for i, a in enumerate(alphas)}
    out = []
    for a in alphas:
        j = index.get(f.apply(a).codes())
        if j is None:
            raise NotBlockPermuting(f"image of {a} is not a block idempotent")
        out.append(j)
    if sorted(out) != list(range(f.n)):
        raise NotBlockPermuting(f"idempotent images {out} are not a permutation")
    return tuple(out)


def _complete_orthogonal(idems: list[np.ndarray], B: kernel.BatchAlgebra, n: int):
    """Ordered n-tuples of pairwise orthogonal idempotents summing to 1."""
    F = B.F
    unit = B.unit
    zero = np.zeros_like(unit)

    def extend(prefix, acc):
        if len(prefix) == n - 1:
            last = F.add[unit, F.neg[acc]]
            for k, x in enumerate(idems):
                if np.array_equal(x, last) and all(not B.mul(x, idems[j]).any() for j in prefix):
                    yield prefix + [k]
            return
        for k, x in enumerate(idems):
            if all(not B.mul(x, idems[j]).any() for j in prefix):
                yield from extend(prefix + [k], F.add[acc, x])

    if n == 1:
        for k, x in enumerate(idems):
            if np.array_equal(x, unit):
                yield [k]
        return
    yield from extend([], zero)


def iter_wreath(n: int, e, q: int, guard: int = kernel.DEFAULT_GUARD,
                workers: int = 1) -> Iterator[Automorphism]:
    """All automorphisms of Lambda_{n,e} (x) F_q.

    A homomorphism is fixed by the images of the generators: the block
    idempotents go to a complete ordered family of orthogonal idempotents
    (eps_b), and x_{b,j} goes to some y in eps_b * A with y^{q_j} = 0.  All
    such assignments are homomorphisms; the invertible ones are kept.
    """
    e = EType.parse(e)
    p = _prime_of(q)
    field_ = galois_field(q)
    A = lambda_algebra(n, e, field_)
    B = kernel.BatchAlgebra(A)
    dim = A.dim
    D = dim // n
    kernel.check_guard(q ** dim, guard, "idempotent enumeration")
    elems = np.concatenate([X for _, X in kernel.all_elements(q, dim)])
    sq = B.mul(elems, elems)
    idems = list(elems[(sq == elems).all(axis=1)])
    qs = e.qs(p)
    nil = {qj: ~B.power(elems, qj).any(axis=1) for qj in set(qs)}
    monos = monomials(qs)
    F = B.F

    families = list(_complete_orthogonal(idems, B, n))
    candidates = 0
    per_family = []
    for fam in families:
        eps = [idems[k] for k in fam]
        options = []
        for b in range(n):
            in_block = (B.mul(elems, eps[b]) == elems).all(axis=1)
            options.append([elems[in_block & nil[qj]] for qj in qs])
        size = math.prod(len(o) for opts in options for o in opts)
        candidates += size
        per_family.append((eps, options))
    kernel.check_guard(candidates, guard, "wreath enumeration")

    for eps, options in per_family:
        flat = [o for opts in options for o in opts]
        for combo in itertools.product(*(range(len(o)) for o in flat)):
            M = np.empty((dim, dim), dtype=np.int64)
            for b in range(n):
                ys = [flat[b * e.r + j][combo[b * e.r + j]] for j in range(e.r)]
                pows = []
                for j, y in enumerate(ys):
                    cur = eps[b]
                    pj = [cur]
                    for _ in range(1, qs[j]):
                        cur = B.mul(cur, y)
                        pj.append(cur)
                    pows.append(pj)
                for col, a in enumerate(monos):
                    v = pows[0][a[0]]
                    for j in range(1, e.r):
                        v = B.mul(v, pows[j][a[j]])
                    M[:, b * D + col] = v
            if kernel.batch_rank(M[None], F)[0] == dim:
                yield Automorphism(A, M, n)


def aut_wreath_count(n: int, e, q: int, *, guard: int = kernel.DEFAULT_GUARD,
                     workers: int = 1) -> PointCount:
    """Exhaustive |Aut(Lambda_{n,e})(F_q)|, checked against n! |Aut(Lambda_e)(F_q)|^n."""
    e = EType.parse(e)
    p = _prime_of(q)
    single = aut_points(e, q, guard=guard, workers=workers).count
    expected = math.factorial(n) * single ** n
    count = sum(1 for _ in iter_wreath(n, e, q, guard, workers))
    if count != expected:
        raise WreathMismatch(f"|Aut(Lambda_{{{n},{e}}})(F_{q})| = {count}, "
                             f"but n!|Aut(Lambda_e)|^n = {expected}")
    closed = math.factorial(n) * aut_closed_form(e, q) ** n
    return PointCount(p, q, e, "aut_wreath", count, closed, n=n)
