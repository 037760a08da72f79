"""Purely inseparable towers L/K over K = F_p(z_1..z_m).

A tower is a chain of relations y_i^{p^{f_i}} = g_i with g_i a polynomial in
the earlier y's over K.  The algebra it presents has the monomial basis
y^a, 0 <= a_i < p^{f_i}; it is a field exactly when no g_i is a p-th power in
the field built so far.  On top of that we compute exponents, Pickert normal
generating sequences and their coefficients, descent certificates and the
index [L : K(L^p)].
"""

from __future__ import annotations

import itertools
import json
import random
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import (IndexNotPPower, MonotonicityViolation, NoFiniteExponent, NoRepresentation,
                     NoSolution, NotAField, NotGenerating, ParseError, ResourceGuard,
                     ValidationError)
from .exact import FieldDescriptor, FieldElem, is_prime, prime_field, rational_field
from .exact.linalg import solve
from .exact.parse import parse_expression
from .exact.semilinear import frobenius_solve_sparse
from .fdalg import (Algebra, AlgebraElem, Subspace, base_change, ppower_filtration,
                    subalgebra_closure, to_structure_constants)
from .truncated import EType, mono_label

TOWER_GUARD = 1 << 12

_YNAME = re.compile(r"y([1-9][0-9]*)$")


# presentations

@dataclass(frozen=True)
class TowerPresentation:
    p: int
    base_vars: tuple[str, ...]
    levels: tuple[tuple[int, str], ...]     # (f_i, rhs) meaning y_i^(p^f_i) = rhs

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValidationError(f"p = {self.p} is not prime")
        object.__setattr__(self, "base_vars", tuple(self.base_vars))
        object.__setattr__(self, "levels", tuple((int(f), str(g)) for f, g in self.levels))
        for v in self.base_vars:
            if _YNAME.match(v):
                raise ValidationError(f"base variable {v!r} clashes with generator names")
        if len(set(self.base_vars)) != len(self.base_vars):
            raise ValidationError("base variables must be distinct")
        if not self.levels:
            raise ValidationError("a tower needs at least one level")
        for i, (f, _) in enumerate(self.levels, 1):
            if f < 1:
                raise ValidationError(f"level {i}: exponent f = {f} must be >= 1")

    @property
    def r(self) -> int:
        return len(self.levels)

    @property
    def degree(self) -> int:
        return self.p ** sum(f for f, _ in self.levels)

    def to_json(self) -> dict:
        return {"p": self.p, "base_vars": list(self.base_vars),
                "levels": [{"exp": f, "rhs": g} for f, g in self.levels]}

    @classmethod
    def from_json(cls, d: dict) -> "TowerPresentation":
        try:
            return cls(int(d["p"]), tuple(d["base_vars"]),
                       tuple((int(lv["exp"]), lv["rhs"]) for lv in d["levels"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed tower document: {exc}") from None

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "TowerPresentation":
        try:
            return cls.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None


def base_field(p: int, base_vars: Sequence[str], degree_limit: int = 512) -> FieldDescriptor:
    if base_vars:
        return rational_field(p, tuple(base_vars), degree_limit)
    return prime_field(p)


class TowerAlgebra(Algebra):
    """K[y_1..y_r] modulo y_i^{Q_i} = g_i(y_1..y_{i-1}), Q_i = p^{f_i}.

    Basis index is the mixed-radix number of the exponent vector with y_1
    most significant.  Products of basis monomials are reduced on demand and
    cached per exponent vector.
    """

    def __init__(self, base: FieldDescriptor, exps: Sequence[int], rels: Sequence[dict]):
        super().__init__()
        self.base = base
        self.p = base.p
        self.exps = tuple(exps)
        self.Q = tuple(self.p ** f for f in exps)
        self.r = len(exps)
        self.rels = list(rels)      # rels[k]: {exponent tuple (len r): coeff}
        self.dim = 1
        for q in self.Q:
            self.dim *= q
        self.unit = {0: base.one()}
        self._cache: dict = {}
        self._radix = []
        stride = 1
        for q in reversed(self.Q):
            self._radix.append(stride)
            stride *= q
        self._radix.reverse()

    def index(self, a: Sequence[int]) -> int:
        return sum(x * s for x, s in zip(a, self._radix))

    def exponents(self, idx: int) -> tuple[int, ...]:
        out = []
        for s, q in zip(self._radix, self.Q):
            out.append((idx // s) % q)
        return tuple(out)

    def reduce(self, c: tuple[int, ...]) -> dict:
        hit = self._cache.get(c)
        if hit is not None:
            return hit
        k = max((i for i in range(self.r) if c[i] >= self.Q[i]), default=None)
        if k is None:
            out = {self.index(c): self.base.one()}
        else:
            rest = list(c)
            rest[k] -= self.Q[k]
            out = {}
            for d, coef in self.rels[k].items():
                sub = self.reduce(tuple(x + y for x, y in zip(rest, d)))
                for h, v in sub.items():
                    w = out.get(h)
                    w = v * coef if w is None else w + v * coef
                    if w.is_zero():
                        out.pop(h, None)
                    else:
                        out[h] = w
        self._cache[c] = out
        return out

    def basis_product(self, i, j):
        a, b = self.exponents(i), self.exponents(j)
        return self.reduce(tuple(x + y for x, y in zip(a, b)))

    def basis_frobenius(self, i):
        # (y^a)^p = y^(pa)
        return self.reduce(tuple(self.p * x for x in self.exponents(i)))

    def basis_label(self, i):
        return mono_label(self.exponents(i), [f"y{k}" for k in range(1, self.r + 1)])

    def gen(self, k: int) -> AlgebraElem:
        """The generator y_k (1-based)."""
        a = [0] * self.r
        a[k - 1] = 1
        return self.elem(self.reduce(tuple(a)))

    def __repr__(self):
        return f"<TowerAlgebra Q={self.Q} over {self.base}>"


@dataclass
class Tower:
    """A validated tower: L as an algebra over K plus its generators."""

    presentation: TowerPresentation
    K: FieldDescriptor
    L: TowerAlgebra

    @property
    def p(self) -> int:
        return self.presentation.p

    @property
    def gens(self) -> list[AlgebraElem]:
        return [self.L.gen(k) for k in range(1, self.L.r + 1)]

    @property
    def dim(self) -> int:
        return self.L.dim

    def parse(self, text: str) -> AlgebraElem:
        return _parse_in(self.L, self.K, text)

    @cached_property
    def ground(self) -> Subspace:
        return subalgebra_closure(self.L, [], with_unit=True)


def _parse_in(L: TowerAlgebra, K: FieldDescriptor, text: str) -> AlgebraElem:
    def name_fn(name):
        m = _YNAME.match(name)
        if m:
            k = int(m.group(1))
            if k > L.r:
                raise ParseError(f"{name} is not available here (only y1..y{L.r})")
            return L.gen(k)
        if K.kind == "rational" and name in K.vars:
            return L.scalar(K.var(name))
        raise ParseError(f"unknown symbol {name!r}")

    val = parse_expression(text, name_fn, L.scalar)
    if not isinstance(val, AlgebraElem):
        val = L.scalar(val)
    return val


def _is_pth_power(L: Algebra, x: AlgebraElem) -> bool:
    vectors = [L.basis_frobenius(i) for i in range(L.dim)]
    try:
        frobenius_solve_sparse(L.base, L.base.p, vectors, x.vec)
    except NoSolution:
        return False
    return True


def build_tower(t: TowerPresentation, *, max_dim: int = TOWER_GUARD,
                degree_limit: int = 512) -> Tower:
    """Realize the tower and check level by level that it is a field."""
    if t.degree > max_dim:
        raise ResourceGuard(f"tower degree {t.degree} exceeds the tower guard {max_dim}")
    K = base_field(t.p, t.base_vars, degree_limit)
    r = t.r
    rels: list[dict] = []
    for k, (f, rhs) in enumerate(t.levels, 1):
        sub = TowerAlgebra(K, [g for g, _ in t.levels[:k - 1]], rels)
        g = _parse_in(sub, K, rhs)
        if _is_pth_power(sub, g):
            raise NotAField(k, f"level {k}: {rhs} is a p-th power in the field below, "
                               f"so y{k}^{t.p ** f} = {rhs} does not define a field")
        rels = rels + [{sub.exponents(i) + (0,) * (r - k + 1): c for i, c in g.vec.items()}]
    # pad earlier relations to full length
    full = [{d + (0,) * (r - len(d)): c for d, c in rel.items()} for rel in rels]
    L = TowerAlgebra(K, [f for f, _ in t.levels], full)
    return Tower(t, K, L)


# exponents and normal generating sequences

def exponent(x: AlgebraElem, B: Subspace) -> int:
    """Least e >= 0 with x^(p^e) in B."""
    A = x.algebra
    p = A.base.p
    bound = 0
    while p ** bound < A.dim:
        bound += 1
    v = x.vec
    for e in range(bound + 1):
        if B.contains(v):
            return e
        v = A.frob(v)
    raise NoFiniteExponent(f"no power x^(p^e), e <= {bound}, lies in the subspace")


@dataclass(frozen=True)
class TypeResult:
    e: EType
    sequence: tuple
    indices: tuple[int, ...]        # positions of the chosen candidates
    n: int = 1

    def to_json(self) -> dict:
        return {"n": self.n, "e": list(self.e.e),
                "sequence": [str(x) for x in self.sequence],
                "candidates": list(self.indices)}


def normal_generating_sequence(tower: Tower, candidates: Sequence | None = None) -> TypeResult:
    """Greedy max-exponent choice of generators; returns the type of L/K."""
    L = tower.L
    if candidates is None:
        candidates = tower.gens
    cands = [tower.parse(c) if isinstance(c, str) else c for c in candidates]
    cur = tower.ground
    chosen, idx, exps = [], [], []
    while cur.dim < L.dim:
        best = None
        for k, x in enumerate(cands):
            if cur.contains(x):
                continue
            ex = exponent(x, cur)
            if best is None or ex > best[0]:
                best = (ex, k)
        if best is None:
            raise NotGenerating(f"candidates generate a subfield of degree {cur.dim} < {L.dim}")
        ex, k = best
        if exps and ex > exps[-1]:
            raise MonotonicityViolation(f"exponent sequence {exps + [ex]} increases")
        chosen.append(cands[k])
        idx.append(k)
        exps.append(ex)
        # x has minimal polynomial T^(p^ex) - x^(p^ex) over cur, so cur(x) has
        # degree cur.dim * p^ex; once that is [L:K] the last span is not needed
        if cur.dim * L.p ** ex == L.dim:
            break
        nxt = subalgebra_closure(L, [cands[k]], start=cur)
        if nxt.dim != cur.dim * L.p ** ex:
            raise NotAField(len(exps), f"K(x_1..x_{len(exps)}) has degree {nxt.dim}, "
                                       f"expected {cur.dim * L.p ** ex}")
        cur = nxt
    if not exps:
        raise NotGenerating("L = K has no inseparable generators")
    return TypeResult(EType(tuple(exps)), tuple(chosen), tuple(idx))


# Pickert coefficients

def _index_ranges(e: EType, p: int, i: int) -> list[tuple[int, ...]]:
    """All (d_1..d_{i-1}) with 0 <= d_j < p^{e_j - e_i}, lexicographic."""
    ei = e.e[i - 1]
    return list(itertools.product(*(range(p ** (e.e[j] - ei)) for j in range(i - 1))))


@dataclass(frozen=True)
class PickertCoefficients:
    e: EType
    p: int
    coeffs: tuple[dict, ...]        # coeffs[i-1]: {d tuple: FieldElem}

    @property
    def count(self) -> int:
        return sum(len(c) for c in self.coeffs)

    def entries(self) -> list[FieldElem]:
        return [c[d] for c in self.coeffs for d in sorted(c)]

    def to_json(self) -> dict:
        return {"e": list(self.e.e), "p": self.p, "count": self.count,
                "levels": [[{"d": list(d), "a": str(c[d])} for d in sorted(c)]
                           for c in self.coeffs]}


def _sparsest(columns, target, field_, keys):
    """Solution of sum a_j col_j = target with fewest nonzeros, graded-lex on keys."""
    order = sorted(range(len(columns)), key=lambda j: (sum(keys[j]), keys[j]))
    for size in range(len(columns) + 1):
        for combo in itertools.combinations(order, size):
            sol, _ = solve([columns[j] for j in combo], target, field_)
            if sol is not None:
                out = [field_.zero()] * len(columns)
                for j, v in zip(combo, sol):
                    out[j] = v
                return out
    return None


def pickert_coefficients(tower: Tower, tr: TypeResult) -> PickertCoefficients:
    """Solve x_i^{q_i} = sum_d a_d x_1^{q_i d_1} ... x_{i-1}^{q_i d_{i-1}} for each i."""
    L, K, p = tower.L, tower.K, tower.p
    e = tr.e
    xs = [x.vec for x in tr.sequence]
    out = []
    for i in range(1, e.r + 1):
        ei = e.e[i - 1]
        target = L.frob(xs[i - 1], ei)
        bases = [L.frob(xs[j], ei) for j in range(i - 1)]
        ds = _index_ranges(e, p, i)
        cols = []
        pow_cache: dict = {}
        for d in ds:
            v = dict(L.unit)
            for j, dj in enumerate(d):
                if dj:
                    key = (j, dj)
                    pj = pow_cache.get(key)
                    if pj is None:
                        pj = L.power(bases[j], dj)
                        pow_cache[key] = pj
                    v = L.mul(v, pj)
            cols.append(v)
        sol, kern = solve(cols, target, K)
        if sol is None:
            raise NoRepresentation(f"x_{i}^{p ** ei} is not in K[x_j^{p ** ei} : j < {i}]")
        if kern:
            sol = _sparsest(cols, target, K, ds)
        out.append({d: a for d, a in zip(ds, sol)})
    return PickertCoefficients(e, p, tuple(out))


@dataclass(frozen=True)
class DescentCertificate:
    generators: tuple
    generator_count: int
    bound: int
    n: int = 1

    def to_json(self) -> dict:
        return {"generators": [str(g) for g in self.generators],
                "generator_count": self.generator_count, "bound": self.bound, "n": self.n}


def descent_certificate(tower: Tower, tr: TypeResult, coeffs: PickertCoefficients | None = None,
                        n: int = 1) -> DescentCertificate:
    """The Pickert coefficients as generators of a field of definition."""
    if coeffs is None:
        coeffs = pickert_coefficients(tower, tr)
    expected = sum(tr.e.pickert_terms(tower.p))
    if coeffs.count != expected:
        raise NoRepresentation(f"{coeffs.count} coefficients, expected {expected}")
    return DescentCertificate(tuple(coeffs.entries()), coeffs.count, n * coeffs.count, n)


def k_lp_index(tower: Tower, tr: TypeResult | None = None) -> int:
    """[L : K(L^p)].

    (sum c_i b_i)^p = sum c_i^p b_i^p, so K(L^p) is the K-span of the p-th
    powers of the basis monomials; that span is already closed under products.
    """
    L = tower.L
    # sparsest first: monomials whose p-th power needs no reduction give unit
    # rows, which keeps the elimination free of coefficient growth
    powers = sorted((L.basis_frobenius(i) for i in range(L.dim)), key=len)
    sub = Subspace.span(L, powers)
    idx, rem = divmod(L.dim, sub.dim)
    p = tower.p
    k = 0
    while p ** k < idx:
        k += 1
    if rem or p ** k != idx:
        raise IndexNotPPower(f"[L : K(L^p)] = {L.dim}/{sub.dim} is not a power of {p}")
    if tr is not None and k != tr.e.r:
        raise IndexNotPPower(f"[L : K(L^p)] = {p}^{k}, but the type has r = {tr.e.r}")
    return idx


# examples and reconstruction

def _monomial_text(a: Sequence[int]) -> str:
    return "*".join(f"y{j + 1}" if x == 1 else f"y{j + 1}^{x}" for j, x in enumerate(a) if x)


def construct_example(e, p: int, seed: int | None = None, *,
                      validate: bool = True, max_dim: int = TOWER_GUARD) -> TowerPresentation:
    """y_i^{p^{e_i}} = z_i, optionally perturbed by admissible lower-level terms.

    With a seed, each level i >= 2 gets one extra term c * y^{q_i d} with d an
    admissible nonzero index (0 <= d_j < p^{e_j - e_i}) and c one of z_1..z_{i-1}.
    Such a term keeps the type equal to e; field-ness is rechecked and a new
    draw is taken if it fails.
    """
    e = EType.parse(e)
    names = [f"z{i}" for i in range(1, e.r + 1)]
    plain = TowerPresentation(p, tuple(names), tuple((ei, names[i]) for i, ei in enumerate(e.e)))
    if seed is None:
        return plain
    rng = random.Random(seed)
    for _ in range(100):
        levels = []
        for i in range(1, e.r + 1):
            ei = e.e[i - 1]
            rhs = names[i - 1]
            ds = [d for d in _index_ranges(e, p, i) if any(d)]
            if ds:
                d = ds[rng.randrange(len(ds))]
                coef = names[rng.randrange(i - 1)]
                rhs += f" + {coef}*{_monomial_text([x * p ** ei for x in d])}"
            levels.append((ei, rhs))
        t = TowerPresentation(p, tuple(names), tuple(levels))
        if not validate or t.degree > max_dim:
            return t
        try:
            build_tower(t, max_dim=max_dim)
        except NotAField:
            continue
        return t
    return plain


def obfuscated_candidates(tower: Tower) -> list[AlgebraElem]:
    """{y1 + y2, y2, ..., yr}: the same field, generators no longer normal."""
    g = tower.gens
    if len(g) < 2:
        return g
    return [g[0] + g[1]] + g[1:]


def scrambled_candidates(tower: Tower, seed: int) -> list[AlgebraElem]:
    """Triangular recombination of the generators in a seeded random order.

    Each candidate adds the next generator in the shuffled order and, with
    probability 1/2, each later one, so the candidates still generate L.
    """
    rng = random.Random(seed)
    gens = tower.gens
    order = list(range(len(gens)))
    rng.shuffle(order)
    cands = []
    for k, i in enumerate(order):
        x = gens[i]
        for t, j in enumerate(order[k + 1:]):
            if t == 0 or rng.random() < 0.5:
                x = x + gens[j]
        cands.append(x)
    return cands


def tower_from_pickert(tower: Tower, coeffs: PickertCoefficients) -> TowerPresentation:
    """The tower x_i^{q_i} = sum_d a_d x^{q_i d} rebuilt from the coefficients."""
    p = tower.p
    levels = []
    for i, c in enumerate(coeffs.coeffs, 1):
        ei = coeffs.e.e[i - 1]
        terms = []
        for d in sorted(c):
            a = c[d]
            if a.is_zero():
                continue
            mono = _monomial_text([x * p ** ei for x in d])
            a_text = f"({a})"
            terms.append(f"{a_text}*{mono}" if mono else a_text)
        levels.append((ei, " + ".join(terms) or "0"))
    return TowerPresentation(p, tower.presentation.base_vars, tuple(levels))


def split_type(tower: Tower) -> tuple[tuple[int, ...], EType]:
    """p-power filtration of L (x)_K K' with K' = F_p(u), z_j -> u_j^{p^{e_max}}.

    K' contains K^{1/p^{e_max}}, over which L becomes a truncated polynomial
    algebra; the filtration dimensions and recovered type are returned.
    """
    t = tower.presentation
    emax = max(f for f, _ in t.levels)
    us = tuple(f"u{j}" for j in range(1, len(t.base_vars) + 1))
    target = rational_field(t.p, us, tower.K.degree_limit * t.p ** emax)
    images = {z: f"{u}^{t.p ** emax}" for z, u in zip(t.base_vars, us)}
    A = base_change(to_structure_constants(tower.L), target, images)
    filt = ppower_filtration(A)
    return filt.dims, EType(filt.type)
