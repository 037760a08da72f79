"""Sparse multivariate polynomials over a prime field F_p.

A polynomial is a mapping ``{exponent tuple: coefficient}`` with coefficients
in ``1..p-1``; zero coefficients are never stored.  Monomials are ordered by
graded-lex: total degree first, then the exponent tuple lexicographically
(first variable most significant).

gcd and fraction cancellation go through FLINT's nmod_mpoly when python-flint
is importable.  ``prs_gcd`` is the pure-Python fallback: split off the content
with respect to the main variable (a gcd in one variable fewer), then run a
primitive pseudo-remainder sequence on the primitive parts.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

try:
    import flint
except ImportError:  # pragma: no cover - exercised only without python-flint
    flint = None

from ..errors import DivisionByZero, ResourceGuard


def grlex_key(exps: tuple[int, ...]) -> tuple:
    return (sum(exps), exps)


class Poly:
    __slots__ = ("p", "nvars", "terms")

    def __init__(self, p: int, nvars: int, terms: Mapping[tuple, int] | None = None, *,
                 _clean: bool = False):
        self.p = p
        self.nvars = nvars
        if _clean:
            self.terms = terms
        else:
            out = {}
            for m, c in (terms or {}).items():
                c %= p
                if c:
                    out[tuple(m)] = c
            self.terms = out

    # construction helpers

    @classmethod
    def const(cls, p, nvars, c):
        c %= p
        return cls(p, nvars, {(0,) * nvars: c} if c else {}, _clean=True)

    @classmethod
    def var(cls, p, nvars, i, power=1):
        exps = [0] * nvars
        exps[i] = power
        return cls(p, nvars, {tuple(exps): 1}, _clean=True)

    def _new(self, terms):
        return Poly(self.p, self.nvars, terms, _clean=True)

    # predicates and accessors

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return len(self.terms) == 1 and self.terms.get((0,) * self.nvars) == 1

    def is_const(self):
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def const_value(self):
        return self.terms.get((0,) * self.nvars, 0)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, i):
        return max((m[i] for m in self.terms), default=-1)

    def leading(self):
        """(monomial, coefficient) of the graded-lex leading term."""
        m = max(self.terms, key=grlex_key)
        return m, self.terms[m]

    def sorted_terms(self):
        """Terms in graded-lex descending order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.p == other.p and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Poly({self.format(['x%d' % i for i in range(self.nvars)])})"

    # ring operations

    def __add__(self, other):
        p = self.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return self._new(out)

    def __neg__(self):
        p = self.p
        return self._new({m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c %= self.p
        if not c:
            return self._new({})
        if c == 1:
            return self
        p = self.p
        return self._new({m: (v * c) % p for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return self._new({})
        if len(a) < len(b):
            a, b = b, a
        p = self.p
        out: dict = {}
        get = out.get
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                v = (get(m, 0) + c1 * c2) % p
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = Poly.const(self.p, self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_monomial(self, mono, c=1):
        p = self.p
        return self._new({tuple(x + y for x, y in zip(m, mono)): (v * c) % p
                          for m, v in self.terms.items() if (v * c) % p})

    def monic(self):
        if not self.terms:
            return self
        _, c = self.leading()
        return self.scale(pow(c, -1, self.p))

    def frob(self, q):
        """f(t)^q = f(t^q) over F_p, since coefficients are Frobenius-fixed."""
        return self._new({tuple(e * q for e in m): c for m, c in self.terms.items()})

    def root(self, q):
        """Inverse of :meth:`frob`; None when some exponent is not divisible by q."""
        out = {}
        for m, c in self.terms.items():
            if any(e % q for e in m):
                return None
            out[tuple(e // q for e in m)] = c
        return self._new(out)

    def split_residues(self, q):
        """Write f = sum_alpha t^alpha * P_alpha(t^q) with 0 <= alpha_j < q.

        Returns ``{alpha: P_alpha}`` with the P_alpha given in the variables t
        (i.e. already pulled back through the q-th root).
        """
        parts: dict = {}
        for m, c in self.terms.items():
            alpha = tuple(e % q for e in m)
            parts.setdefault(alpha, {})[tuple(e // q for e in m)] = c
        return {a: self._new(t) for a, t in parts.items()}

    def evaluate(self, values, one, zero):
        """Evaluate with variable i replaced by ``values[i]`` in any ring.

        ``one``/``zero`` are the ring's identity elements; coefficients are
        combined as ``int * element``.
        """
        acc = zero
        for m, c in self.terms.items():
            term = one
            for v, e in zip(values, m):
                if e:
                    term = term * (v ** e)
            acc = acc + term * c
        return acc

    def check_degree(self, limit):
        if limit is not None and self.terms and self.degree() > limit:
            raise ResourceGuard(f"polynomial of total degree {self.degree()} exceeds "
                                f"the degree limit {limit}")
        return self

    def format(self, names: Iterable[str]) -> str:
        names = list(names)
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)


# exact division and gcd

def divexact(f: Poly, g: Poly) -> Poly:
    """Quotient f / g; raises ValueError if g does not divide f."""
    if g.is_zero():
        raise DivisionByZero("polynomial division by zero")
    if g.is_const():
        return f.scale(pow(g.const_value(), -1, f.p))
    p = f.p
    gm, gc = g.leading()
    ginv = pow(gc, -1, p)
    rem = dict(f.terms)
    quot = {}
    gterms = list(g.terms.items())
    while rem:
        m = max(rem, key=grlex_key)
        c = rem[m]
        shift = tuple(a - b for a, b in zip(m, gm))
        if any(s < 0 for s in shift):
            raise ValueError("inexact polynomial division")
        qc = (c * ginv) % p
        quot[shift] = qc
        for mm, cc in gterms:
            t = tuple(a + b for a, b in zip(mm, shift))
            v = (rem.get(t, 0) - qc * cc) % p
            if v:
                rem[t] = v
            else:
                rem.pop(t, None)
    return f._new(quot)


def _univariate(f: Poly, v: int) -> dict:
    """Coefficients of f as a polynomial in variable v (v-exponent zeroed)."""
    out: dict = {}
    for m, c in f.terms.items():
        d = m[v]
        mm = m[:v] + (0,) + m[v + 1:]
        out.setdefault(d, {})[mm] = c
    return {d: f._new(t) for d, t in out.items()}


def _content(f: Poly, v: int, rest: tuple) -> Poly:
    g = None
    for c in _univariate(f, v).values():
        g = c if g is None else _gcd(g, c, rest)
        if g.is_const():
            return Poly.const(f.p, f.nvars, 1)
    return g.monic()


def _prem(a: Poly, b: Poly, v: int) -> Poly:
    """Sparse pseudo-remainder of a by b as polynomials in variable v."""
    db = b.degree_in(v)
    lb = _univariate(b, v)[db]
    r = a
    while not r.is_zero():
        dr = r.degree_in(v)
        if dr < db:
            break
        lr = _univariate(r, v)[dr]
        shift = [0] * a.nvars
        shift[v] = dr - db
        r = r * lb - (b * lr).mul_monomial(tuple(shift))
    return r


def _gcd(a: Poly, b: Poly, vars_: tuple) -> Poly:
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    one = Poly.const(a.p, a.nvars, 1)
    if a.is_const() or b.is_const():
        return one
    if not vars_:
        return one
    v, rest = vars_[0], vars_[1:]
    da, db = a.degree_in(v), b.degree_in(v)
    if da <= 0 and db <= 0:
        return _gcd(a, b, rest)
    ca, cb = _content(a, v, rest), _content(b, v, rest)
    c = _gcd(ca, cb, rest)
    pa, pb = divexact(a, ca), divexact(b, cb)
    if pa.degree_in(v) < pb.degree_in(v):
        pa, pb = pb, pa
    while not pb.is_zero():
        if pb.degree_in(v) <= 0:
            # primitive and free of v: a unit
            pa = one
            break
        r = _prem(pa, pb, v)
        pa, pb = pb, (divexact(r, _content(r, v, rest)) if not r.is_zero() else r)
    return (c * pa).monic()


def prs_gcd(a: Poly, b: Poly) -> Poly:
    """Monic (graded-lex) greatest common divisor; gcd(0, 0) = 0."""
    vars_ = tuple(i for i in range(a.nvars)
                  if a.degree_in(i) > 0 or b.degree_in(i) > 0)
    return _gcd(a, b, vars_)


@lru_cache(maxsize=None)
def _flint_ctx(p: int, nvars: int):
    return flint.nmod_mpoly_ctx.get(tuple(f"x{i}" for i in range(nvars)), modulus=p)


def _to_flint(f: Poly):
    return _flint_ctx(f.p, f.nvars).from_dict(f.terms)


def _from_flint(f, like: Poly) -> Poly:
    return like._new({tuple(m): int(c) for m, c in f.to_dict().items()})


def _use_flint(a: Poly, b: Poly) -> bool:
    return flint is not None and a.nvars > 0 and not (a.is_const() or b.is_const())


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic (graded-lex) greatest common divisor; gcd(0, 0) = 0."""
    if not _use_flint(a, b):
        return prs_gcd(a, b)
    return _from_flint(_to_flint(a).gcd(_to_flint(b)), a).monic()


def cancel(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """(num / g, den / g) for g = gcd(num, den); scaling is left to the caller."""
    if not _use_flint(num, den):
        g = prs_gcd(num, den)
        if g.is_one():
            return num, den
        return divexact(num, g), divexact(den, g)
    fn, fd = _to_flint(num), _to_flint(den)
    g = fn.gcd(fd)
    if g.is_one():
        return num, den
    return _from_flint(fn / g, num), _from_flint(fd / g, den)
