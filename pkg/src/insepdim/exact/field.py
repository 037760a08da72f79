"""Base fields and their elements.

Three kinds of field are supported:

* ``prime``     F_p, elements are residues ``0..p-1``;
* ``finite``    F_{p^k}, elements are polynomials in the generator ``g``
                reduced modulo the built-in primitive modulus;
* ``rational``  F_p(t_1, ..., t_m), elements are reduced fractions of
                polynomials with a graded-lex monic denominator.

All elements are immutable and hashable; equal elements have identical
payloads, so ``==`` is structural.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

from ..errors import DivisionByZero, NotAPower, UnsupportedField, ValidationError
from . import gf
from .poly import Poly, cancel

DEFAULT_DEGREE_LIMIT = 512


@dataclass(frozen=True)
class FieldDescriptor:
    kind: str
    p: int
    k: int = 1
    vars: tuple[str, ...] = ()
    modulus: tuple[int, ...] | None = None
    degree_limit: int = field(default=DEFAULT_DEGREE_LIMIT, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("prime", "finite", "rational"):
            raise ValidationError(f"unknown field kind {self.kind!r}")
        if not gf.is_prime(self.p):
            raise ValidationError(f"characteristic {self.p} is not prime")
        if self.kind == "finite":
            if self.k < 1:
                raise ValidationError("extension degree must be >= 1")
            if self.modulus is None:
                object.__setattr__(self, "modulus", gf.modulus(self.p, self.k))
            elif len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
                raise ValidationError("modulus must be monic of degree k")
        elif self.k != 1:
            raise ValidationError("k is only meaningful for finite fields")
        if self.kind == "rational":
            if not self.vars:
                raise ValidationError("a rational function field needs variables")
            if len(set(self.vars)) != len(self.vars) or not all(self.vars):
                raise ValidationError("variable names must be distinct and nonempty")
        elif self.vars:
            raise ValidationError("only rational function fields have variables")

    # descriptive properties

    @property
    def is_finite(self) -> bool:
        return self.kind != "rational"

    @property
    def order(self) -> int | None:
        return self.p ** self.k if self.is_finite else None

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def __str__(self):
        if self.kind == "prime":
            return f"F_{self.p}"
        if self.kind == "finite":
            return f"F_{self.p}^{self.k}"
        return f"F_{self.p}({','.join(self.vars)})"

    @cached_property
    def tables(self) -> gf.GFTables:
        if self.kind != "finite":
            raise UnsupportedField(f"{self} has no finite-field tables")
        return gf.tables(self.p, self.k, self.modulus)

    # element construction

    def zero(self) -> "FieldElem":
        return self(0)

    def one(self) -> "FieldElem":
        return self(1)

    def __call__(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.field == self:
                return value
            if value.field.p == self.p and value.field.kind == "prime":
                return self(value.value)
            raise ValidationError(f"cannot coerce {value.field} element into {self}")
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            if self.kind == "prime":
                return FpElem(self, value % self.p)
            if self.kind == "finite":
                return FqElem(self, value % self.p)
            return RatElem(self, Poly.const(self.p, self.nvars, value),
                           Poly.const(self.p, self.nvars, 1), _reduced=True)
        if isinstance(value, str):
            from .parse import parse_field_elem
            return parse_field_elem(self, value)
        raise ValidationError(f"cannot convert {value!r} to an element of {self}")

    def gen(self) -> "FqElem":
        """The class of ``g`` in F_{p^k}."""
        if self.kind != "finite":
            raise UnsupportedField("only finite fields have a generator")
        if self.k == 1:
            return FqElem(self, self.tables.exp[1])
        return FqElem(self, self.p)

    def var(self, name: str) -> "RatElem":
        if self.kind != "rational":
            raise UnsupportedField("only rational function fields have variables")
        try:
            i = self.vars.index(name)
        except ValueError:
            raise ValidationError(f"unknown variable {name!r} in {self}") from None
        return RatElem(self, Poly.var(self.p, self.nvars, i),
                       Poly.const(self.p, self.nvars, 1), _reduced=True)

    def from_code(self, code: int) -> "FieldElem":
        """Element with integer code ``code`` (finite fields only)."""
        if self.kind == "prime":
            return FpElem(self, code % self.p)
        if self.kind == "finite":
            if not 0 <= code < self.order:
                raise ValidationError(f"code {code} out of range for {self}")
            return FqElem(self, code)
        raise UnsupportedField(f"{self} is infinite")

    def elements(self) -> Iterator["FieldElem"]:
        """All elements of a finite field, ordered by code."""
        if not self.is_finite:
            raise UnsupportedField(f"{self} is infinite")
        return (self.from_code(c) for c in range(self.order))

    # serialization

    def to_json(self) -> dict:
        d = {"kind": self.kind, "p": self.p}
        if self.kind == "finite":
            d["k"] = self.k
        if self.kind == "rational":
            d["vars"] = list(self.vars)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "FieldDescriptor":
        try:
            kind = d["kind"]
            if kind == "prime":
                return prime_field(int(d["p"]))
            if kind == "finite":
                return finite_field(int(d["p"]), int(d.get("k", 1)))
            if kind == "rational":
                return rational_field(int(d["p"]), list(d["vars"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad field descriptor {d!r}: {exc}") from None
        raise ValidationError(f"unknown field kind {d.get('kind')!r}")


def prime_field(p: int) -> FieldDescriptor:
    return FieldDescriptor("prime", p)


def finite_field(p: int, k: int, modulus: tuple[int, ...] | None = None) -> FieldDescriptor:
    return FieldDescriptor("finite", p, k, modulus=modulus)


def rational_field(p: int, vars, degree_limit: int = DEFAULT_DEGREE_LIMIT) -> FieldDescriptor:
    if isinstance(vars, str):
        vars = [v.strip() for v in vars.split(",")]
    return FieldDescriptor("rational", p, 1, tuple(vars), degree_limit=degree_limit)


def galois_field(q: int) -> FieldDescriptor:
    """F_q for a prime power q: the prime field when q is prime."""
    for p in gf.prime_factors(q)[:1]:
        k, n = 0, q
        while n % p == 0:
            n //= p
            k += 1
        if n == 1:
            return prime_field(p) if k == 1 else finite_field(p, k)
    raise ValidationError(f"{q} is not a prime power")


class FieldElem:
    """Common arithmetic plumbing; subclasses implement the primitive ops."""

    __slots__ = ("field",)

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field is self.field or other.field == self.field:
                return other
            return self.field(other)
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other._neg())

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._add(self._neg())

    def __neg__(self):
        return self._neg()

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._mul(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._mul(other.inv())

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._mul(self.inv())

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result._mul(base)
            n >>= 1
            if n:
                base = base._mul(base)
        return result

    def __bool__(self):
        return not self.is_zero()

    def frobenius(self, e: int = 1) -> "FieldElem":
        """x^(p^e)."""
        return self ** (self.field.p ** e)

    def pth_root(self, e: int = 1) -> "FieldElem":
        """The unique y with y^(p^e) = x; NotAPower if there is none."""
        raise NotImplementedError

    def __repr__(self):
        return f"<{self.field}: {self}>"


class FpElem(FieldElem):
    __slots__ = ("value",)

    def __init__(self, field, value):
        self.field = field
        self.value = value

    def is_zero(self):
        return self.value == 0

    def is_one(self):
        return self.value == 1

    def code(self):
        return self.value

    def _add(self, o):
        return FpElem(self.field, (self.value + o.value) % self.field.p)

    def _neg(self):
        return FpElem(self.field, (-self.value) % self.field.p)

    def _mul(self, o):
        return FpElem(self.field, (self.value * o.value) % self.field.p)

    def inv(self):
        if not self.value:
            raise DivisionByZero("inverse of zero")
        return FpElem(self.field, pow(self.value, -1, self.field.p))

    def frobenius(self, e=1):
        return self

    def pth_root(self, e=1):
        return self

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.value == other.value and self.field == other.field
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash(("Fp", self.field.p, self.value))

    def __str__(self):
        return str(self.value)


class FqElem(FieldElem):
    __slots__ = ("value",)

    def __init__(self, field, value):
        self.field = field
        self.value = value

    def is_zero(self):
        return self.value == 0

    def is_one(self):
        return self.value == 1

    def code(self):
        return self.value

    def coeffs(self) -> list[int]:
        return self.field.tables.decode(self.value)

    def _add(self, o):
        return FqElem(self.field, self.field.tables.add(self.value, o.value))

    def _neg(self):
        return FqElem(self.field, self.field.tables.neg(self.value))

    def _mul(self, o):
        return FqElem(self.field, self.field.tables.mul(self.value, o.value))

    def inv(self):
        if not self.value:
            raise DivisionByZero("inverse of zero")
        return FqElem(self.field, self.field.tables.inv(self.value))

    def __pow__(self, n):
        if n < 0 and not self.value:
            raise DivisionByZero("inverse of zero")
        return FqElem(self.field, self.field.tables.pow(self.value, n))

    def frobenius(self, e=1):
        return self ** (self.field.p ** e)

    def pth_root(self, e=1):
        # Frobenius is a bijection of order k on F_{p^k}
        k = self.field.k
        return self.frobenius((-e) % k)

    def __eq__(self, other):
        if isinstance(other, FqElem):
            return self.value == other.value and self.field == other.field
        if isinstance(other, int):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        return hash(("Fq", self.field.p, self.field.k, self.value))

    def __str__(self):
        c = self.coeffs()
        terms = {(i,): v for i, v in enumerate(c) if v}
        return Poly(self.field.p, 1, terms, _clean=True).format(["g"])


class RatElem(FieldElem):
    __slots__ = ("num", "den")

    def __init__(self, field, num: Poly, den: Poly, *, _reduced=False):
        self.field = field
        if not _reduced:
            if den.is_zero():
                raise DivisionByZero("zero denominator")
            if num.is_zero():
                den = Poly.const(field.p, field.nvars, 1)
            elif not den.is_const():
                num, den = cancel(num, den)
            if not den.is_one():
                _, lc = den.leading()
                if lc != 1:
                    inv = pow(lc, -1, field.p)
                    num, den = num.scale(inv), den.scale(inv)
            limit = field.degree_limit
            num.check_degree(limit)
            den.check_degree(limit)
        self.num = num
        self.den = den

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def is_polynomial(self):
        return self.den.is_one()

    def _add(self, o):
        if self.den.is_one() and o.den.is_one():
            return RatElem(self.field, (self.num + o.num).check_degree(self.field.degree_limit),
                           self.den, _reduced=True)
        if self.den == o.den:
            return RatElem(self.field, self.num + o.num, self.den)
        return RatElem(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    def _neg(self):
        return RatElem(self.field, -self.num, self.den, _reduced=True)

    def _mul(self, o):
        if self.den.is_one() and o.den.is_one():
            return RatElem(self.field, (self.num * o.num).check_degree(self.field.degree_limit),
                           self.den, _reduced=True)
        if o.den.is_one() and o.num.is_const():
            if o.num.is_zero():
                return o
            return RatElem(self.field, self.num.scale(o.num.const_value()), self.den,
                           _reduced=True)
        return RatElem(self.field, self.num * o.num, self.den * o.den)

    def inv(self):
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        return RatElem(self.field, self.den, self.num)

    def frobenius(self, e=1):
        q = self.field.p ** e
        num, den = self.num.frob(q), self.den.frob(q)
        limit = self.field.degree_limit
        num.check_degree(limit)
        den.check_degree(limit)
        return RatElem(self.field, num, den, _reduced=True)

    def pth_root(self, e=1):
        q = self.field.p ** e
        num, den = self.num.root(q), self.den.root(q)
        if num is None or den is None:
            raise NotAPower(f"{self} is not a {q}-th power in {self.field}")
        return RatElem(self.field, num, den, _reduced=True)

    def substitute(self, images, target: FieldDescriptor) -> FieldElem:
        """Image under t_i -> images[i] (elements of ``target``)."""
        one, zero = target.one(), target.zero()
        n = self.num.evaluate(images, one, zero)
        d = self.den.evaluate(images, one, zero)
        return n / d

    def __eq__(self, other):
        if isinstance(other, RatElem):
            return (self.field == other.field and self.num == other.num
                    and self.den == other.den)
        if isinstance(other, int):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        return hash(("Rat", self.num, self.den))

    def __str__(self):
        names = self.field.vars
        n = self.num.format(names)
        if self.den.is_one():
            return n
        d = self.den.format(names)
        if len(self.num.terms) > 1:
            n = f"({n})"
        if len(self.den.terms) > 1:
            d = f"({d})"
        return f"{n}/{d}"
