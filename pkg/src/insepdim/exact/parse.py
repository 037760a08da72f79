"""Expression grammar shared by the CLI and the input documents.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary_int)?
    atom   := INT | NAME | '(' expr ')'

Names match ``[a-z][a-z0-9]*``.  ``^`` binds tightest, so ``-x^2`` is
``-(x^2)``; exponents are (possibly negative) integer literals.  The parser is
generic over the target ring: callers supply how names and integers become
ring elements.
"""

from __future__ import annotations

import re
from typing import Callable

from ..errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([a-z][a-z0-9]*)|(\S))")


def tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("int", num))
        elif name is not None:
            tokens.append(("name", name))
        elif op in "+-*/^()":
            tokens.append(("op", op))
        else:
            raise ParseError(f"unexpected character {op!r} in {text!r}")
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text, name_fn, int_fn):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.name_fn = name_fn
        self.int_fn = int_fn

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or 'a token'} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression")
        val = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"trailing input after position {self.i} in {self.text!r}")
        return val

    def expr(self):
        val = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, value = self.take()
            if kind != "int":
                raise ParseError(f"exponent must be an integer literal in {self.text!r}")
            return base ** (sign * int(value))
        return base

    def atom(self):
        kind, value = self.take()
        if kind == "int":
            return self.int_fn(int(value))
        if kind == "name":
            return self.name_fn(value)
        if value == "(":
            val = self.expr()
            self.take(")")
            return val
        raise ParseError(f"unexpected {value!r} in {self.text!r}")


def parse_expression(text: str, name_fn: Callable, int_fn: Callable):
    """Parse ``text`` evaluating names with ``name_fn`` and integers with ``int_fn``."""
    if not isinstance(text, str):
        raise ParseError(f"expected an expression string, got {text!r}")
    return _Parser(text, name_fn, int_fn).parse()


def parse_field_elem(field, text: str):
    """Parse an element of a field descriptor.

    Rational function fields accept their variable names; F_{p^k} accepts
    ``g`` for the generator.
    """
    if field.kind == "rational":
        name_fn = field.var
    elif field.kind == "finite":
        def name_fn(name):
            if name != "g":
                raise ParseError(f"{field} only knows the generator 'g', not {name!r}")
            return field.gen()
    else:
        def name_fn(name):
            raise ParseError(f"{field} has no variables (got {name!r})")
    return parse_expression(text, name_fn, field)
