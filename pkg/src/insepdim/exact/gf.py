"""Moduli and lookup tables for the finite fields F_{p^k}.

For every supported (p, k) the modulus is the lexicographically smallest monic
polynomial of degree k over F_p that is primitive, so the class of ``g`` (the
variable) generates the multiplicative group.  The choice is a pure function of
(p, k): deterministic across runs and processes.

Elements of F_{p^k} are encoded as integers ``sum(a_i * p**i)`` where
``a_0 + a_1 g + ... + a_{k-1} g^{k-1}`` is the reduced representative.
"""

from __future__ import annotations

from functools import lru_cache

from ..errors import UnsupportedField

# F_{p^k} is supported for p^k up to 3^10.
MAX_ORDER = 3 ** 10


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# univariate polynomials over F_p as coefficient lists, low degree first

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymulmod(a, b, mod, p):
    k = len(mod) - 1
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    # mod is monic
    for d in range(len(out) - 1, k - 1, -1):
        c = out[d]
        if c:
            for i in range(k + 1):
                out[d - k + i] = (out[d - k + i] - c * mod[i]) % p
    return _trim(out[:k])


def _polypowmod(a, n, mod, p):
    result, base = [1], list(a)
    while n:
        if n & 1:
            result = _polymulmod(result, base, mod, p)
        n >>= 1
        if n:
            base = _polymulmod(base, base, mod, p)
    return result


def _polygcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b) and a:
            c = (a[-1] * inv) % p
            shift = len(a) - len(b)
            for i, y in enumerate(b):
                a[shift + i] = (a[shift + i] - c * y) % p
            _trim(a)
        a, b = b, a
    return a


def is_irreducible(mod, p) -> bool:
    """Rabin's test for a monic polynomial given low-degree-first."""
    k = len(mod) - 1
    x = [0, 1]
    if _polypowmod(x, p ** k, mod, p) != _trim(list(x)):
        return False
    for r in prime_factors(k):
        h = _polypowmod(x, p ** (k // r), mod, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        g = _polygcd(mod, _trim(diff), p)
        if len(g) > 1:
            return False
    return True


def is_primitive(mod, p) -> bool:
    k = len(mod) - 1
    order = p ** k - 1
    if not is_irreducible(mod, p):
        return False
    x = [0, 1]
    return all(_polypowmod(x, order // r, mod, p) != [1] for r in prime_factors(order))


@lru_cache(maxsize=None)
def modulus(p: int, k: int) -> tuple[int, ...]:
    """The built-in modulus for F_{p^k}, low degree first, monic."""
    if not is_prime(p) or k < 1:
        raise UnsupportedField(f"no field F_{p}^{k}")
    if p ** k > MAX_ORDER:
        raise UnsupportedField(f"F_{p}^{k} exceeds the built-in table (order <= {MAX_ORDER})")
    if k == 1:
        return (0, 1)
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        if low[0] == 0:
            continue
        mod = tuple(low + [1])
        if is_primitive(list(mod), p):
            return mod
    raise AssertionError("a primitive polynomial always exists")


class GFTables:
    """Log/antilog tables for F_{p^k} under a given modulus."""

    def __init__(self, p: int, k: int, mod: tuple[int, ...]):
        self.p, self.k, self.mod = p, k, mod
        self.q = p ** k
        q = self.q
        exp = [0] * (q - 1)
        log = [None] * q
        cur = [1]
        gen = [0, 1] if k > 1 else [_generator_mod_p(p, mod)]
        for i in range(q - 1):
            code = self.encode(cur)
            if log[code] is not None:
                raise UnsupportedField(f"modulus {mod} is not primitive over F_{p}")
            exp[i] = code
            log[code] = i
            cur = _polymulmod(cur, gen, list(mod), p) if k > 1 else [(cur[0] * gen[0]) % p]
        self.exp = exp
        self.log = log

    def encode(self, coeffs) -> int:
        p = self.p
        return sum((c % p) * p ** i for i, c in enumerate(coeffs))

    def decode(self, code: int) -> list[int]:
        p = self.p
        return [(code // p ** i) % p for i in range(self.k)]

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p, out, w = self.p, 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        p, out, w = self.p, 0, 1
        while a:
            out += ((-(a % p)) % p) * w
            a //= p
            w *= p
        return out

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def pow(self, a: int, n: int) -> int:
        if n == 0:
            return 1
        if not a:
            return 0
        return self.exp[(self.log[a] * n) % (self.q - 1)]


def _generator_mod_p(p, mod):
    for g in range(1, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in prime_factors(p - 1)) or p == 2:
            return g
    raise AssertionError


@lru_cache(maxsize=64)
def tables(p: int, k: int, mod: tuple[int, ...]) -> GFTables:
    return GFTables(p, k, mod)
