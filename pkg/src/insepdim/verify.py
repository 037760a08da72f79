"""Cross-module consistency checks over a parameter grid (the ``verify`` command)."""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import kernel
from .errors import InsepError, NotAField, ResourceGuard, ValidationError
from .exact import finite_field, galois_field, is_prime, prime_field
from .truncated import EType, all_types


@dataclass(frozen=True)
class Grid:
    primes: tuple[int, ...] = (2, 3)
    max_r: int = 2
    max_e1: int = 2
    max_q: int | None = None        # None: q in {p, p^2}
    max_n: int = 2
    max_lambda_dim: int = 8

    def qs(self, p: int) -> list[int]:
        return [q for q in (p, p * p) if self.max_q is None or q <= self.max_q]


_TERM = re.compile(r"^(p|r|e1|q|n|dim)(<=|=)([0-9|]+)$")


def parse_grid(text: str | None) -> Grid:
    """Grid from ``key<=v`` / ``key=v`` terms, e.g. ``r<=2,p=2|3,q<=4``."""
    g = Grid()
    if not text:
        return g
    fields = {}
    for term in text.replace(" ", "").split(","):
        m = _TERM.match(term)
        if not m:
            raise ValidationError(f"bad grid term {term!r}")
        key, op, val = m.groups()
        vals = [int(v) for v in val.split("|") if v]
        if key == "p":
            if op != "=" and len(vals) == 1:
                vals = [x for x in range(2, vals[0] + 1) if is_prime(x)]
            if not vals or not all(is_prime(v) for v in vals):
                raise ValidationError(f"grid primes {vals} are not all prime")
            fields["primes"] = tuple(vals)
            continue
        if len(vals) != 1:
            raise ValidationError(f"grid term {term!r} needs a single value")
        name = {"r": "max_r", "e1": "max_e1", "q": "max_q", "n": "max_n",
                "dim": "max_lambda_dim"}[key]
        fields[name] = vals[0]
    return Grid(**{**g.__dict__, **fields})


def _row(check, params, ok, detail="", skipped=False):
    row = {"check": check, "params": params, "ok": bool(ok), "detail": detail}
    if skipped:
        row["skipped"] = True
    return row


def _guarded(check, params, fn):
    try:
        return fn()
    except ResourceGuard as exc:
        return _row(check, params, True, f"guarded: {exc}", skipped=True)
    except (InsepError, AssertionError, ValueError) as exc:
        return _row(check, params, False, f"{type(exc).__name__}: {exc}")


def _field_table_check(q, modulus=None):
    p = [x for x in range(2, q + 1) if q % x == 0][0]
    k = 0
    while p ** k < q:
        k += 1
    F = finite_field(p, k, modulus) if modulus is not None else galois_field(q)
    elems = list(F.elements())
    assert len(set(elems)) == q, "duplicate elements"
    for x in elems:
        assert x ** q == x, f"{x}^{q} != {x}"
        if x:
            assert x * x.inv() == F.one(), f"{x} has no inverse"
    return _row("field_table", {"q": q}, True)


def run_checks(grid: Grid, *, guard: int = kernel.DEFAULT_GUARD, workers: int = 1,
               fault: str | None = None) -> list[dict]:
    from . import edim, insep, truncated as T
    from .fdalg import idempotents, ppower_filtration, tensor

    rows = []
    types = all_types(grid.max_r, grid.max_e1)

    # finite field tables
    for p in grid.primes:
        for q in grid.qs(p):
            modulus = (1, 0, 1) if fault == "modulus" and q == 4 else None
            rows.append(_guarded("field_table", {"q": q}, lambda: _field_table_check(q, modulus)))
    if fault not in (None, "modulus"):
        raise ValidationError(f"unknown fault {fault!r}")

    # formula sandwich
    for p in grid.primes:
        for n in range(1, grid.max_n + 1):
            for e in types:
                params = {"p": p, "n": n, "e": list(e.e)}
                rows.append(_guarded("sandwich", params, lambda: _row(
                    "sandwich", params, edim.ed_report(n, e, p).ratio_bound_ok)))

    small = [(p, e) for p in grid.primes for e in types if e.dim(p) <= grid.max_lambda_dim]

    # point counts
    for p, e in small:
        for q in grid.qs(p):
            for l in range(1, e.r + 1):
                params = {"p": p, "q": q, "e": list(e.e), "l": l}
                rows.append(_guarded("alpha", params, lambda: _row(
                    "alpha", params, T.alpha_points(e, l, q, guard=guard, workers=workers).match)))
            params = {"p": p, "q": q, "e": list(e.e)}
            rows.append(_guarded("end", params, lambda: _row(
                "end", params, T.end_points(e, q, guard=guard, workers=workers).match)))

    # wreath products
    for n, e, q in ((2, (1,), 2), (2, (1,), 3), (1, (1, 1), 2)):
        p = q
        et = EType(e)
        if p not in grid.primes or et.r > grid.max_r or n > grid.max_n:
            continue
        if grid.max_q is not None and q > grid.max_q:
            continue
        params = {"n": n, "p": p, "q": q, "e": list(e)}
        rows.append(_guarded("wreath", params, lambda: _row(
            "wreath", params, T.aut_wreath_count(n, et, q, guard=guard).match)))

    # idempotent rigidity and the filtration invariant
    for p, e in small:
        params = {"p": p, "e": list(e.e)}

        def filt():
            f = ppower_filtration(T.lambda_algebra(1, e, prime_field(p)))
            return _row("filtration", params, f.type == e.e, f"dims {list(f.dims)}")
        rows.append(_guarded("filtration", params, filt))
        for q in grid.qs(p):
            qparams = {**params, "q": q}

            def idem():
                A = T.lambda_algebra(1, e, galois_field(q))
                found = idempotents(A, guard=guard)
                return _row("idempotents", qparams,
                            [x.codes() for x in found] == [A.zero().codes(), A.one().codes()])
            rows.append(_guarded("idempotents", qparams, idem))
        if p == 2:
            dparams = {**params, "R": "F2[u]/(u^2)"}

            def dual():
                F2 = prime_field(2)
                R = T.lambda_algebra(1, (1,), F2)
                A = tensor(T.lambda_algebra(1, e, F2), R)
                found = idempotents(A, guard=guard)
                return _row("idempotents", dparams, len(found) == 2)
            rows.append(_guarded("idempotents", dparams, dual))

    # towers
    for p in grid.primes:
        for e in types:
            for seed in (None, 0, 1, 7):
                params = {"p": p, "e": list(e.e), "seed": seed}

                def roundtrip():
                    tw = insep.build_tower(insep.construct_example(e, p, seed))
                    tr = insep.normal_generating_sequence(tw, insep.obfuscated_candidates(tw))
                    cert = insep.descent_certificate(tw, tr)
                    idx = insep.k_lp_index(tw, tr)
                    ok = (tr.e == e and cert.generator_count == sum(e.pickert_terms(p))
                          and idx == p ** e.r
                          and cert.bound == edim.tau(1, e, p))
                    return _row("tower", params, ok, f"type {tr.e}, index {idx}")
                rows.append(_guarded("tower", params, roundtrip))

    # field detection
    if 2 in grid.primes:
        for rhs, expect in (("t^2", False), ("t", True)):
            params = {"p": 2, "rhs": rhs}

            def detect():
                try:
                    insep.build_tower(insep.TowerPresentation(2, ("t",), ((1, rhs),)))
                    return _row("fieldness", params, expect)
                except NotAField:
                    return _row("fieldness", params, not expect)
            rows.append(_guarded("fieldness", params, detect))
    return rows
