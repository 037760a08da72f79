"""The nine acceptance criteria, each reported as one PASS/FAIL line.

The lines are printed at the end of the pytest run (and inline with ``-s``).  Every
criterion is checked at its stated tolerance (exact equality) and time budget.
Tower points whose degree is above ``TOWER_DEGREE[p]`` are not attempted and are
reported as unverified, which makes criteria 4 and 5 fail.  Their time is the
sum over attempted points of the work specific to each criterion; building the
tower is charged to criterion 4.
"""

import math
import time

import pytest

from conftest import ACCEPTANCE_LINES
from insepdim.edim import ed_report, ratio_ok, tau
from insepdim.errors import NotAField, ResourceGuard
from insepdim.exact import galois_field, prime_field
from insepdim.fdalg import idempotents, ppower_filtration, tensor
from insepdim.insep import (TowerPresentation, build_tower, construct_example,
                            descent_certificate, k_lp_index, normal_generating_sequence,
                            obfuscated_candidates, pickert_coefficients)
from insepdim.truncated import (EType, all_types, alpha_closed_form, alpha_points,
                                aut_wreath_count, end_points, lambda_algebra, scheme_dims)

PRIMES = (2, 3, 5)
TYPES = all_types(4, 4)
SMALL = [(p, e) for p in (2, 3) for e in all_types(3, 3) if e.dim(p) <= 8]

# Largest tower degree attempted per prime for criteria 4 and 5, sized so the
# attempted points fit the 120 s budget on one core.  Every p = 2 point is in.
TOWER_DEGREE = {2: 2 ** 16, 3: 3 ** 8, 5: 5 ** 5}


def report(number, ok, detail, elapsed, budget):
    in_time = budget is None or elapsed < budget
    status = "PASS" if ok and in_time else "FAIL"
    limit = f" (budget {budget} s)" if budget is not None else ""
    line = f"{status} criterion {number}: {detail}; {elapsed:.1f} s{limit}"
    ACCEPTANCE_LINES.append(line)
    print("\n" + line)
    assert ok, detail
    assert in_time, f"took {elapsed:.1f} s, budget {budget} s"


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_1_formula_sandwich():
    bad = []
    with Clock() as clock:
        points = [(p, n, e) for p in PRIMES for n in range(1, 5) for e in TYPES]
        for p, n, e in points:
            r = ed_report(n, e, p)
            if not (r.tau == r.upper == r.tv_lower):
                bad.append((p, n, e))
    report(1, not bad, f"{len(points) - len(bad)}/{len(points)} points with tau = upper = tv_lower",
           clock.elapsed, 1)


def test_criterion_2_point_counts():
    bad, checked, guarded = [], 0, 0
    with Clock() as clock:
        for p, e in SMALL:
            for q in (p, p * p):
                factors = []
                for l in range(1, e.r + 1):
                    count = alpha_points(e, l, q).count
                    expected = q ** scheme_dims(e, p).dim_factor[l - 1]
                    checked += 1
                    if not count == expected == alpha_closed_form(e, l, q):
                        bad.append(("alpha", p, e, q, l))
                    factors.append(count)
                try:
                    end = end_points(e, q).count
                except ResourceGuard:
                    guarded += 1
                    continue
                checked += 1
                if end != math.prod(factors):
                    bad.append(("end", p, e, q))
    report(2, not bad, f"{checked - len(bad)}/{checked} counts agree, {guarded} End counts "
           f"beyond the enumeration guard", clock.elapsed, 60)


def test_criterion_3_wreath_counts():
    cases = {(2, (1,), 2, 2): 2, (2, (1,), 3, 3): 72, (1, (1, 1), 2, 2): 24}
    with Clock() as clock:
        got = {k: aut_wreath_count(n, e, q).count for k in cases for n, e, _, q in [k]}
    report(3, got == cases, f"counts {list(got.values())}, expected {list(cases.values())}",
           clock.elapsed, 60)


_TOWERS = {}


def _tower_results():
    """One pass over the tower grid shared by criteria 4 and 5.

    Each entry maps (p, e, seed) to a dict with the outcome of both checks
    and the time each one took, or to None when the point was not attempted.
    """
    if _TOWERS:
        return _TOWERS
    for p in PRIMES:
        for e in TYPES:
            for seed in (0, 1, 7):
                if e.dim(p) > TOWER_DEGREE[p]:
                    _TOWERS[p, e, seed] = None
                    continue
                t0 = time.perf_counter()
                try:
                    T = build_tower(construct_example(e, p, seed, max_dim=e.dim(p)),
                                    max_dim=e.dim(p))
                    tr = normal_generating_sequence(T, obfuscated_candidates(T))
                    count = pickert_coefficients(T, tr).count
                    t1 = time.perf_counter()
                    index = k_lp_index(T, tr)
                except ResourceGuard:
                    _TOWERS[p, e, seed] = None
                    continue
                t2 = time.perf_counter()
                expected = sum(p ** (e.s(i) - i * e.e[i - 1]) for i in range(1, e.r + 1))
                _TOWERS[p, e, seed] = {"roundtrip": tr.e == e and count == expected,
                                       "index": index == p ** e.r,
                                       "t_roundtrip": t1 - t0, "t_index": t2 - t1}
    return _TOWERS


def _tower_criterion(number, key, budget):
    results = _tower_results()
    done = {k: v for k, v in results.items() if v is not None}
    wrong = [k for k, v in done.items() if not v[key]]
    skipped = len(results) - len(done)
    elapsed = sum(v["t_" + key] for v in done.values())
    detail = (f"{len(done) - len(wrong)}/{len(results)} towers verified, {len(wrong)} wrong, "
              f"{skipped} not verified (degree cap {TOWER_DEGREE} or polynomial degree "
              f"guard; grid degrees reach {max(e.dim(5) for e in TYPES)})")
    report(number, not wrong and not skipped, detail, elapsed, budget)


def test_criterion_4_pickert_roundtrip():
    _tower_criterion(4, "roundtrip", 120)


def test_criterion_5_k_lp_index():
    _tower_criterion(5, "index", None)


def test_criterion_6_idempotent_rigidity():
    bad, checked = [], 0
    F2 = prime_field(2)
    dual = lambda_algebra(1, (1,), F2)
    with Clock() as clock:
        for p, e in SMALL:
            fields = [F2, galois_field(4)] if p == 2 else [prime_field(3)]
            algebras = [lambda_algebra(1, e, F) for F in fields]
            if p == 2:
                algebras.append(tensor(lambda_algebra(1, e, F2), dual))
            for A in algebras:
                checked += 1
                found = [x.codes() for x in idempotents(A)]
                if found != [A.zero().codes(), A.one().codes()]:
                    bad.append((p, e, A.base))
    report(6, not bad, f"{checked - len(bad)}/{checked} algebras have only 0 and 1",
           clock.elapsed, 30)


def test_criterion_7_fieldness():
    def accepted(rhs):
        try:
            build_tower(TowerPresentation(2, ("t",), ((1, rhs),)))
            return True
        except NotAField:
            return False
    with Clock() as clock:
        results = (accepted("t^2"), accepted("t"))
    report(7, results == (False, True), f"y^2 = t^2 accepted: {results[0]}, "
           f"y^2 = t accepted: {results[1]}", clock.elapsed, None)


def test_criterion_8_filtration_separates():
    F2 = prime_field(2)
    with Clock() as clock:
        a = ppower_filtration(lambda_algebra(1, (2,), F2)).dims
        b = ppower_filtration(lambda_algebra(1, (1, 1), F2)).dims
        wrong = [(p, e) for p, e in SMALL
                 if ppower_filtration(lambda_algebra(1, e, prime_field(p))).type != e.e]
    ok = a == (4, 2, 1) and b == (4, 1) and not wrong
    report(8, ok, f"dims {a} vs {b}, {len(SMALL) - len(wrong)}/{len(SMALL)} types recovered",
           clock.elapsed, None)


def test_criterion_9_constant_types():
    bad = []
    with Clock() as clock:
        for p in (2, 3):
            for r in range(1, 5):
                for ei in range(1, 4):
                    e = EType((ei,) * r)
                    if tau(1, e, p) != r:
                        bad.append(("tau", p, e))
                    # unperturbed towers stay cheap up to 3^12
                    T = build_tower(construct_example(e, p), max_dim=e.dim(p))
                    cert = descent_certificate(T, normal_generating_sequence(T))
                    if cert.bound != r or not ratio_ok(cert.bound, 1, e, p):
                        bad.append(("certificate", p, e))
    report(9, not bad, f"{24 - len(bad)}/24 constant types with tau = bound = r"
           + (f"; failures {bad}" if bad else ""), clock.elapsed, None)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-s", "-q"]))
