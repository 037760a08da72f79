import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from insepdim.edim import ed_report, ratio_ok, tau, tv_lower, upper_bound
from insepdim.errors import ValidationError
from insepdim.insep import build_tower, construct_example, descent_certificate, \
    normal_generating_sequence
from insepdim.truncated import EType, all_types

GRID = [(p, n, e) for p in (2, 3, 5) for n in range(1, 5) for e in all_types(4, 4)]


def _by_hand(n, e, p):
    """n * sum over i of p^(e_1 + ... + e_i - i*e_i), from the raw tuple."""
    return n * sum(p ** (sum(e[:i + 1]) - (i + 1) * e[i]) for i in range(len(e)))


@pytest.mark.parametrize("n,e,p,value", [(1, (1,), 2, 1), (2, (2, 2), 3, 4), (1, (3, 1), 2, 5),
                                         (1, (2, 1), 2, 3)])
def test_examples(n, e, p, value):
    r = ed_report(n, e, p)
    assert r.tau == r.upper == r.tv_lower == value


def test_errors():
    with pytest.raises(ValidationError):
        tau(1, (1, 2), 2)
    with pytest.raises(ValidationError):
        tau(1, (1,), 4)
    with pytest.raises(ValidationError):
        tau(0, (1,), 2)


def test_grid_size():
    assert len(GRID) == 828


def test_sandwich_on_full_grid():
    for p, n, e in GRID:
        value = _by_hand(n, e.e, p)
        assert tau(n, e, p) == upper_bound(n, e, p) == tv_lower(n, e, p) == value


def test_report_json():
    doc = ed_report(2, (2, 1), 2).to_json()
    assert doc == {"p": 2, "n": 2, "e": [2, 1], "tau": 6, "upper": 6, "tv_lower": 6,
                   "dim_G": 2 * (2 * 8 - 3), "dim_LieG": 2 * 16, "ratio_ok": True}


def test_ratio_bound_on_grid():
    for p, n, e in GRID:
        assert ed_report(n, e, p).ratio_bound_ok
        assert Fraction(tau(n, e, p), n * e.dim(p)) <= Fraction(1, p)


def test_ratio_rejects_too_large_values():
    assert not ratio_ok(2, 1, EType((1,)), 2)


@given(st.sampled_from([2, 3, 5]), st.integers(1, 6),
       st.lists(st.integers(1, 4), min_size=1, max_size=4))
def test_monotone(p, n, raw):
    e = tuple(sorted(raw, reverse=True))
    assert tau(n + 1, e, p) > tau(n, e, p)
    assert tau(n, e + (e[-1],), p) >= tau(n, e, p)


@pytest.mark.parametrize("p,e", [(p, e) for p in (2, 3) for e in all_types(3, 2)
                                 if e.dim(p) <= 243])
def test_formula_meets_certificate(p, e):
    T = build_tower(construct_example(e, p, 1))
    cert = descent_certificate(T, normal_generating_sequence(T))
    for n in (1, 3):
        assert tau(n, e, p) == n * cert.generator_count


def test_constant_types_give_r():
    for p, r, ei in itertools.product((2, 3), range(1, 5), range(1, 4)):
        assert tau(1, (ei,) * r, p) == r
