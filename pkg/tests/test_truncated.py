import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from insepdim.errors import NotBlockPermuting, ResourceGuard, ValidationError
from insepdim.exact import galois_field, prime_field
from insepdim.truncated import (Automorphism, EType, aut_closed_form, aut_points,
                                aut_to_permutation, aut_wreath_count, alpha_closed_form,
                                alpha_points, all_types, end_points, iter_alpha, iter_end,
                                iter_wreath, lambda_algebra, scheme_dims)

GRID = [(p, e) for p in (2, 3) for e in all_types(3, 3) if e.dim(p) <= 8]


# types

def test_etype_validation():
    assert EType.parse("2,1").e == (2, 1)
    assert EType.parse("(3, 1)").e == (3, 1)
    assert str(EType.parse([2, 2])) == "(2,2)"
    for bad in ("1,2", "0", "", "a"):
        with pytest.raises(ValidationError):
            EType.parse(bad)


def test_pickert_terms():
    assert EType((2, 1)).pickert_terms(2) == [1, 2]
    assert EType((3, 1)).pickert_terms(2) == [1, 4]
    assert EType((2, 2, 2)).pickert_terms(5) == [1, 1, 1]


# algebras

def test_lambda_algebra_examples():
    F2 = prime_field(2)
    A = lambda_algebra(1, (1,), F2)
    x = A.basis_elem(1)
    assert A.dim == 2 and (x * x).is_zero()
    assert lambda_algebra(1, (2, 1), F2).dim == 8
    B = lambda_algebra(2, (1,), F2)
    assert B.dim == 4
    e0, e1 = B.basis_elem(0), B.basis_elem(2)
    assert (e0 * e1).is_zero() and e0 + e1 == B.one()
    assert e0 * e0 == e0


# closed forms

def test_scheme_dims_examples():
    d = scheme_dims((1,), 2)
    assert (d.dim_X, d.dim_tangent, d.dim_G) == (1, 2, 1)
    d = scheme_dims((1, 1), 2)
    assert (d.dim_X, d.dim_tangent) == (6, 8)
    d = scheme_dims((2, 1), 2)
    assert (d.dim_X, d.dim_tangent) == (13, 16)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_tangent_excess(p):
    for e in all_types(4, 4):
        d = scheme_dims(e, p)
        excess = d.dim_tangent - d.dim_X
        assert excess == sum(e.pickert_terms(p)) >= e.r
        assert (excess == e.r) == (len(set(e.e)) == 1)


def test_aut_closed_form_small_cases():
    # (1), q=2: only x -> x; (1), q=3: x -> a x + b x^2 with a != 0
    assert aut_closed_form((1,), 2) == 1
    assert aut_closed_form((1,), 3) == 6
    assert aut_closed_form((1, 1), 2) == 24


# enumeration

@pytest.mark.parametrize("e,q,count", [((1,), 2, 2), ((1, 1), 2, 8), ((2,), 2, 8)])
def test_alpha_examples(e, q, count):
    res = alpha_points(e, 1, q)
    assert res.count == count and res.match


@pytest.mark.parametrize("e,q,count", [((1,), 2, 2), ((1, 1), 2, 64), ((1,), 3, 9)])
def test_end_examples(e, q, count):
    assert end_points(e, q).count == count


@pytest.mark.parametrize("e,q,count", [((1,), 2, 1), ((1,), 3, 6), ((1, 1), 2, 24)])
def test_aut_examples(e, q, count):
    res = aut_points(e, q)
    assert res.count == count and res.closed_form == count


@pytest.mark.parametrize("n,e,q,count", [(2, (1,), 2, 2), (2, (1,), 3, 72), (1, (1, 1), 2, 24)])
def test_wreath_examples(n, e, q, count):
    assert aut_wreath_count(n, e, q).count == count


def _brute_alpha(e, l, q):
    """Independent count with plain element arithmetic."""
    F = galois_field(q)
    A = lambda_algebra(1, e, F)
    e = EType.parse(e)
    elems = list(F.elements())
    ql = e.q(l, F.p)
    return sum(1 for c in itertools.product(elems, repeat=A.dim) if (A.elem(c) ** ql).is_zero())


@pytest.mark.parametrize("p,e", GRID)
def test_alpha_grid(p, e):
    for q in (p, p * p):
        for l in range(1, e.r + 1):
            res = alpha_points(e, l, q)
            dim_factor = scheme_dims(e, p).dim_factor[l - 1]
            assert res.count == alpha_closed_form(e, l, q) == q ** dim_factor
            if q ** e.dim(p) <= 4096:
                assert res.count == _brute_alpha(e, l, q)


@pytest.mark.parametrize("p,e", GRID)
def test_end_is_product_of_factors(p, e):
    for q in (p, p * p):
        if (q ** e.dim(p)) ** e.r > 1 << 24:
            continue
        factors = [alpha_points(e, l, q).count for l in range(1, e.r + 1)]
        assert end_points(e, q).count == math.prod(factors)


def test_iterators_agree_with_counts():
    assert len(list(iter_alpha((1, 1), 1, 2))) == 8
    assert len(list(iter_end((1, 1), 2))) == 64
    for x in iter_alpha((2,), 1, 2):
        assert (x ** 4).is_zero()
    assert not all((x ** 2).is_zero() for x in iter_alpha((2,), 1, 2))


def test_parallel_counts_match():
    assert alpha_points((2, 1), 2, 4, workers=4).count == alpha_points((2, 1), 2, 4).count


def test_guard_and_closed_mode():
    with pytest.raises(ResourceGuard):
        alpha_points((3, 3), 1, 2)
    res = alpha_points((3, 3), 1, 2, mode="closed")
    assert res.count is None and not res.match
    assert res.to_json()["formula_only"] is True


def test_bad_q():
    with pytest.raises(ValidationError):
        alpha_points((1,), 1, 6)


@pytest.mark.parametrize("e,q", [((1,), 2), ((1,), 3), ((2,), 2), ((1, 1), 2), ((2, 1), 2)])
def test_aut_enumeration_matches_closed_form(e, q):
    res = aut_points(e, q)
    assert res.match
    assert res.count < end_points(e, q).count


# automorphism groups

def _autos(n, e, q):
    return list(iter_wreath(n, e, q))


def _key(f):
    return f.matrix.tobytes()


_WREATH = _autos(2, (1,), 3)


def test_automorphisms_closed_under_composition():
    rng = random.Random(5)
    for n, e, q in ((1, (1, 1), 2), (1, (1,), 3), (2, (1,), 3)):
        autos = _autos(n, e, q)
        keys = {_key(f) for f in autos}
        for _ in range(30):
            f, g = rng.choice(autos), rng.choice(autos)
            h = f @ g
            assert _key(h) in keys
            assert h.is_homomorphism()


def test_permutation_examples():
    A = lambda_algebra(2, (1,), prime_field(2))
    ident = Automorphism(A, np.eye(4, dtype=np.int64), 2)
    assert aut_to_permutation(ident) == (0, 1)
    swap = np.zeros((4, 4), dtype=np.int64)
    swap[2, 0] = swap[3, 1] = swap[0, 2] = swap[1, 3] = 1
    assert aut_to_permutation(Automorphism(A, swap, 2)) == (1, 0)
    # x_b -> x_b + (something in the block) keeps the idempotents
    for f in _autos(2, (1,), 3):
        if f.matrix[0, 0] == 1 and f.matrix[2, 2] == 1:
            assert aut_to_permutation(f) == (0, 1)


def test_permutation_rejects_non_block_maps():
    A = lambda_algebra(2, (1,), prime_field(2))
    M = np.eye(4, dtype=np.int64)
    M[1, 0] = 1
    with pytest.raises(NotBlockPermuting):
        aut_to_permutation(Automorphism(A, M, 2))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_permutation_is_multiplicative(data):
    f = data.draw(st.sampled_from(_WREATH))
    g = data.draw(st.sampled_from(_WREATH))
    pf, pg = aut_to_permutation(f), aut_to_permutation(g)
    assert aut_to_permutation(f @ g) == tuple(pf[pg[i]] for i in range(len(pf)))


def test_wreath_has_both_permutations():
    perms = [aut_to_permutation(f) for f in _WREATH]
    assert perms.count((0, 1)) == perms.count((1, 0)) == 36
