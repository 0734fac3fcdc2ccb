from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orbitcount import poly as P
from orbitcount.poly import MultiPoly, divide_exact, divides, gcd, parse, resultant

coeffs = st.fractions(min_value=-9, max_value=9, max_denominator=5).filter(bool)


def polys(nvars=2, max_deg=3, max_terms=5):
    exps = st.tuples(*[st.integers(0, max_deg)] * nvars).filter(lambda e: sum(e) <= max_deg)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda d: MultiPoly(d, nvars))


nonzero = polys().filter(lambda p: not p.is_zero())
nonconst = polys(max_terms=4).filter(lambda p: not p.is_constant())
points = st.tuples(st.fractions(-5, 5, max_denominator=7), st.fractions(-5, 5, max_denominator=7))


@settings(max_examples=150, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == MultiPoly({}, 2)
    assert a * P.const(1, 2) == a


@settings(max_examples=150, deadline=None)
@given(polys(), polys(), points)
def test_evaluation_is_a_homomorphism(a, b, pt):
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)


@settings(max_examples=150, deadline=None)
@given(nonzero, nonzero, nonconst)
def test_gcd_contract(a, b, r):
    g = gcd(a * r, b * r)
    assert divides(g, a * r) and divides(g, b * r)
    # any common factor is a factor of the gcd
    assert divides(r.primitive(), g)
    assert divide_exact(a * r, r) == a


@settings(max_examples=100, deadline=None)
@given(nonzero, nonzero, nonconst)
def test_heuristic_and_prs_gcd_agree(a, b, r):
    assert gcd(a * r, b * r, method="heu") == gcd(a * r, b * r, method="prs")


@settings(max_examples=150, deadline=None)
@given(nonconst, nonconst)
def test_resultant_vanishes_iff_common_factor_in_y(a, b):
    if a.degree_in(1) == 0 or b.degree_in(1) == 0:
        return
    res = resultant(a, b, 1)
    assert res.degree_in(1) <= 0
    assert res.is_zero() == (gcd(a, b).degree_in(1) > 0)


@settings(max_examples=80, deadline=None)
@given(nonconst, nonconst, nonconst)
def test_resultant_is_multiplicative(a, b, c):
    if min(a.degree_in(1), b.degree_in(1), c.degree_in(1)) == 0:
        return
    assert resultant(a * b, c, 1) == resultant(a, c, 1) * resultant(b, c, 1)


@settings(max_examples=150, deadline=None)
@given(polys(nvars=3, max_deg=4, max_terms=6))
def test_text_round_trip(p):
    assert parse(p.to_text(), 3) == p


@settings(max_examples=150, deadline=None)
@given(polys())
def test_homogenize_round_trip(p):
    h = P.homogenize(p)
    assert h.is_homogeneous()
    assert P.dehomogenize(h) == p


def test_resultant_sign_convention():
    x, y = P.X(0, 2), P.X(1, 2)
    assert resultant(x - y, y, 1) == -x
    assert resultant(y, x - y, 1) == x


def test_resultant_of_conics_in_x():
    x, y = P.X(0, 2), P.X(1, 2)
    r = resultant(x * x + y * y - 1, x - y, 1)
    assert r == 2 * x * x - 1


def test_parse_names():
    assert parse("x^2 - 3/4*y", 2) == MultiPoly({(2, 0): 1, (0, 1): Fraction(-3, 4)}, 2)
    assert parse("x0*x1 + 2*x2^2") == MultiPoly({(1, 1, 0): 1, (0, 0, 2): 2}, 3)
    with pytest.raises(ValueError):
        parse("x +* y", 2)


def test_exact_division_failure():
    x, y = P.X(0, 2), P.X(1, 2)
    with pytest.raises(ArithmeticError):
        divide_exact(x * x + y, x + 1)


def test_gcd_of_homogeneous_forms_stays_homogeneous():
    x0, x1, x2 = P.X(0), P.X(1), P.X(2)
    common = x1 - 2 * x2
    g = gcd(common * (x0 * x0 + x1 * x2), common * x0 * (x1 + x2))
    assert g.is_homogeneous()
    assert g == common or g == -common
