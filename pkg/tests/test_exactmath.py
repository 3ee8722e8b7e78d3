from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import order_n_pairs, sylvester_resultant
from torsion_atlas.errors import BadInput
from torsion_atlas.exactmath import (
    MPoly,
    UniPoly,
    discriminant,
    divrem_in_var,
    jordan_totient,
    parse_poly,
    poly_gcd,
    reciprocal_reduce,
    resultant,
    squarefree_factor,
    strip_trivial_factors,
    totient_coincidence_scan,
)

small = st.integers(-9, 9)
coeff_lists = st.lists(small, min_size=2, max_size=6).filter(lambda c: c[-1] != 0)


def upoly(cs, var="x"):
    return UniPoly(cs, var)


@given(coeff_lists, coeff_lists)
def test_resultant_matches_sylvester(p, q):
    assert resultant(upoly(p), upoly(q)) == sylvester_resultant(p, q)


@given(coeff_lists, coeff_lists)
def test_gcd_divides_and_resultant_detects_it(p, q):
    P, Q = upoly(p), upoly(q)
    g = poly_gcd(P, Q)
    assert (P % g).is_zero() and (Q % g).is_zero()
    assert (resultant(P, Q) == 0) == (g.degree > 0)


@given(coeff_lists, coeff_lists, coeff_lists)
def test_shared_factor_kills_resultant(p, q, r):
    R = upoly(r)
    assume(R.degree > 0)
    assert resultant(upoly(p) * R, upoly(q) * R) == 0


def test_bivariate_resultant_eliminates():
    # x^2 + y^2 - 1 and x - y meet where 2y^2 = 1
    x, y = MPoly.gens(("x", "y"))
    r = resultant(x**2 + y**2 - 1, x - y, "x")
    assert r.canonical() == UniPoly([-1, 0, 2], "y")


@given(st.lists(small, min_size=1, max_size=4), st.lists(small, min_size=2, max_size=4),
       st.integers(1, 3))
def test_divrem_identity(fc, gc, k):
    f, g = MPoly.gens(("x", "a"))
    F = sum((c * f**i * (g + 1) ** (k - 1) for i, c in enumerate(fc)), MPoly.constant(0, ("x", "a")))
    G = sum((c * g**i * f for i, c in enumerate(gc)), MPoly.constant(0, ("x", "a"))) + g ** len(gc)
    dr = divrem_in_var(F, G, "a")
    assert dr.check(F, G)
    assert dr.remainder.is_zero() or dr.remainder.degree("a") < G.degree("a")


@given(st.lists(st.tuples(coeff_lists, st.integers(1, 3)), min_size=1, max_size=3),
       st.integers(1, 5))
def test_squarefree_reconstructs(parts, unit):
    p = UniPoly([unit], "x")
    for cs, e in parts:
        p = p * upoly(cs) ** e
    fl = squarefree_factor(p)
    assert fl.expand() == p
    for f, _ in fl.factors:
        assert poly_gcd(f, f.derivative()).degree == 0


def test_squarefree_multiplicities():
    x = UniPoly.gen("x")
    fl = squarefree_factor(3 * x**2 * (x - 1) ** 3 * (x**2 + 1))
    assert fl.multiplicities() == {1: 2, 2: 1, 3: 1}


@given(st.lists(small, min_size=1, max_size=5))
def test_reciprocal_round_trip(half):
    assume(half[-1] != 0)
    # a palindrome t^m q(t + 1/t) built from q directly
    q = upoly(half, "r")
    m = q.degree
    t = UniPoly.gen("t")
    p = UniPoly([0], "t")
    for k, c in enumerate(q.coeffs):
        p = p + c * (t**2 + 1) ** k * t ** (m - k)
    assert p.is_palindromic()
    back = reciprocal_reduce(p, "r")
    assert back == q


def test_reciprocal_example():
    p = parse_poly("32*t^6+1369*t^5+18812*t^4+90646*t^3+18812*t^2+1369*t+32", ("t",))
    assert reciprocal_reduce(p) == parse_poly("32*r^3+1369*r^2+18716*r+87908", ("r",))


def test_reciprocal_rejects_non_palindromes():
    with pytest.raises(BadInput):
        reciprocal_reduce(UniPoly([1, 2, 3], "t"))


def test_strip_trivial_factors():
    u = UniPoly.gen("u")
    core = u**2 + u + 7
    p, mults = strip_trivial_factors(u**3 * (u - 1) ** 2 * core, [0, 1])
    assert mults == [3, 2] and p == core


def test_discriminant_cubic_nonzero():
    assert discriminant(parse_poly("32*r^3+1369*r^2+18716*r+87908", ("r",))) != 0
    assert discriminant(parse_poly("x^2-2*x+1", ("x",))) == 0


@given(st.integers(1, 60))
def test_j2_counts_order_n_pairs(n):
    assert jordan_totient(2, n) == order_n_pairs(n)


@given(st.integers(1, 3), st.integers(1, 40), st.integers(1, 40))
def test_jordan_multiplicative(k, m, n):
    assume(gcd(m, n) == 1)
    assert jordan_totient(k, m * n) == jordan_totient(k, m) * jordan_totient(k, n)


def test_totient_examples():
    assert jordan_totient(2, 5) == jordan_totient(2, 6) == 24
    assert jordan_totient(2, 15) == jordan_totient(2, 16) == 192
    assert jordan_totient(1, 15) == jordan_totient(1, 16) == 8
    groups = [g for _, g in totient_coincidence_scan(2, 50)]
    assert [35, 40, 42] in groups
    assert totient_coincidence_scan(2, 6) == [(24, [5, 6])]


@given(st.lists(small, min_size=1, max_size=6))
def test_text_round_trip(cs):
    p = upoly(cs)
    assert UniPoly.parse(p.to_text(), "x") == p


def test_parse_rejects_garbage():
    with pytest.raises(BadInput):
        parse_poly("x^^2", ("x",))


def test_rational_coefficients():
    p = parse_poly("1/3*x^2+1/2", ("x",))
    assert p.coeffs == (Fraction(1, 2), 0, Fraction(1, 3))
