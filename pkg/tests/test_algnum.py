from fractions import Fraction
from itertools import combinations

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from torsion_atlas.algnum import (
    INF,
    AlgebraicNumber,
    algnum_equal,
    as_algebraic,
    imag_unit,
    isolate_roots,
    point_from_json,
    point_set_intersect,
    point_to_json,
    root_of_unity,
    squarefree_part,
)
from torsion_atlas.exactmath import UniPoly

coeff_lists = st.lists(st.integers(-20, 20), min_size=2, max_size=7).filter(lambda c: c[-1] != 0)


def mp_roots(cs):
    mpmath.mp.prec = 300
    return mpmath.polyroots(list(reversed(cs)), maxsteps=400, extraprec=600)


def inside(ball, z) -> bool:
    re, im = Fraction(str(mpmath.re(z))), Fraction(str(mpmath.im(z)))
    d2 = (ball.re - re) ** 2 + (ball.im - im) ** 2
    return d2 <= (ball.rad + Fraction(1, 10**60)) ** 2


@given(coeff_lists)
def test_isolation_against_mpmath(cs):
    p = UniPoly(cs, "x")
    balls = isolate_roots(p, 128)
    assert len(balls) == squarefree_part(p).degree
    for a, b in combinations(balls, 2):
        assert a.disjoint(b)
    for z in mp_roots(cs):
        assert sum(inside(b, z) for b in balls) == 1


@given(coeff_lists)
def test_precision_refinement_shrinks(cs):
    p = UniPoly(cs, "x")
    assume(squarefree_part(p).degree > 0)
    roots = AlgebraicNumber.roots_of(p, 96)
    fine = [r.refined(192) for r in roots]
    for r, f in zip(roots, fine):
        assert f.ball.rad <= r.ball.rad
        assert r.ball.contains(f.ball) or r.ball.overlaps(f.ball)
    for (r1, f1), (r2, f2) in combinations(zip(roots, fine), 2):
        assert algnum_equal(r1, r2) == algnum_equal(f1, f2)


def test_sqrt_arithmetic():
    s = as_algebraic(2).sqrt()
    assert s.minpoly == UniPoly([-2, 0, 1], "x")
    assert algnum_equal(s * s, as_algebraic(2))
    t = s + as_algebraic(3).sqrt()
    assert t.minpoly == UniPoly.parse("x^4-10*x^2+1", "x")
    assert abs(t.approx() - (2**0.5 + 3**0.5)) < 1e-12


def test_roots_of_unity():
    z = root_of_unity(8, 1)
    assert z.minpoly == UniPoly.parse("x^4+1", "x")
    assert algnum_equal(z * z, imag_unit())
    assert algnum_equal(root_of_unity(3, 1) ** 3, as_algebraic(1))


@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(1, 7))
def test_equality_is_an_equivalence(a, b, d):
    x = as_algebraic(Fraction(a, d)) + as_algebraic(2).sqrt()
    y = as_algebraic(2).sqrt() + Fraction(a, d)
    z = (as_algebraic(Fraction(a, d)) * 2 + as_algebraic(8).sqrt()) / 2
    w = as_algebraic(Fraction(b, d)) + as_algebraic(2).sqrt()
    pts = [x, y, z, w]
    for p in pts:
        assert algnum_equal(p, p)
    for p, q in combinations(pts, 2):
        assert algnum_equal(p, q) == algnum_equal(q, p)
    for p, q, r in [(x, y, z), (y, z, w), (x, z, w)]:
        if algnum_equal(p, q) and algnum_equal(q, r):
            assert algnum_equal(p, r)
    assert algnum_equal(x, w) == (a == b)


def test_infinity_handling():
    assert algnum_equal(INF, INF)
    assert not algnum_equal(INF, as_algebraic(0))


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=5),
       st.lists(st.integers(-5, 5), min_size=1, max_size=5))
def test_intersection_symmetric(A, B):
    S = [as_algebraic(a) for a in set(A)] + [as_algebraic(2).sqrt()]
    T = [as_algebraic(b) for b in set(B)] + [INF, as_algebraic(2).sqrt()]
    st_ = point_set_intersect(S, T)
    ts_ = point_set_intersect(T, S)
    assert len(st_) == len(ts_)
    assert all(any(algnum_equal(p, q) for q in ts_) for p in st_)


def test_json_round_trip():
    for p in (as_algebraic(Fraction(-3, 7)), as_algebraic(5).sqrt(), root_of_unity(5, 2), INF):
        q = point_from_json(point_to_json(p))
        assert algnum_equal(p, q)


def test_roots_carry_irreducible_minpolys():
    p = UniPoly.parse("x^3-x^2-2*x+2", "x")  # (x - 1)(x^2 - 2)
    mps = sorted({r.minpoly.to_text() for r in AlgebraicNumber.roots_of(p)})
    assert mps == ["x-1", "x^2-2"]


def test_zero_polynomial_rejected():
    from torsion_atlas.errors import BadInput

    with pytest.raises(BadInput):
        AlgebraicNumber.roots_of(UniPoly([0], "x"))
