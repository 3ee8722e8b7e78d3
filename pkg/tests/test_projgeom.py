from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from torsion_atlas.algnum import INF, algnum_equal, as_algebraic, imag_unit, root_of_unity
from torsion_atlas.divpoly import torsion_image
from torsion_atlas.errors import BadInput
from torsion_atlas.projgeom import (
    FourSet,
    MobiusMap,
    SymmetricCurve,
    WeierstrassCurve,
    classify_four_subsets,
    cross_ratio,
    fourset_equivalent,
    fourset_modulus,
    klein_involutions,
    klein_orbit,
    normalize_to_weierstrass,
    projectively_equivalent,
    standard_klein_group,
)

ints = st.integers(-7, 7)
maps = st.tuples(ints, ints, ints, ints).filter(lambda m: m[0] * m[3] - m[1] * m[2] != 0)
four_points = st.lists(st.integers(-9, 9), min_size=4, max_size=4, unique=True)


def member(p, S):
    return any(algnum_equal(p, q) for q in S)


@given(four_points, maps)
def test_modulus_invariant_under_moebius(pts, m):
    g = MobiusMap(*m)
    S = FourSet(tuple(pts))
    T = FourSet(tuple(g(p) for p in S.points))
    assert algnum_equal(fourset_modulus(S), fourset_modulus(T))


@given(four_points)
def test_modulus_ignores_ordering(pts):
    S = FourSet(tuple(pts))
    j = fourset_modulus(S)
    for perm in ((1, 0, 2, 3), (2, 3, 0, 1), (0, 2, 1, 3), (3, 1, 2, 0)):
        assert algnum_equal(fourset_modulus(FourSet(tuple(pts[i] for i in perm))), j)


@given(four_points)
def test_cross_ratio_formula(pts):
    a = [as_algebraic(p) for p in pts]
    lam = cross_ratio(*a)
    lhs = (a[0] - a[2]) * (a[1] - a[3])
    rhs = (a[1] - a[2]) * (a[0] - a[3])
    assert algnum_equal(lam * rhs, lhs)
    assert algnum_equal(lam, as_algebraic(1)) == algnum_equal(lhs, rhs)


def test_cross_ratio_with_infinity_is_a_limit():
    assert algnum_equal(cross_ratio(as_algebraic(0), as_algebraic(1), as_algebraic(2), INF),
                        as_algebraic(2))


@given(four_points, maps)
def test_equivalence_map_is_genuine(pts, m):
    g = MobiusMap(*m)
    T = [as_algebraic(p) for p in pts]
    S = [g(p) for p in T]
    h = projectively_equivalent(S, T)
    assert h is not None
    assert all(member(h(t), S) for t in T)
    assert algnum_equal(fourset_modulus(FourSet(tuple(S))), fourset_modulus(FourSet(tuple(T))))
    assert fourset_equivalent(S, T)


def test_inequivalent_sets():
    assert projectively_equivalent([0, 1, -1, INF], [0, 1, 3, INF]) is None
    assert not fourset_equivalent([0, 1, -1, INF], [0, 1, 3, INF])


def test_zeta8_set_matches_square():
    S = [root_of_unity(8, k) for k in (1, 3, 5, 7)]
    i = imag_unit()
    assert projectively_equivalent(S, [as_algebraic(1), as_algebraic(-1), i, -i]) is not None


@given(four_points)
def test_klein_involutions(pts):
    S = FourSet(tuple(pts))
    invs = klein_involutions(S)
    assert len(invs) == 3
    for g in invs:
        assert g.compose(g).is_identity()
        assert all(member(g(p), S.points) for p in S.points)
        assert not any(algnum_equal(g(p), p) for p in S.points)
    for g, h in combinations(invs, 2):
        assert g.compose(h).projectively_equal(h.compose(g))


def test_klein_of_product_set_has_ab_over_z():
    S = FourSet((0, 2, 3, INF))
    assert any(g.projectively_equal(MobiusMap(0, 6, 1, 0)) for g in klein_involutions(S))


def test_symmetric_sets_use_standard_group():
    for a in (2, 3, Fraction(1, 5)):
        S = SymmetricCurve(as_algebraic(a)).four_set()
        invs = klein_involutions(S)
        for g in standard_klein_group():
            assert any(g.projectively_equal(h) for h in invs)
    assert len(klein_orbit(as_algebraic(1), standard_klein_group())) == 2


def test_square_klein_group_is_conjugate_to_standard():
    i = imag_unit()
    S = FourSet((as_algebraic(1), as_algebraic(-1), i, -i))
    z8 = root_of_unity(8, 1)
    c = MobiusMap(z8, 0, 0, 1)
    conj = [c.compose(g).compose(c.inverse()) for g in standard_klein_group()]
    for h in klein_involutions(S):
        assert any(h.projectively_equal(k) for k in conj)


def test_six_point_classes():
    i = imag_unit()
    cls = classify_four_subsets([0, 1, -1, i, -i, INF])
    assert sorted(len(c.subsets) for c in cls) == [3, 12]


@given(st.lists(st.integers(-6, 6), min_size=4, max_size=4, unique=True),
       st.integers(1, 4), st.integers(-3, 3))
def test_normalization_choice_is_immaterial(pts, scale, shift):
    S = FourSet(tuple(pts), pts[0])
    images = []
    for sc, sh in ((1, 0), (scale, shift)):
        E, mu = normalize_to_weierstrass(S, sc, sh)
        img = torsion_image(E, 3)
        back = [mu.inverse()(p) for p in img.points]
        images.append(back)
    A, B = images
    assert len(A) == len(B) and all(member(p, B) for p in A)


def test_bad_inputs():
    with pytest.raises(BadInput):
        FourSet((0, 1, 1, INF))
    with pytest.raises(BadInput):
        MobiusMap(1, 2, 2, 4)
    with pytest.raises(BadInput):
        WeierstrassCurve(0, 0, 0)
    with pytest.raises(BadInput):
        SymmetricCurve(as_algebraic(1))
