from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from torsion_atlas.algnum import INF, algnum_equal, as_algebraic, imag_unit
from torsion_atlas.divpoly import torsion_image
from torsion_atlas.errors import BadInput, BudgetExceeded
from torsion_atlas.exactmath import UniPoly, discriminant
from torsion_atlas.intersect import (
    census_3_5,
    census_3_n,
    certify_shared_point,
    degeneracy_polynomial,
    eliminate,
    moduli_scan,
    recheck_certificate,
    solve_family_params,
    verify_prop_ar,
)
from torsion_atlas.projgeom import SymmetricCurve

P24 = UniPoly.parse("32*x^24+1369*x^20+18812*x^16+90646*x^12+18812*x^8+1369*x^4+32", "x")
P6 = UniPoly.parse("32*x^6+1369*x^5+18812*x^4+90646*x^3+18812*x^2+1369*x+32", "x")
CUBIC = UniPoly.parse("32*r^3+1369*r^2+18716*r+87908", "r")

rationals = st.fractions(min_value=-40, max_value=40, max_denominator=30)


def baseline():
    i = imag_unit()
    return [as_algebraic(0), as_algebraic(1), as_algebraic(-1), i, -i, INF]


@pytest.fixture(scope="module")
def e5():
    return eliminate(5)


@pytest.fixture(scope="module")
def e7():
    return eliminate(7)


@pytest.fixture(scope="module")
def c35():
    return census_3_5()


def test_remainder_identity(e5, e7):
    assert e5.remainder_identity_holds()
    assert e7.remainder_identity_holds()


def test_three_five_polynomials(e5):
    assert e5.stripped.canonical() == P24.rename(e5.stripped.var).canonical()
    t = e5.stripped_t.canonical()
    assert t.coeffs == tuple(reversed(t.coeffs))
    assert t == P6.rename(t.var)
    assert e5.reciprocal_cubic() == CUBIC
    assert discriminant(CUBIC) != 0


def test_three_seven_block(e7):
    blocks = e7.multiplicity_blocks()
    assert blocks.get(3, 0) > 0


def test_degeneracy_locus():
    x = UniPoly.gen("x")
    assert degeneracy_polynomial() == (x**4 - 1) ** 2 + 16 * x**4
    assert degeneracy_polynomial() == x**8 + 14 * x**4 + 1


@given(rationals)
def test_single_shared_order_three_point(x):
    assume(x not in (0, 1, -1))
    a1, a2 = solve_family_params(x)
    assert not algnum_equal(a1, a2)
    I1 = torsion_image(SymmetricCurve(a1), 3)
    I2 = torsion_image(SymmetricCurve(a2), 3)
    shared = [p for p in I1.points if I2.contains(p)]
    assert len(shared) == 1 and algnum_equal(shared[0], as_algebraic(x))


@given(rationals, rationals)
def test_no_second_shared_point(x, y):
    assume(x != y and 0 not in (x, y) and abs(x) != 1 and abs(y) != 1)
    assert verify_prop_ar(x, y)


def test_negated_pair():
    for x in (2, 3, Fraction(1, 3)):
        assert verify_prop_ar(x, -x)


def test_degenerate_x_rejected():
    for x in (0, 1, -1):
        with pytest.raises(BadInput):
            solve_family_params(x)


def test_shared_point_certificate_counts_ten():
    assert certify_shared_point(2).count_lower_bound == 10


@given(rationals)
def test_family_baseline(x):
    assume(x not in (0, 1, -1))
    for a in solve_family_params(x):
        img = torsion_image(SymmetricCurve(a), 4)
        assert len(img) == 6 and all(img.contains(p) for p in baseline())


def test_census_three_five(c35):
    assert c35.u_count == 24 and len(c35.certificates) == 24
    assert min(c.count_lower_bound for c in c35.certificates) >= 14


def test_census_certificates_survive_doubled_precision(c35):
    for c in c35.certificates:
        assert recheck_certificate(c, 2 * c.bits) == c.count_lower_bound


def test_census_three_seven_sample():
    rep = census_3_n(7, max_certificates=2)
    assert max(c.count_lower_bound for c in rep.certificates) >= 22
    assert all(sum(p.order == 7 for p in c.common) == 3 for c in rep.certificates)


def test_elimination_gating():
    with pytest.raises(BadInput):
        eliminate(6)
    with pytest.raises(BudgetExceeded):
        eliminate(11)
    with pytest.raises(BudgetExceeded):
        eliminate(11, extended=True, budget_seconds=1)


def test_moduli_scan_verdicts():
    assert moduli_scan(4, [2, 3, 5]).all_constant
    assert moduli_scan(3, [2, 3, 5]).all_constant
    rep = moduli_scan(5, [2, 3])
    assert rep.nonconstant
    assert rep.to_json()["evidence_only"] is True
