import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

import torsion_atlas.closure as closure
from torsion_atlas.algnum import INF, algnum_equal, as_algebraic, imag_unit
from torsion_atlas.closure import (
    GenerationRule,
    closure_explore,
    cube_root_identities,
    cube_root_step,
    four_torsion_of_set,
    product_root_step,
    replay,
    sqrt_product_step,
    sqrt_shift_step,
)
from torsion_atlas.divpoly import TorsionImage
from torsion_atlas.errors import BadInput, VerificationFailure
from torsion_atlas.exactmath import UniPoly
from torsion_atlas.projgeom import projectively_equivalent

SEED = [0, 1, -1, INF]


def test_identities_are_exact():
    checks = cube_root_identities()
    assert [c.name for c in checks] == ["division_polynomial", "resolvent", "shifted_resolvent"]
    assert all(c.holds and c.difference == "0" for c in checks)


def test_four_torsion_of_set_has_six_points():
    img = four_torsion_of_set(SEED)
    assert len(img) == 6
    i = imag_unit()
    assert projectively_equivalent([0, 1, -1, i, -i, INF], img.points) is not None


@given(st.integers(2, 40))
def test_sqrt_in_image(a):
    img = four_torsion_of_set((0, 1, a, INF))
    s = as_algebraic(a).sqrt()
    assert img.contains(s) and img.contains(-s)


@given(st.integers(-9, 9), st.integers(-9, 9))
def test_sqrt_product(a, b):
    if a == 0 or b == 0:
        return
    w = sqrt_product_step(a, b)
    assert algnum_equal(w * w, as_algebraic(a * b))


def test_sqrt_shift_examples():
    assert algnum_equal(sqrt_shift_step(3, 1) ** 2, as_algebraic(4))
    w = sqrt_shift_step(5, 0)
    assert w.minpoly == UniPoly.parse("x^2-5", "x")


def test_sqrt_shift_degenerate():
    # b = d + 1 with d = 0 when c = 0
    with pytest.raises(BadInput):
        sqrt_shift_step(1, 0)


def test_membership_is_rechecked_every_call(monkeypatch):
    calls = []
    real = closure.four_torsion_of_set

    def counting(r):
        calls.append(r)
        return real(r)

    monkeypatch.setattr(closure, "four_torsion_of_set", counting)
    sqrt_shift_step(3, 1)
    first = len(calls)
    sqrt_shift_step(3, 1)
    assert first > 0 and len(calls) == 2 * first


def test_membership_failure_is_reported(monkeypatch):
    monkeypatch.setattr(closure, "four_torsion_of_set", lambda r: TorsionImage(4, []))
    with pytest.raises(VerificationFailure):
        sqrt_product_step(2, 3)


def test_product_roots():
    assert algnum_equal(product_root_step([2, 8]), as_algebraic(4))
    assert product_root_step([2, 2, 2]).minpoly == UniPoly.parse("x^4-8", "x")
    assert algnum_equal(product_root_step([1, 1]) ** 2, as_algebraic(1))


@given(st.lists(st.integers(2, 7), min_size=2, max_size=3))
def test_product_root_powers_back(bs):
    r = product_root_step(bs)
    prod = 1
    for b in bs:
        prod *= b
    assert algnum_equal(r ** (2 ** (len(bs) - 1)), as_algebraic(prod))


@pytest.mark.parametrize("b", [2, 3, -5])
def test_cube_roots(b):
    roots = cube_root_step(b)
    assert len(roots) == 3
    for t in roots:
        assert algnum_equal(t**3, as_algebraic(-(b - 1) ** 2))


def test_rules_validated():
    with pytest.raises(BadInput):
        GenerationRule("n_torsion", frozenset({3}))
    with pytest.raises(BadInput):
        GenerationRule("magic")


def test_seed_round_contains_normal_form():
    st_ = closure_explore(SEED, depth=1)
    i = imag_unit()
    assert all(st_.contains(p) for p in [as_algebraic(0), as_algebraic(1), as_algebraic(-1), i, -i, INF])
    assert not st_.truncated


@pytest.fixture(scope="module")
def small_runs():
    a = closure_explore(SEED, depth=2, budget=25)
    b = closure_explore(SEED, depth=2, budget=25)
    one = closure_explore(SEED, depth=1, budget=25)
    return a, b, one


def test_determinism(small_runs):
    a, b, _ = small_runs
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)


def test_replay(small_runs):
    a, _, _ = small_runs
    r = replay(SEED, a.log)
    assert [p.to_json() if p is not INF else "inf" for p in r.elements] == \
        [p.to_json() if p is not INF else "inf" for p in a.elements]


def test_monotone_and_truncation(small_runs):
    a, _, one = small_runs
    assert all(a.contains(p) for p in one.elements)
    assert a.truncated
    assert a.to_json()["truncated"] is True


def test_replay_detects_tampering(small_runs):
    a, _, _ = small_runs
    log = list(a.log)
    first = log[0]
    bad = closure.LogEntry(first.rule, first.order, first.inputs, first.outputs[1:])
    with pytest.raises(VerificationFailure):
        replay(SEED, [bad] + log[1:])


def test_other_rules_run():
    st_ = closure_explore([2, 3, INF, 0], [GenerationRule("sqrt_product"), GenerationRule("cube_root")],
                          depth=1, budget=10)
    assert st_.contains(as_algebraic(6).sqrt())
    assert st_.stats()
