"""Battery of exact checks behind `torsion-atlas verify-paper`.

Every check takes a shared memo and an integer ``tweak``.  A nonzero tweak
perturbs the pinned constant the check compares against, which is how the
harness demonstrates that a broken identity is caught and named.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .algnum import (
    DEFAULT_BITS,
    INF,
    AlgebraicNumber,
    algnum_equal,
    as_algebraic,
    imag_unit,
    root_of_unity,
)
from .closure import (
    ClosureState,
    GenerationRule,
    closure_explore,
    cube_root_identities,
    four_torsion_of_set,
    sqrt_product_step,
    sqrt_shift_step,
)
from .divpoly import (
    image_equal,
    primitive_divpoly,
    symmetric_family_divpoly,
    torsion_image,
)
from .errors import BudgetExceeded, TorsionAtlasError
from .exactmath import (
    MPoly,
    UniPoly,
    discriminant,
    jordan_totient,
    squarefree_factor,
    totient_coincidence_scan,
)
from .intersect import (
    CensusReport,
    EliminationResult,
    census_3_5,
    census_3_n,
    certify_shared_point,
    degeneracy_polynomial,
    eliminate,
    family_cubic_in_a,
    moduli_scan,
    solve_family_params,
    verify_prop_ar,
)
from .projgeom import (
    FourSet,
    MobiusMap,
    SymmetricCurve,
    WeierstrassCurve,
    classify_four_subsets,
    cross_ratio,
    fourset_equivalent,
    klein_involutions,
    projectively_equivalent,
    standard_klein_group,
)

P24_TEXT = "32*x^24+1369*x^20+18812*x^16+90646*x^12+18812*x^8+1369*x^4+32"
P6_TEXT = "32*x^6+1369*x^5+18812*x^4+90646*x^3+18812*x^2+1369*x+32"
CUBIC_TEXT = "32*x^3+1369*x^2+18716*x+87908"


def _u(text: str, tweak: int = 0, var: str = "x") -> UniPoly:
    return UniPoly.parse(text, var) + tweak


def _proportional(p: UniPoly, q: UniPoly) -> bool:
    return p.canonical() == q.rename(p.var).canonical()


class Memo:
    def __init__(self, bits: int = DEFAULT_BITS, budget_seconds: Optional[float] = None,
                 extended: bool = False, quiet: bool = False):
        self.bits = bits
        self.budget = budget_seconds
        self.extended = extended
        self.quiet = quiet
        self._cache: dict = {}

    def note(self, msg: str) -> None:
        if not self.quiet:
            print(f"[verify] {msg}", file=sys.stderr, flush=True)

    def get(self, key, make):
        if key not in self._cache:
            self._cache[key] = make()
        return self._cache[key]

    def elim(self, n: int) -> EliminationResult:
        return self.get(("elim", n), lambda: eliminate(n))

    def census35(self) -> CensusReport:
        return self.get("c35", lambda: census_3_5(self.bits, progress=self.note))

    def census37(self) -> CensusReport:
        return self.get("c37", lambda: census_3_n(7, self.bits, max_certificates=4,
                                                  progress=self.note))

    def closure(self, depth: int) -> ClosureState:
        return self.get(("closure", depth), lambda: closure_explore(
            [0, 1, -1, INF], [GenerationRule("four_torsion")], depth=depth, budget=60))


@dataclass
class Check:
    id: str
    example: str
    fn: Callable
    extended: bool = False


CHECKS: list[Check] = []


def check(cid: str, example: str, extended: bool = False):
    def deco(fn):
        CHECKS.append(Check(cid, example, fn, extended))
        return fn
    return deco


def _normal4(bits):
    i = imag_unit(bits)
    return [as_algebraic(0), as_algebraic(1), as_algebraic(-1), i, -i, INF]


def _normal3(bits):
    return [as_algebraic(1), root_of_unity(3, 1, bits), root_of_unity(3, 2, bits), INF]


SAMPLE_CURVES = [WeierstrassCurve(0, -1, 0), WeierstrassCurve(1, 2, 3), WeierstrassCurve(-2, 0, 5)]


# -- exact algebra ----------------------------------------------------------


@check("elim35.resultant_divisible", "resultant of the (3,5) remainder pair is divisible by the degree-24 polynomial")
def _(m: Memo, tweak: int):
    E = m.elim(5)
    p24 = _u(P24_TEXT, tweak).rename("z")
    ok = (E.eliminated.rename("z") % p24).is_zero()
    return ok, f"eliminated degree {E.eliminated.degree}"


@check("exact.cubic_discriminant", "discriminant of the (3,5) reciprocal cubic is nonzero")
def _(m: Memo, tweak: int):
    d = discriminant(_u(CUBIC_TEXT, 0))
    cubic = m.elim(5).reciprocal_cubic()
    ok = d != 0 and cubic is not None and _proportional(cubic, _u(CUBIC_TEXT, tweak))
    return ok, f"discriminant {d}"


@check("exact.squarefree_block_3_7", "(3,7) eliminated polynomial has a factor block of multiplicity 3")
def _(m: Memo, tweak: int):
    blocks = squarefree_factor(m.elim(7).eliminated).multiplicities()
    return (3 + tweak) in blocks, f"multiplicities {sorted(blocks.items())}"


@check("exact.remainder_form_3_5", "f5 divided by f3 in a leaves C(v,z) a + C'(v,z)")
def _(m: Memo, tweak: int):
    E = m.elim(5)
    free = set(E.C.free_vars()) | set(E.C_prime.free_vars())
    ok = E.remainder_identity_holds() and "a" not in free and tweak == 0
    return ok, f"C in {sorted(E.C.free_vars())}, C' in {sorted(E.C_prime.free_vars())}"


@check("exact.strip_3_5", "stripping u=0,1 from the (3,5) polynomial leaves the degree-24 cofactor")
def _(m: Memo, tweak: int):
    E = m.elim(5)
    return _proportional(E.stripped, _u(P24_TEXT, tweak)), f"stripped degree {E.stripped.degree}"


@check("exact.reciprocal_3_5", "the sextic in t reduces to the reciprocal cubic in r")
def _(m: Memo, tweak: int):
    from .exactmath import reciprocal_reduce

    r = reciprocal_reduce(_u(P6_TEXT), "r")
    return _proportional(r, _u(CUBIC_TEXT, tweak)), r.canonical().to_text()


@check("totient.j2_5_6", "J2(5) = J2(6) = 24")
def _(m: Memo, tweak: int):
    v = (jordan_totient(2, 5), jordan_totient(2, 6))
    return v == (24 + tweak, 24 + tweak), str(v)


@check("totient.j2_15_16", "J2(15) = J2(16) = 192 and J1(15) = J1(16) = 8")
def _(m: Memo, tweak: int):
    v = (jordan_totient(2, 15), jordan_totient(2, 16), jordan_totient(1, 15), jordan_totient(1, 16))
    return v == (192 + tweak, 192, 8, 8), str(v)


@check("totient.scan_50", "J2 coincidence scan to 50 finds {35, 40, 42}")
def _(m: Memo, tweak: int):
    groups = [g for _, g in totient_coincidence_scan(2, 50)]
    return [35, 40, 42 + tweak] in groups, f"{len(groups)} groups"


@check("totient.scan_6", "J2 coincidence scan to 6 gives {5, 6}")
def _(m: Memo, tweak: int):
    groups = [g for _, g in totient_coincidence_scan(2, 6)]
    return groups == [[5, 6 + tweak]], str(groups)


# -- algebraic numbers ---------------------------------------------------------


@check("algnum.degeneracy_roots", "x^8+14x^4+1 has 8 roots whose fourth powers are -7 +- 4 sqrt 3")
def _(m: Memo, tweak: int):
    roots = AlgebraicNumber.roots_of(degeneracy_polynomial(), m.bits)
    target = AlgebraicNumber.roots_of(_u("x^2+14*x+1", tweak), m.bits)
    ok = len(roots) == 8 and all(any(algnum_equal(r**4, t) for t in target) for r in roots)
    return ok, f"{len(roots)} roots"


@check("algnum.cubic_roots", "the reciprocal cubic has 3 distinct roots")
def _(m: Memo, tweak: int):
    roots = AlgebraicNumber.roots_of(_u(CUBIC_TEXT), m.bits)
    return len(roots) == 3 + tweak, f"{len(roots)} roots"


@check("intersect.single_shared_point", "the two parameters through a rational x share exactly the point x in order 3")
def _(m: Memo, tweak: int):
    details = []
    for x in (2, 3, Fraction(5, 7)):
        a1, a2 = solve_family_params(x, m.bits)
        I1 = torsion_image(SymmetricCurve(a1), 3, m.bits)
        I2 = torsion_image(SymmetricCurve(a2), 3, m.bits)
        shared = [p for p in I1.points if I2.contains(p)]
        if len(shared) != 1 + tweak or not algnum_equal(shared[0], as_algebraic(x)):
            return False, f"x={x}: {len(shared)} shared"
        details.append(str(x))
    return True, "x in " + ", ".join(details)


# -- projective geometry ----------------------------------------------------------


@check("projgeom.cross_ratio_one", "cross-ratio equals 1 exactly when (z1-z3)(z2-z4) = (z2-z3)(z1-z4)")
def _(m: Memo, tweak: int):
    rng = random.Random(7)
    for _ in range(20):
        zs = rng.sample(range(-30, 30), 4)
        a = [as_algebraic(z) for z in zs]
        lhs = (a[0] - a[2]) * (a[1] - a[3])
        rhs = (a[1] - a[2]) * (a[0] - a[3]) + tweak
        is_one = algnum_equal(cross_ratio(*a), as_algebraic(1))
        if is_one != algnum_equal(lhs, rhs) or not algnum_equal(cross_ratio(*a), lhs / ((a[1] - a[2]) * (a[0] - a[3]))):
            return False, f"sample {zs}"
    return True, "20 integer samples"


@check("projgeom.three_torsion_normal_form", "order-3 image of a sample curve is equivalent to {1, z3, z3^2, inf}")
def _(m: Memo, tweak: int):
    img = torsion_image(WeierstrassCurve(1, 2, 3), 3 + tweak, m.bits)
    if len(img) != 4:
        return False, f"{len(img)} points"
    return fourset_equivalent(_normal3(m.bits), img.points), "y^2 = x^3 + x^2 + 2x + 3"


@check("projgeom.zeta8_square", "{z8, z8^3, z8^5, z8^7} is equivalent to {1, -1, i, -i}")
def _(m: Memo, tweak: int):
    S = [root_of_unity(8, k, m.bits) for k in (1, 3, 5, 7)]
    T = _normal4(m.bits)[1:5]
    if tweak:
        T = T[:3] + [as_algebraic(2)]
    return projectively_equivalent(S, T, m.bits) is not None, "equivalent" if not tweak else "perturbed"


@check("projgeom.klein_square", "Klein group of {1, -1, i, -i}")
def _(m: Memo, tweak: int):
    i = imag_unit(m.bits)
    S = FourSet((as_algebraic(1), as_algebraic(-1), i, -i))
    pts = list(S.points)
    std = standard_klein_group()
    if tweak:
        std = std + [MobiusMap(1, 1, 0, 1)]
    preserves = all(any(algnum_equal(g(p), q) for q in pts) for g in std for p in pts)
    pairing = klein_involutions(S)
    z8 = root_of_unity(8, 1, m.bits)
    conj = MobiusMap(z8, 0, 0, 1)
    conjugated = [conj.compose(g).compose(conj.inverse()) for g in std]
    same = all(any(h.projectively_equal(c) for c in conjugated) for h in pairing)
    return preserves and same, "z->-z, 1/z, -1/z preserve the set; the fixed-point-free pairings are their conjugates by z -> z8 z"


@check("projgeom.product_involution", "{0, a, b, inf} is preserved by z -> ab/z")
def _(m: Memo, tweak: int):
    for a, b in ((2, 3), (-1, 5), (Fraction(1, 2), 7)):
        S = FourSet((0, a, b, INF))
        g = MobiusMap(0, Fraction(a) * b + tweak, 1, 0)
        if not any(h.projectively_equal(g) for h in klein_involutions(S)):
            return False, f"a={a}, b={b}"
    return True, "3 samples"


@check("projgeom.six_point_classes", "4-subsets of {0, 1, -1, i, -i, inf} form exactly 2 classes")
def _(m: Memo, tweak: int):
    cls = classify_four_subsets(_normal4(m.bits))
    sizes = sorted(len(c.subsets) for c in cls)
    return len(cls) == 2 + tweak and sizes == [3, 12], f"sizes {sizes}"


# -- division polynomials -------------------------------------------------------------


@check("divpoly.two_torsion", "f2 of y^2 = x^3 - x is x^3 - x, degree 3")
def _(m: Memo, tweak: int):
    f = primitive_divpoly(WeierstrassCurve(0, -1, 0), 2).poly
    return f == _u("x^3-x", tweak), f.to_text()


@check("divpoly.four_degree", "f4 of any sample curve has degree J2(4)/2 = 6")
def _(m: Memo, tweak: int):
    ds = [primitive_divpoly(E, 4).degree() for E in SAMPLE_CURVES]
    return all(d == 6 + tweak for d in ds), str(ds)


@check("divpoly.family_cubic", "family f3 is 2x^3 a^2 + (x^4 - 1) a - 2x up to a unit")
def _(m: Memo, tweak: int):
    x, a = MPoly.gens(("x", "a"))
    want = 2 * x**3 * a**2 + (x**4 - 1 + tweak) * a - 2 * x
    return symmetric_family_divpoly(3).canonical() == want.canonical(), symmetric_family_divpoly(3).to_text()


@check("divpoly.family_f5_shape", "family f5 has degree 12 in x and 6 in a")
def _(m: Memo, tweak: int):
    f = symmetric_family_divpoly(5)
    d = (f.degree("x"), f.degree("a"))
    return d == (12 + tweak, 6), str(d)


@check("divpoly.family_four_baseline", "order-4 image of a family curve contains {0, inf, 1, -1}")
def _(m: Memo, tweak: int):
    img = torsion_image(SymmetricCurve(as_algebraic(3)), 4, m.bits)
    need = [as_algebraic(0), INF, as_algebraic(1), as_algebraic(-1 + tweak)]
    return all(img.contains(p) for p in need), f"{len(img)} points"


@check("divpoly.three_normal_form", "any curve's order-3 image is equivalent to {1, z3, z3^2, inf}")
def _(m: Memo, tweak: int):
    for S in (FourSet((0, 1, 5, INF), INF), FourSet((-2, 1, 3, 7), 3)):
        img = torsion_image(S, 3 + tweak, m.bits)
        if len(img) != 4 or not fourset_equivalent(_normal3(m.bits), img.points):
            return False, str(S.points)
    return True, "2 ramification sets"


@check("divpoly.four_normal_form", "any curve's order-4 image is equivalent to {0, 1, -1, i, -i, inf}")
def _(m: Memo, tweak: int):
    for S in (FourSet((0, 1, 5, INF), INF), FourSet((-2, 1, 3, 7), 3)):
        img = torsion_image(S, 4 + tweak, m.bits)
        if len(img) != 6 or projectively_equivalent(_normal4(m.bits), img.points, m.bits) is None:
            return False, str(S.points)
    return True, "2 ramification sets"


@check("divpoly.two_torsion_labels", "order-2 images agree for the same 2-torsion cubic with relabeled roots")
def _(m: Memo, tweak: int):
    A = FourSet((0, 1, 2, INF), INF)
    B = FourSet((2 + tweak, 0, 1, INF), INF)
    return image_equal(A, B, 2), "roots listed as 0,1,2 and 2,0,1"


# -- intersections --------------------------------------------------------------


@check("intersect.degeneracy_discriminant", "discriminant in a of f3 is (x^4-1)^2 + 16x^4 = x^8+14x^4+1")
def _(m: Memo, tweak: int):
    x = UniPoly.gen("x")
    d = degeneracy_polynomial()
    return d == (x**4 - 1) ** 2 + 16 * x**4 + tweak == x**8 + 14 * x**4 + 1, d.to_text()


@check("intersect.degenerate_iff", "a1 = a2 exactly when x^8+14x^4+1 = 0, i.e. x^4 = -7 +- 4 sqrt 3")
def _(m: Memo, tweak: int):
    f = family_cubic_in_a().rename({"z": "x"})
    c = f.coeffs_in("a")
    disc = (c[1] * c[1] - 4 * c[2] * c[0]).to_uni("x")
    t = UniPoly.gen("x")
    quartic_roots = AlgebraicNumber.roots_of(t**2 + 14 * t + 1, m.bits)
    want = [as_algebraic(-7) + 4 * as_algebraic(3).sqrt(), as_algebraic(-7) - 4 * as_algebraic(3).sqrt()]
    ok = _proportional(disc, degeneracy_polynomial()) and all(
        any(algnum_equal(r, w + tweak) for w in want) for r in quartic_roots)
    return ok, "discriminant and x^4 values"


@check("intersect.two_points_random", "random distinct rational x, y never share two order-3 points")
def _(m: Memo, tweak: int):
    rng = random.Random(11)
    for _ in range(20):
        x, y = (Fraction(rng.randint(2, 50), rng.randint(1, 50)) for _ in range(2))
        if x == y:
            continue
        if verify_prop_ar(x, y) != (tweak == 0):
            return False, f"x={x}, y={y}"
    return True, "20 pairs"


@check("intersect.two_points_negated", "the pair x, -x still gives no valid parameter pair")
def _(m: Memo, tweak: int):
    ok = all(verify_prop_ar(x, -x) for x in (2, 3, Fraction(1, 3)))
    return ok and tweak == 0, "x in 2, 3, 1/3"


@check("intersect.strip_3_5", "eliminate(5) stripped is the degree-24 polynomial up to a unit")
def _(m: Memo, tweak: int):
    E = m.elim(5)
    return _proportional(E.stripped, _u(P24_TEXT, tweak)), E.stripped.canonical().to_text()


@check("intersect.reciprocal_3_5", "eliminate(5) reduces to the reciprocal cubic")
def _(m: Memo, tweak: int):
    c = m.elim(5).reciprocal_cubic()
    return c is not None and _proportional(c, _u(CUBIC_TEXT, tweak)), c.to_text() if c else "none"


@check("intersect.block_3_7", "eliminate(7) factors contain a multiplicity-3 block")
def _(m: Memo, tweak: int):
    blocks = m.elim(7).multiplicity_blocks()
    return (3 + tweak) in blocks, str(sorted(blocks.items()))


@check("census.u_count_3_5", "(3,5) census covers 24 u-values")
def _(m: Memo, tweak: int):
    rep = m.census35()
    return rep.u_count == 24 + tweak and len(rep.certificates) == 24, f"{rep.u_count} u-values"


@check("census.counts_3_5", "every (3,5) certificate has count at least 14")
def _(m: Memo, tweak: int):
    counts = [c.count_lower_bound for c in m.census35().certificates]
    return bool(counts) and min(counts) >= 14 + tweak, f"min {min(counts)}"


@check("census.baseline_3_5", "both curves of each (3,5) certificate have order-4 image {0, 1, -1, i, -i, inf}")
def _(m: Memo, tweak: int):
    base = _normal4(m.bits)
    if tweak:
        base = base[:-1] + [as_algebraic(2)]
    rep = m.census35()
    for c in rep.certificates[:6]:
        for a in (c.a1, c.a2):
            img = torsion_image(SymmetricCurve(a), 4, m.bits)
            if len(img) != 6 or not all(img.contains(p) for p in base):
                return False, "baseline mismatch"
    return True, "first 6 certificates, both curves"


@check("census.count_3_7", "some (3,7) certificate has count at least 22")
def _(m: Memo, tweak: int):
    counts = [c.count_lower_bound for c in m.census37().certificates]
    return bool(counts) and max(counts) >= 22 + tweak, f"counts {counts}"


@check("census.three_points_3_7", "(3,7) gives three order-7 points for a given u")
def _(m: Memo, tweak: int):
    c = m.census37().certificates[0]
    k = sum(1 for p in c.common if p.order == 7)
    return k == 3 + tweak, f"{k} order-7 points"


@check("census.block_3_7", "(3,7) multiplicity block is 3")
def _(m: Memo, tweak: int):
    blocks = m.elim(7).multiplicity_blocks()
    others = [e for e in blocks if e not in (1,)]
    return others == [3 + tweak], str(sorted(blocks.items()))


@check("count.single_class", "one order-3 class off the baseline gives 6 + 4 = 10")
def _(m: Memo, tweak: int):
    c = certify_shared_point(2, m.bits)
    return c.count_lower_bound == 10 + tweak, str(c.count_lower_bound)


@check("count.census_3_5", "(3,5) certificate count is 14")
def _(m: Memo, tweak: int):
    c = m.census35().certificates[0].count_lower_bound
    return c == 14 + tweak, str(c)


@check("count.census_3_7", "(3,7) certificate count is 22")
def _(m: Memo, tweak: int):
    c = m.census37().certificates[0].count_lower_bound
    return c == 22 + tweak, str(c)


@check("scan.four_constant", "order-4 moduli are constant across the grid")
def _(m: Memo, tweak: int):
    rep = moduli_scan(4 + tweak, [2, 3, 5], bits=m.bits)
    return rep.all_constant, f"{len(rep.families)} families"


@check("scan.three_constant", "order-3 modulus is constant across the grid")
def _(m: Memo, tweak: int):
    rep = moduli_scan(3 + 2 * tweak, [2, 3, 5], bits=m.bits)
    return rep.all_constant, f"{len(rep.families)} families"


# -- closure ------------------------------------------------------------------


@check("closure.sqrt", "{0, 1, a, inf} has sqrt(a) in its order-4 image")
def _(m: Memo, tweak: int):
    for a in (2, 3, 5):
        img = four_torsion_of_set((0, 1, a, INF))
        s = as_algebraic(a + tweak).sqrt()
        if not (img.contains(s) and img.contains(-s)):
            return False, f"a={a}"
    return True, "a in 2, 3, 5"


@check("closure.sqrt_product", "{0, a, b, inf} has sqrt(ab) in its order-4 image")
def _(m: Memo, tweak: int):
    for a, b in ((2, 3), (2, 8), (-1, 3)):
        w = sqrt_product_step(a, b)
        if not algnum_equal(w * w, as_algebraic(a * b + tweak)):
            return False, f"a={a}, b={b}"
    return True, "3 pairs"


@check("closure.sqrt_shift_membership", "d +- sqrt(b-d) lie in the order-4 image of {inf, b, d, d+1}")
def _(m: Memo, tweak: int):
    for b, c in ((3, 1), (5, 0), (2, -1)):
        w = sqrt_shift_step(b, c)
        if not algnum_equal(w * w, as_algebraic(b + c + tweak)):
            return False, f"b={b}, c={c}"
    return True, "membership verified inside each step"


@check("closure.cube_identity_shift", "shifted resolvent equals (4b/3)^3 (x^3 + (b-1)^2)")
def _(m: Memo, tweak: int):
    r = {c.name: c for c in cube_root_identities()}["shifted_resolvent"]
    return r.holds and tweak == 0, f"difference {r.difference}"


@check("closure.cube_identity_resolvent", "resolvent equals x^3 + 2bx^2 + 4b^2 x/3 + ...")
def _(m: Memo, tweak: int):
    r = {c.name: c for c in cube_root_identities()}["resolvent"]
    return r.holds and tweak == 0, f"difference {r.difference}"


@check("closure.seed_depth_1", "one round from {0, 1, -1, inf} contains {0, 1, -1, i, -i, inf}")
def _(m: Memo, tweak: int):
    st = m.closure(1)
    need = _normal4(m.bits) + ([as_algebraic(7)] if tweak else [])
    return all(st.contains(p) for p in need), f"{len(st.elements)} points"


@check("closure.multiplicative_sample", "sampled products of generated points are generated")
def _(m: Memo, tweak: int):
    st1, st2 = m.closure(1), m.closure(2)
    trivial = [as_algebraic(0), as_algebraic(1), as_algebraic(-1)]
    hits = 0
    fin = [p for p in st1.finite() if not any(algnum_equal(p, t) for t in trivial)]
    for x, y in itertools.combinations(fin, 2):
        if st2.contains(x * y + tweak):
            hits += 1
    return hits > 0, f"{hits} nontrivial products found (sample observation)"


@check("closure.involution_sample", "(x-1)/(x+1) of generated points re-appears within one round")
def _(m: Memo, tweak: int):
    st1, st2 = m.closure(1), m.closure(2)
    g = MobiusMap(1, -1 - tweak, 1, 1)
    missing = [p for p in st1.elements if not st2.contains(g(p))]
    return not missing, f"{len(st1.elements) - len(missing)}/{len(st1.elements)} images found"


# -- command surface ---------------------------------------------------------------


@check("cli.divpoly_symmetric_5", "divpoly --symmetric 2 --n 5 has degree 12")
def _(m: Memo, tweak: int):
    from .cli import divpoly_payload

    p = divpoly_payload(symmetric="2", n=5)
    return p["degree"] == 12 + tweak and p["degree_ok"], f"degree {p['degree']}"


@check("cli.census_3_5", "intersect --census 3,5 reports 24 u-values with counts at least 14")
def _(m: Memo, tweak: int):
    d = m.census35().to_json()
    return d["u_count"] == 24 and d["min_count"] >= 14 + tweak, f"min_count {d['min_count']}"


@check("cli.census_3_7", "intersect --census 3,7 reaches count 22")
def _(m: Memo, tweak: int):
    d = m.census37().to_json()
    return d["max_count"] >= 22 + tweak, f"max_count {d['max_count']}"


@check("cli.extended_probes", "(3,11) and larger multiplicity probes", extended=True)
def _(m: Memo, tweak: int):
    out = []
    for n in (11, 13, 17):
        try:
            E = eliminate(n, extended=True, budget_seconds=m.budget)
        except BudgetExceeded:
            out.append(f"n={n}: budget exceeded")
            raise
        out.append(f"n={n}: blocks {sorted(E.multiplicity_blocks().items())}")
    return tweak == 0, "; ".join(out)


@check("cli.totient_50", "totient --k 2 --bound 50 includes {35, 40, 42}")
def _(m: Memo, tweak: int):
    from .cli import totient_payload

    groups = [g["n"] for g in totient_payload(2, 50)["groups"]]
    return [35, 40, 42 + tweak] in groups, f"{len(groups)} groups"


@check("cli.moduli_scan_4", "moduli-scan --n 4 --grid 2,3,5 is all-constant")
def _(m: Memo, tweak: int):
    d = moduli_scan(4, [2, 3, 5], bits=m.bits).to_json()
    return d["constant_count"] == d["family_count"] == 15 + tweak, f"{d['constant_count']}/{d['family_count']}"


# -- runner ---------------------------------------------------------------------


@dataclass
class CheckResult:
    id: str
    example: str
    status: str  # pass, fail, skip, error
    detail: str
    seconds: float

    def to_json(self) -> dict:
        return {"id": self.id, "example": self.example, "status": self.status,
                "detail": self.detail}


def run_battery(memo: Memo, inject: Optional[str] = None, only: Optional[list] = None,
                clock: Callable[[], float] = time.perf_counter) -> list[CheckResult]:
    ids = {c.id for c in CHECKS}
    for name in [inject] + list(only or []):
        if name is not None and name not in ids:
            raise KeyError(name)
    out = []
    for c in CHECKS:
        if only is not None and c.id not in only:
            continue
        if c.extended and not memo.extended:
            out.append(CheckResult(c.id, c.example, "skip", "needs --extended", 0.0))
            continue
        t0 = clock()
        memo.note(f"{c.id}")
        try:
            ok, detail = c.fn(memo, 1 if c.id == inject else 0)
            status = "pass" if ok else "fail"
        except BudgetExceeded:
            raise
        except TorsionAtlasError as e:
            status, detail = "error", f"{type(e).__name__}: {e}"
        out.append(CheckResult(c.id, c.example, status, detail, clock() - t0))
    return out


def coverage_manifest() -> list[dict]:
    return [{"id": c.id, "example": c.example, "extended": c.extended} for c in CHECKS]
