"""Acceptance criteria, one test each, with a pass/fail line and wall time per criterion.

Run under pytest (lines appear in the terminal summary) or directly:
    python tests/test_acceptance.py
"""

import cmath
import itertools
import math
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from oracles import order_n_pairs, sylvester_resultant  # noqa: E402

from torsion_atlas.algnum import INF, algnum_equal, as_algebraic, imag_unit, root_of_unity, AlgebraicNumber  # noqa: E402
from torsion_atlas.closure import cube_root_identities  # noqa: E402
from torsion_atlas.divpoly import (  # noqa: E402
    divpoly_roots_mod_p,
    oracle_torsion_fp,
    primitive_divpoly,
    reduce_curve,
    symmetric_family_divpoly,
    torsion_image,
)
from torsion_atlas.errors import BadInput  # noqa: E402
from torsion_atlas.exactmath import MPoly, UniPoly, jordan_totient, totient_coincidence_scan  # noqa: E402
from torsion_atlas.intersect import (  # noqa: E402
    census_3_5,
    census_3_n,
    degeneracy_polynomial,
    eliminate,
    recheck_certificate,
    solve_family_params,
)
from torsion_atlas.projgeom import (  # noqa: E402
    FourSet,
    SymmetricCurve,
    WeierstrassCurve,
    classify_four_subsets,
    fourset_equivalent,
    projectively_equivalent,
)

RESULTS: list[str] = []

P24 = "32*x^24+1369*x^20+18812*x^16+90646*x^12+18812*x^8+1369*x^4+32"
P6 = "32*x^6+1369*x^5+18812*x^4+90646*x^3+18812*x^2+1369*x+32"
CUBIC = "32*r^3+1369*r^2+18716*r+87908"


def criterion(num, title, limit):
    """Time the wrapped test against its limit and record one summary line."""
    def wrap(fn):
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            ok, detail = False, ""
            try:
                detail = fn(*args, **kwargs) or ""
                ok = True
            except AssertionError as e:
                detail = f"assertion failed: {e}"
                raise
            finally:
                secs = time.perf_counter() - t0
                in_time = secs < limit
                status = "PASS" if ok and in_time else "FAIL"
                RESULTS.append(f"{status} [{num:2d}] {title}: {detail} ({secs:.2f}s, limit {limit}s)")
            assert in_time, f"took {secs:.1f}s, limit {limit}s"
        run.__name__ = fn.__name__
        return run
    return wrap


def random_curves(rng, count):
    out = []
    while len(out) < count:
        a2, a4, a6 = (Fraction(rng.randint(-30, 30), rng.randint(1, 6)) for _ in range(3))
        try:
            out.append(WeierstrassCurve(a2, a4, a6))
        except BadInput:
            pass
    return out


@criterion(1, "family order-3 polynomial identity", 1)
def test_c01_family_cubic():
    x, a = MPoly.gens(("x", "a"))
    expected = a * x**4 + 2 * a**2 * x**3 - 2 * x - a
    f3 = symmetric_family_divpoly(3)
    assert f3.canonical() == expected.canonical()
    return f3.to_text()


@criterion(2, "degree law on 20 random curves, 2 <= n <= 20", 30)
def test_c02_degree_law():
    rng = random.Random(20)
    for E in random_curves(rng, 20):
        for n in range(2, 21):
            want = 3 if n == 2 else order_n_pairs(n) // 2
            got = primitive_divpoly(E, n).degree()
            assert got == want, (E, n, got, want)
    return "380 (curve, n) pairs"


@criterion(3, "roots mod p equal brute-force exact-order x-coordinates", 60)
def test_c03_oracle_equivalence():
    rng = random.Random(3)
    primes = [p for p in range(101, 998) if all(p % q for q in range(2, 32))]
    triples = 0
    while triples < 24:
        E = random_curves(rng, 1)[0]
        p, n = rng.choice(primes), rng.randint(2, 10)
        try:
            roots = divpoly_roots_mod_p(E, n, p)
        except BadInput:
            continue  # bad reduction at p
        assert roots == oracle_torsion_fp(reduce_curve(E, p), n), (E, p, n)
        triples += 1
    return f"{triples} triples"


@criterion(4, "order-5 family polynomial has degree 12 in x and 6 in a", 5)
def test_c04_f5_shape():
    f5 = symmetric_family_divpoly(5)
    assert (f5.degree("x"), f5.degree("a")) == (12, 6)
    return "(12, 6)"


@criterion(5, "(3,5) elimination reproduces the degree-24 polynomial and the cubic", 60)
def test_c05_census_polynomials():
    e = eliminate(5)
    assert e.stripped.canonical() == UniPoly.parse(P24, "x").rename(e.stripped.var).canonical()
    assert e.stripped_t.canonical() == UniPoly.parse(P6, "x").rename(e.stripped_t.var).canonical()
    cubic = e.reciprocal_cubic()
    assert cubic == UniPoly.parse(CUBIC, "r").canonical()
    c = [int(v) for v in cubic.coeffs]
    disc = sylvester_resultant(c, [c[1], 2 * c[2], 3 * c[3]])
    assert disc != 0
    return f"cubic resultant with derivative {disc}"


@criterion(6, "(3,5) census: 24 u-values, counts >= 14, stable at doubled precision", 300)
def test_c06_census_certificates():
    rep = census_3_5()
    assert rep.u_count == 24 and len(rep.certificates) == 24
    counts = [c.count_lower_bound for c in rep.certificates]
    assert min(counts) >= 14
    for c in rep.certificates:
        assert recheck_certificate(c, 2 * c.bits) == c.count_lower_bound
    return f"min count {min(counts)}, rechecked at {2 * rep.certificates[0].bits} bits"


@criterion(7, "(3,7): multiplicity-3 block and a certificate with count >= 22", 900)
def test_c07_three_seven():
    e = eliminate(7)
    blocks = e.multiplicity_blocks()
    assert blocks.get(3, 0) > 0, blocks
    rep = census_3_n(7, max_certificates=2)
    best = max(c.count_lower_bound for c in rep.certificates)
    assert best >= 22
    return f"blocks {sorted(blocks.items())}, best count {best}"


@criterion(8, "one shared order-3 point for 50 random x; degeneracy locus", 120)
def test_c08_single_shared_point():
    rng = random.Random(8)
    done = 0
    while done < 50:
        x = Fraction(rng.randint(-60, 60), rng.randint(1, 12))
        if x in (0, 1, -1):
            continue
        a1, a2 = solve_family_params(x)
        I1 = torsion_image(SymmetricCurve(a1), 3)
        I2 = torsion_image(SymmetricCurve(a2), 3)
        shared = [p for p in I1.points if I2.contains(p)]
        assert len(shared) == 1 and algnum_equal(shared[0], as_algebraic(x)), x
        done += 1
    # discriminant in a of 2x^3 a^2 + (x^4 - 1) a - 2x, worked by hand
    X = UniPoly.gen("x")
    assert degeneracy_polynomial() == (X**4 - 1) ** 2 + 4 * (2 * X**3) * (2 * X)
    assert degeneracy_polynomial() == UniPoly.parse("x^8+14*x^4+1", "x")
    s3 = as_algebraic(3).sqrt()
    targets = [-7 + 4 * s3, -7 - 4 * s3]
    roots = AlgebraicNumber.roots_of(degeneracy_polynomial())
    for r in roots:
        assert any(algnum_equal(r**4, t) for t in targets)
    return f"{done} samples, {len(roots)} degenerate x with x^4 = -7 +- 4 sqrt 3"


@criterion(9, "order-4 and order-3 normal forms; family images are literally the baseline", 30)
def test_c09_baseline_images():
    i = imag_unit()
    base4 = [as_algebraic(0), as_algebraic(1), as_algebraic(-1), i, -i, INF]
    w = root_of_unity(3)
    base3 = [as_algebraic(1), w, w * w, INF]
    rng = random.Random(9)
    for _ in range(3):
        a = Fraction(rng.randint(2, 40), rng.randint(1, 7))
        E = SymmetricCurve(as_algebraic(a))
        img4 = torsion_image(E, 4)
        assert len(img4) == 6 and projectively_equivalent(base4, img4.points) is not None
        img3 = torsion_image(E, 3)
        assert len(img3) == 4 and fourset_equivalent(base3, img3.points)
    for S in (FourSet((0, 1, 5, INF), INF), FourSet((-2, 1, 3, 7), 3)):
        img3 = torsion_image(S, 3)
        assert fourset_equivalent(base3, img3.points)
    for x in (2, Fraction(-5, 3), 7):
        for a in solve_family_params(x):
            img = torsion_image(SymmetricCurve(a), 4)
            assert len(img) == 6 and all(img.contains(p) for p in base4)
    return "3 random family parameters, 2 ramification sets, 6 normalized curves"


@criterion(10, "cube-root identities hold in Q[b]", 5)
def test_c10_cube_root_identities():
    checks = cube_root_identities()
    assert len(checks) == 3 and all(c.holds and c.difference == "0" for c in checks)
    return ", ".join(c.name for c in checks)


@criterion(11, "Jordan totient coincidences", 1)
def test_c11_totients():
    assert jordan_totient(2, 5) == jordan_totient(2, 6) == 24 == order_n_pairs(5) == order_n_pairs(6)
    assert jordan_totient(2, 15) == jordan_totient(2, 16) == 192
    assert order_n_pairs(15) == order_n_pairs(16) == 192
    euler = [sum(math.gcd(k, n) == 1 for k in range(1, n + 1)) for n in (15, 16)]
    assert [jordan_totient(1, 15), jordan_totient(1, 16)] == euler == [8, 8]
    assert len({jordan_totient(2, n) for n in (35, 40, 42)}) == 1
    groups = [ms for _, ms in totient_coincidence_scan(2, 50)]
    assert [5, 6] in groups and [15, 16] in groups and [35, 40, 42] in groups
    return f"{len(groups)} groups up to 50"


def _numeric_modulus(pts):
    """4-set modulus from plain complex arithmetic, sending the first point to infinity."""
    z = [complex(p) if p is not None else None for p in pts]
    if None in z:
        k = z.index(None)
        z = z[k + 1:] + z[:k]
        lam = (z[2] - z[0]) / (z[1] - z[0])
    else:
        z1, z2, z3, z4 = z
        lam = ((z1 - z3) * (z2 - z4)) / ((z2 - z3) * (z1 - z4))
    return 256 * (lam * lam - lam + 1) ** 3 / (lam * lam * (lam - 1) ** 2)


@criterion(12, "4-subsets of the order-4 baseline fall into classes of sizes 3 and 12", 10)
def test_c12_four_subset_classes():
    i = imag_unit()
    P = [as_algebraic(0), as_algebraic(1), as_algebraic(-1), i, -i, INF]
    sizes = sorted(len(c.subsets) for c in classify_four_subsets(P))
    assert sizes == [3, 12]
    raw = [0, 1, -1, 1j, -1j, None]
    mods: list = []
    for sub in itertools.combinations(raw, 4):
        j = _numeric_modulus(sub)
        for entry in mods:
            if cmath.isclose(entry[0], j, rel_tol=1e-9):
                entry[1] += 1
                break
        else:
            mods.append([j, 1])
    assert sorted(m[1] for m in mods) == [3, 12]
    return f"sizes {sizes}, floating-point oracle agrees"


PROPERTY_FILES = ["test_exactmath.py", "test_algnum.py", "test_projgeom.py",
                  "test_divpoly.py", "test_intersect.py", "test_closure.py"]


@criterion(13, "module invariants pass as property tests", 300)
def test_c13_property_suites():
    here = Path(__file__).parent
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                           *[str(here / f) for f in PROPERTY_FILES]],
                          capture_output=True, text=True, cwd=here.parent)
    last = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-300:]
    assert proc.returncode == 0, last
    return last.strip("= ")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_c")]
    failed = 0
    for t in tests:
        try:
            t()
        except Exception:
            failed += 1
        print(RESULTS[-1], flush=True)
    sys.exit(1 if failed else 0)
