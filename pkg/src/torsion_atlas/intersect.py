"""Shared torsion images across the symmetric family.

The order-3 image of E_a contains u exactly when f3(u, a) = 0, a quadratic in
a; its two roots give two curves sharing u.  Pseudo-dividing f_n(v, a) by
f3(u, a) in a leaves C(v, u) a + C'(v, u), and v is in the order-n image of
both curves when C and C' vanish together.  Eliminating v gives a condition
on u alone; common roots of C and C' over Q(u) give the certified points.
"""

from __future__ import annotations

import itertools
import multiprocessing as mp
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .algnum import (
    DEFAULT_BITS,
    INF,
    AlgebraicNumber,
    ComplexBall,
    Infinity,
    PointP1,
    algnum_equal,
    as_algebraic,
    eval_poly_ball,
    imag_unit,
    point_sort_key,
    point_to_json,
)
from .divpoly import (
    select_specialized_roots,
    specialization_candidates,
    specialized_roots,
    symmetric_family_divpoly,
    torsion_image,
)
from .errors import BadInput, BudgetExceeded, VerificationFailure
from .exactmath import (
    DivRem,
    FactorList,
    MPoly,
    UniPoly,
    divrem_in_var,
    poly_gcd,
    reciprocal_reduce,
    resultant,
    squarefree_factor,
    strip_trivial_factors,
)
from .numberfield import NumberField
from .projgeom import (
    SymmetricCurve,
    exact_modulus,
    klein_orbit,
    quartic_modulus,
    standard_klein_group,
)

Progress = Optional[Callable[[str], None]]

# n beyond this needs the extended budget
MANDATORY_ORDERS = (5, 7)
EXTENDED_ORDERS = (11, 13, 17)


def _note(progress: Progress, msg: str) -> None:
    if progress is not None:
        progress(msg)


def family_cubic_in_a() -> MPoly:
    """f3(z, a) as a polynomial in (z, a): 2 z^3 a^2 + (z^4 - 1) a - 2 z."""
    return symmetric_family_divpoly(3).rename({"x": "z"})


def degeneracy_polynomial() -> UniPoly:
    """Discriminant in a of f3(x, a): the x for which the two a coincide."""
    f = symmetric_family_divpoly(3)
    c = f.coeffs_in("a")
    disc = c[1] * c[1] - 4 * c[2] * c[0]
    return disc.to_uni("x").canonical()


def _is_degenerate_x(x: AlgebraicNumber) -> bool:
    if x.is_zero():
        return True
    z = UniPoly.gen("x")
    m = x.minpoly
    for bad in (z**4 - 1, degeneracy_polynomial()):
        if (bad % m).is_zero():
            return True
    return False


def solve_family_params(x, bits: int = DEFAULT_BITS) -> tuple[AlgebraicNumber, AlgebraicNumber]:
    """The two parameters a with x in the order-3 image of E_a, sorted."""
    x = as_algebraic(x, bits)
    if _is_degenerate_x(x):
        raise BadInput("degenerate x: 0, a fourth root of unity, or a double root in a")
    f = symmetric_family_divpoly(3)
    roots, deg = specialized_roots(f.rename({"x": "z", "a": "x"}), "z", x, bits)
    if deg != 2 or len(roots) != 2:
        raise VerificationFailure("expected two distinct family parameters")
    return tuple(sorted(roots, key=point_sort_key))


def verify_prop_ar(x, y) -> bool:
    """True when no pair a1 != a2 has both x and y in both order-3 images.

    Two shared points would make the quadratics f3(x, .) and f3(y, .)
    proportional; the 2x2 minors of their coefficient vectors decide that.
    """
    x, y = as_algebraic(x), as_algebraic(y)
    if algnum_equal(x, y):
        raise BadInput("x and y must differ")
    if _is_degenerate_x(x) or _is_degenerate_x(y):
        raise BadInput("degenerate input")

    def coeffs(t):
        return (2 * t**3, t**4 - 1, -2 * t)

    p, q = coeffs(x), coeffs(y)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if not (p[i] * q[j] - p[j] * q[i]).is_zero():
            return True
    return False


# -- elimination -------------------------------------------------------------


@dataclass
class EliminationResult:
    n: int
    C: MPoly
    C_prime: MPoly
    denominator: MPoly
    quotient: MPoly
    eliminated: UniPoly
    deflation: int
    stripped_t: UniPoly
    strip_multiplicities: list
    stripped: UniPoly
    factors: FactorList
    seconds: float = 0.0

    def remainder_identity_holds(self) -> bool:
        fn = symmetric_family_divpoly(self.n).rename({"x": "v"})
        f3 = family_cubic_in_a()
        vars_ = ("v", "a", "z")
        _, a, _ = MPoly.gens(vars_)
        lhs = self.denominator.extend(vars_) * fn.extend(vars_)
        rhs = self.quotient.extend(vars_) * f3.extend(vars_) \
            + self.C.extend(vars_) * a + self.C_prime.extend(vars_)
        return lhs == rhs

    def multiplicity_blocks(self) -> dict[int, int]:
        return self.factors.multiplicities()

    def reciprocal_cubic(self) -> Optional[UniPoly]:
        t = self.stripped_t.canonical()
        if t.degree % 2 == 0 and t.is_palindromic():
            return reciprocal_reduce(t, "r").canonical()
        return None

    def to_json(self) -> dict:
        d = {
            "n": self.n,
            "C_degrees": {"v": self.C.degree("v"), "z": self.C.degree("z")},
            "C_prime_degrees": {"v": self.C_prime.degree("v"), "z": self.C_prime.degree("z")},
            "eliminated_degree": self.eliminated.degree,
            "deflation": self.deflation,
            "trivial_multiplicities": {"t=0": self.strip_multiplicities[0],
                                       "t=1": self.strip_multiplicities[1]},
            "stripped_t": self.stripped_t.canonical().to_text(),
            "stripped_degree": self.stripped.degree,
            "multiplicity_blocks": {str(k): v for k, v in sorted(self.multiplicity_blocks().items())},
            "factors": [{"poly": f.to_text(), "degree": f.degree, "multiplicity": e}
                        for f, e in self.factors.factors],
        }
        cubic = self.reciprocal_cubic()
        if cubic is not None:
            d["reciprocal"] = cubic.to_text()
        return d


def remainder_pair(n: int) -> tuple[MPoly, MPoly, DivRem]:
    """C, C' in (v, z) with d f_n(v, a) = g f3(z, a) + C a + C'."""
    fn = symmetric_family_divpoly(n).rename({"x": "v"})
    dr = divrem_in_var(fn, family_cubic_in_a(), "a")
    cs = dr.remainder.coeffs_in("a")
    zero = MPoly.constant(0, dr.remainder.vars)
    C = cs.get(1, zero).restrict(("v", "z"))
    Cp = cs.get(0, zero).restrict(("v", "z"))
    return C, Cp, dr


def _eliminate_core(n: int) -> EliminationResult:
    t0 = time.time()
    C, Cp, dr = remainder_pair(n)
    g = poly_gcd(C, Cp)
    if g.free_vars():
        raise VerificationFailure("C and C' share a factor; the resultant would vanish")
    E = resultant(C, Cp, "v")
    if E.is_zero():
        raise VerificationFailure("eliminated polynomial is zero")
    k = max(E.deflation(), 1)
    S = E.deflate(k, "t")
    St, mults = strip_trivial_factors(S, [0, 1])
    St = St.canonical()
    stripped = St.inflate(k, "z").canonical()
    return EliminationResult(n, C, Cp, dr.denominator, dr.quotient, E, k, St, mults, stripped,
                             squarefree_factor(stripped), time.time() - t0)


def _plain(r: EliminationResult) -> dict:
    """Picklable form (flint objects do not cross process boundaries)."""
    out = {}
    for name in ("C", "C_prime", "denominator", "quotient"):
        p = getattr(r, name)
        out[name] = (p.vars, p.terms())
    for name in ("eliminated", "stripped_t", "stripped"):
        p = getattr(r, name)
        out[name] = (p.var, p.coeffs)
    out["factors"] = (r.factors.unit, [((f.var, f.coeffs), e) for f, e in r.factors.factors])
    out["rest"] = (r.n, r.deflation, r.strip_multiplicities, r.seconds)
    return out


def _unplain(d: dict) -> EliminationResult:
    mp_ = {k: MPoly(d[k][1], d[k][0]) for k in ("C", "C_prime", "denominator", "quotient")}
    up = {k: UniPoly(d[k][1], d[k][0]) for k in ("eliminated", "stripped_t", "stripped")}
    unit, facs = d["factors"]
    fl = FactorList(unit, [(UniPoly(c, v), e) for (v, c), e in facs])
    n, k, mults, secs = d["rest"]
    return EliminationResult(n, mp_["C"], mp_["C_prime"], mp_["denominator"], mp_["quotient"],
                             up["eliminated"], k, up["stripped_t"], mults, up["stripped"], fl, secs)


def _child(n, q):
    try:
        q.put(("ok", _plain(_eliminate_core(n))))
    except Exception as e:  # pragma: no cover - reported to the parent
        q.put(("err", repr(e)))


def eliminate(n: int, extended: bool = False, budget_seconds: Optional[float] = None) -> EliminationResult:
    """Pseudo-divide f_n by f3 in a and take Res_v(C, C').

    The eliminated polynomial is a polynomial in t = z^k for its deflation k;
    trivial roots t = 0 and t = 1 are stripped there, and ``stripped`` is the
    cofactor written back in z.
    """
    if n < 5 or n % 3 == 0:
        raise BadInput("eliminate needs n >= 5 and prime to 3")
    if n not in MANDATORY_ORDERS and not extended:
        raise BudgetExceeded(f"order {n} is long-running; enable the extended budget")
    if budget_seconds is None:
        return _eliminate_core(n)
    # run in a child so a wall-clock budget can stop it
    ctx = mp.get_context("fork")
    q = ctx.Queue()
    proc = ctx.Process(target=_child, args=(n, q), daemon=True)
    proc.start()
    deadline = time.time() + budget_seconds
    while time.time() < deadline:
        try:
            status, info = q.get(timeout=min(1.0, max(deadline - time.time(), 0.01)))
            break
        except Exception:
            if not proc.is_alive() and q.empty():
                raise VerificationFailure(f"elimination worker for order {n} died")
    else:
        proc.terminate()
        proc.join()
        raise BudgetExceeded(f"elimination for order {n} exceeded {budget_seconds:g}s")
    proc.join()
    if status != "ok":
        raise VerificationFailure(info)
    return _unplain(info)


# -- certificates ------------------------------------------------------------

BASELINE_MINPOLYS = ("x", "x-1", "x+1", "x^2+1")


def baseline_points(bits: int = DEFAULT_BITS) -> list[PointP1]:
    i = imag_unit(bits)
    return [as_algebraic(0), as_algebraic(1), as_algebraic(-1), i, -i, INF]


def _in_baseline(p: PointP1) -> bool:
    return isinstance(p, Infinity) or p.minpoly.canonical().to_text() in BASELINE_MINPOLYS


@dataclass
class CommonPoint:
    point: AlgebraicNumber
    order: int
    orbit_class: int

    def to_json(self) -> dict:
        return {"point": point_to_json(self.point), "order": self.order, "orbit_class": self.orbit_class}


@dataclass
class IntersectionCertificate:
    a1: AlgebraicNumber
    a2: AlgebraicNumber
    common: list = field(default_factory=list)
    count_lower_bound: int = 0
    field_modulus: Optional[UniPoly] = None  # minimal polynomial of the order-3 point
    divisor: Optional[MPoly] = None  # common divisor of C, C' over Q(u), in (v, z)
    order: int = 3
    bits: int = DEFAULT_BITS

    @property
    def orbit_class_count(self) -> int:
        return len({c.orbit_class for c in self.common})

    def to_json(self) -> dict:
        d = {
            "a1": self.a1.to_json(),
            "a2": self.a2.to_json(),
            "common": [c.to_json() for c in self.common],
            "orbit_class_count": self.orbit_class_count,
            "count_lower_bound": self.count_lower_bound,
            "baseline": [point_to_json(p) for p in baseline_points(self.bits)],
        }
        if self.field_modulus is not None:
            d["u_minpoly"] = self.field_modulus.to_text()
        if self.divisor is not None:
            d["common_divisor"] = self.divisor.to_text()
        return d


def _orbit_classes(points: list[PointP1]) -> list[int]:
    """Label points by standard Klein orbit (z -> -z, 1/z, -1/z)."""
    G = standard_klein_group()
    reps: list[list[PointP1]] = []
    labels = []
    for p in points:
        for k, orb in enumerate(reps):
            if any(algnum_equal(p, q) for q in orb):
                labels.append(k)
                break
        else:
            reps.append(klein_orbit(p, G))
            labels.append(len(reps) - 1)
    return labels


def count_intersection(cert: IntersectionCertificate) -> int:
    """6 + 4 * (Klein classes of certified common points off the baseline)."""
    pts = [c.point for c in cert.common if not _in_baseline(c.point)]
    return 6 + 4 * len(set(_orbit_classes(pts)))


def _member_of_image(p: AlgebraicNumber, a: AlgebraicNumber, n: int) -> bool:
    """Exact test f_n(p, a) = 0 with a and p algebraic, via torsion_image."""
    return torsion_image(SymmetricCurve(a), n).contains(p)


def certify_shared_point(x, bits: int = DEFAULT_BITS) -> IntersectionCertificate:
    """Certificate for the single order-3 point shared by the two curves through x."""
    x = as_algebraic(x, bits)
    a1, a2 = solve_family_params(x, bits)
    for a in (a1, a2):
        if not _member_of_image(x, a, 3):
            raise VerificationFailure("x is not in an order-3 image")
    cert = IntersectionCertificate(a1, a2, [CommonPoint(x, 3, 0)], bits=bits)
    cert.field_modulus = x.minpoly.rename("z")
    cert.count_lower_bound = count_intersection(cert)
    return cert


@dataclass
class _FieldData:
    """Per-field data shared by all embeddings of u."""

    modulus: UniPoly
    divisor: MPoly  # monic in v over Q(z), variables (v, z)
    divisor_degree: int
    a_candidates: list
    v_candidates: list


def _check_u_field(m: UniPoly) -> None:
    z = UniPoly.gen(m.var)
    for bad in (z, z - 1, z + 1, z**2 + 1, degeneracy_polynomial().rename(m.var)):
        if poly_gcd(m, bad).degree > 0:
            raise VerificationFailure(f"u-field modulus meets the degenerate locus {bad.to_text()}")


def prepare_field(n: int, m: UniPoly, C: MPoly, Cp: MPoly, bits: int = DEFAULT_BITS,
                  progress: Progress = None) -> _FieldData:
    """Exact common divisor of C, C' over Q[z]/(m) plus candidate roots for a and v."""
    m = m.rename("z").canonical()
    _check_u_field(m)
    K = NumberField(m)
    h = K.common_divisor(K.kpoly(C, "v"), K.kpoly(Cp, "v"))
    if len(h) < 2:
        raise VerificationFailure(f"C and C' have no common root over the field of {m.to_text()}")
    H = K.to_mpoly(h, "v")
    _note(progress, f"order {n}: divisor of degree {len(h) - 1} over a field of degree {m.degree}")
    f3 = family_cubic_in_a().rename({"z": "u"})
    a_cands = specialization_candidates(f3, "a", "u", m, bits)
    _note(progress, f"order {n}: {len(a_cands)} parameter candidates")
    v_cands = specialization_candidates(H, "v", "z", m, bits)
    _note(progress, f"order {n}: {len(v_cands)} point candidates")
    return _FieldData(m, H, len(h) - 1, a_cands, v_cands)


def certify_embedding(n: int, fd: _FieldData, u: AlgebraicNumber,
                      bits: int = DEFAULT_BITS) -> IntersectionCertificate:
    """Certificate for one complex embedding u of the field."""
    f3 = family_cubic_in_a().rename({"z": "u"})
    a1, a2 = sorted(select_specialized_roots(f3, "a", "u", u, fd.a_candidates, 2, bits),
                    key=point_sort_key)
    vs = select_specialized_roots(fd.divisor, "v", "z", u, fd.v_candidates, fd.divisor_degree, bits)
    vs = sorted(vs, key=point_sort_key)
    pts = [u] + vs
    for p in pts:
        if _in_baseline(p):
            raise VerificationFailure("a common point lies on the baseline")
    labels = _orbit_classes(pts)
    if len(set(labels)) != len(pts):
        raise VerificationFailure("certified points share a Klein orbit")
    common = [CommonPoint(u, 3, labels[0])] + [CommonPoint(v, n, k) for v, k in zip(vs, labels[1:])]
    cert = IntersectionCertificate(a1, a2, common, field_modulus=fd.modulus, divisor=fd.divisor,
                                   order=n, bits=bits)
    cert.count_lower_bound = count_intersection(cert)
    return cert


def recheck_certificate(cert: IntersectionCertificate, bits: int) -> int:
    """Re-verify a certificate at another precision and return its count.

    Membership: f3(u, a_i) and f_n(v, a_i) are enclosed by balls containing 0
    at the new precision, on top of the exact divisor identity.  Distinct
    classes: orbit balls are re-separated.
    """
    u = cert.common[0].point.refined(bits)
    a1, a2 = cert.a1.refined(bits), cert.a2.refined(bits)
    f3 = symmetric_family_divpoly(3)
    for a in (a1, a2):
        if not eval_poly_ball(f3, {"x": u.ball, "a": a.ball}, bits).contains_zero():
            raise VerificationFailure("order-3 point fails at the new precision")
    pts = [u]
    for c in cert.common[1:]:
        v = c.point.refined(bits)
        fn = symmetric_family_divpoly(c.order)
        for a in (a1, a2):
            if not eval_poly_ball(fn, {"x": v.ball, "a": a.ball}, bits).contains_zero():
                raise VerificationFailure("order-n point fails at the new precision")
        pts.append(v)
    if cert.divisor is not None and cert.field_modulus is not None:
        K = NumberField(cert.field_modulus)
        C, Cp, _ = remainder_pair(cert.order)
        h = K.kpoly(cert.divisor, "v")
        if not (K.divides(h, K.kpoly(C, "v")) and K.divides(h, K.kpoly(Cp, "v"))):
            raise VerificationFailure("divisor identity fails")
    labels = _orbit_classes(pts)
    if len(set(labels)) != len(pts):
        raise VerificationFailure("classes merged at the new precision")
    return 6 + 4 * len(set(labels))


@dataclass
class CensusReport:
    n: int
    elimination: EliminationResult
    certificates: list = field(default_factory=list)
    u_count: int = 0
    cubic: Optional[UniPoly] = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        d = {
            "orders": [3, self.n],
            "elimination": self.elimination.to_json(),
            "u_count": self.u_count,
            "certificates": [c.to_json() for c in self.certificates],
            "min_count": min((c.count_lower_bound for c in self.certificates), default=None),
            "max_count": max((c.count_lower_bound for c in self.certificates), default=None),
            "notes": list(self.notes),
        }
        if self.cubic is not None:
            d["cubic"] = self.cubic.to_text()
        return d

    def csv_rows(self) -> list[list]:
        rows = []
        for c in self.certificates:
            for cp in c.common:
                rows.append([c.a1.minpoly.to_text(), c.a2.minpoly.to_text(), cp.order,
                             cp.point.minpoly.to_text(), cp.orbit_class, c.count_lower_bound])
        return rows


def _irreducible_parts(p: UniPoly) -> list[UniPoly]:
    from flint import fmpz_poly

    _, facs = fmpz_poly(p.canonical().integer_coeffs()).factor()
    out = [UniPoly(f, p.var).canonical() for f, _ in facs]
    return sorted(out, key=lambda f: (f.degree, f.to_text()))


def _census(n: int, multiplicity: Optional[int], bits: int, extended: bool,
            max_certificates: Optional[int], progress: Progress,
            budget_seconds: Optional[float]) -> CensusReport:
    _note(progress, f"order {n}: eliminating")
    E = eliminate(n, extended=extended, budget_seconds=budget_seconds)
    _note(progress, f"order {n}: eliminated degree {E.eliminated.degree} in {E.seconds:.2f}s")
    rep = CensusReport(n, E, cubic=E.reciprocal_cubic())
    blocks = [f for f, e in E.factors.factors if multiplicity is None or e == multiplicity]
    if not blocks:
        rep.notes.append(f"no factor of multiplicity {multiplicity}")
        return rep
    C, Cp = E.C, E.C_prime
    done = 0
    for block in blocks:
        for m in _irreducible_parts(block):
            fd = prepare_field(n, m, C, Cp, bits, progress)
            us = sorted(AlgebraicNumber.roots_of(m.rename("x"), bits), key=point_sort_key)
            rep.u_count += len(us)
            for u in us:
                if max_certificates is not None and done >= max_certificates:
                    break
                rep.certificates.append(certify_embedding(n, fd, u, bits))
                done += 1
                if done % 8 == 0:
                    _note(progress, f"order {n}: {done} certificates")
    return rep


def census_3_5(bits: int = DEFAULT_BITS, progress: Progress = None) -> CensusReport:
    """Certificates for every u of the (3,5) census."""
    rep = _census(5, None, bits, False, None, progress, None)
    if rep.cubic is None:
        raise VerificationFailure("stripped (3,5) polynomial is not palindromic")
    return rep


def census_3_n(n: int, bits: int = DEFAULT_BITS, extended: bool = False,
               max_certificates: Optional[int] = None, progress: Progress = None,
               budget_seconds: Optional[float] = None) -> CensusReport:
    """Multiplicity report for (3, n) and certificates over the multiplicity-3 block."""
    if n not in MANDATORY_ORDERS + EXTENDED_ORDERS:
        raise BadInput("census_3_n supports n in {5, 7, 11, 13, 17}")
    rep = _census(n, 3, bits, extended, max_certificates, progress, budget_seconds)
    return rep


# -- cross-ratio constancy probe --------------------------------------------


def ball_modulus(points: list[PointP1], bits: int) -> Optional[ComplexBall]:
    """Ball enclosure of the modulus; None when a denominator is not separated from 0."""
    pts = [p if isinstance(p, Infinity) else p.enclosure(bits) for p in points]
    p1, p2, p3, p4 = pts

    def diff(x, y):
        return None if isinstance(x, Infinity) or isinstance(y, Infinity) else x - y

    # drop factors involving infinity, as in cross_ratio
    num = [diff(p1, p3), diff(p2, p4)]
    den = [diff(p2, p3), diff(p1, p4)]
    one = ComplexBall.exact(1, bits)
    N = one
    D = one
    for t in num:
        if t is not None:
            N = N * t
    for t in den:
        if t is not None:
            D = D * t
    if D.contains_zero():
        return None
    lam = N / D
    den2 = (lam * (lam - 1)) ** 2
    if den2.contains_zero():
        return None
    return ((lam * lam - lam + 1) ** 3 * 256) / den2


@dataclass
class ScanFamily:
    labels: tuple
    constant: Optional[bool]
    moduli: list
    flagged: bool = False

    def to_json(self) -> dict:
        def enc(m):
            if m is None:
                return None
            if isinstance(m, AlgebraicNumber):
                return m.to_json()
            return m.to_json()

        return {"labels": list(self.labels), "constant": self.constant,
                "moduli": [enc(m) for m in self.moduli], "flagged": self.flagged}


@dataclass
class ScanReport:
    n: int
    grid: list
    families: list = field(default_factory=list)
    continuation_ok: bool = True

    @property
    def nonconstant(self) -> list:
        return [f for f in self.families if f.constant is False]

    @property
    def all_constant(self) -> bool:
        return bool(self.families) and all(f.constant is True for f in self.families)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "grid": [str(a) for a in self.grid],
            "continuation_ok": self.continuation_ok,
            "family_count": len(self.families),
            "constant_count": sum(1 for f in self.families if f.constant is True),
            "nonconstant_count": len(self.nonconstant),
            "undecided_count": sum(1 for f in self.families if f.constant is None),
            "evidence_only": True,
            "families": [f.to_json() for f in self.families],
        }


def _match(prev: list[PointP1], cur: list[PointP1]) -> Optional[list[int]]:
    """Nearest-ball continuation; None when the matching is ambiguous."""
    out = []
    for p in prev:
        if isinstance(p, Infinity):
            idx = [k for k, q in enumerate(cur) if isinstance(q, Infinity)]
            if len(idx) != 1:
                return None
            out.append(idx[0])
            continue
        z = p.approx()
        dists = sorted((abs(q.approx() - z), k) for k, q in enumerate(cur) if not isinstance(q, Infinity))
        if not dists or (len(dists) > 1 and dists[1][0] < 2 * dists[0][0]):
            return None
        out.append(dists[0][1])
    if len(set(out)) != len(out):
        return None
    return out


def _image_at(n: int, a: Fraction, bits: int) -> list[PointP1]:
    try:
        E = SymmetricCurve(a)
    except BadInput:
        raise BadInput(f"degenerate parameter {a}")
    return sorted(torsion_image(E, n, bits).points, key=point_sort_key)


def _continue(n: int, a0: Fraction, a1: Fraction, prev: list[PointP1], bits: int,
              depth: int = 0) -> Optional[list[PointP1]]:
    """Carry the labeling of prev (at a0) to a1, bisecting the segment as needed."""
    cur = _image_at(n, a1, bits)
    perm = _match(prev, cur)
    if perm is not None:
        return [cur[j] for j in perm]
    if depth >= 12:
        return None
    mid = (a0 + a1) / 2
    try:
        half = _continue(n, a0, mid, prev, bits, depth + 1)
    except BadInput:
        return None
    if half is None:
        return None
    return _continue(n, mid, a1, half, bits, depth + 1)


def _exact_is_cheap(points: list[PointP1]) -> bool:
    if quartic_modulus(points) is not None:
        return True
    return all(isinstance(p, Infinity) or p.degree <= 4 for p in points)


def moduli_scan(n: int, grid: list, subset_size: int = 4, bits: int = DEFAULT_BITS) -> ScanReport:
    """Track labeled 4-subsets of the order-n image across a grid of a-values.

    Labels are carried between grid values by nearest-ball matching along a
    bisected segment; an ambiguous matching stops the tracking and flags the
    report.  Distinct values are certified by disjoint balls; equal values by
    an exact check where that is affordable, otherwise the family is left
    undecided (constant = None).
    """
    if subset_size != 4:
        raise BadInput("only 4-subsets have a modulus")
    grid = [Fraction(a) for a in grid]
    if not grid:
        raise BadInput("empty grid")
    first = _image_at(n, grid[0], bits)
    labeled = [first]
    ok = True
    for k in range(1, len(grid)):
        if len(first) == 4:
            labeled.append(_image_at(n, grid[k], bits))
            continue
        nxt = _continue(n, grid[k - 1], grid[k], labeled[-1], bits)
        if nxt is None:
            ok = False
            break
        labeled.append(nxt)
    rep = ScanReport(n, grid, continuation_ok=ok)
    for labels in itertools.combinations(range(len(first)), 4):
        subsets = [[img[i] for i in labels] for img in labeled]
        balls = [ball_modulus(s, bits) for s in subsets]
        constant: Optional[bool] = None
        moduli: list = list(balls)
        if any(b1 is not None and b2 is not None and b1.disjoint(b2)
               for b1, b2 in itertools.combinations(balls, 2)):
            constant = False
        elif all(_exact_is_cheap(s) for s in subsets):
            vals = [exact_modulus(s) for s in subsets]
            moduli = vals
            constant = all(algnum_equal(vals[0], v) for v in vals[1:])
        if len(labeled) < len(grid) and constant is True:
            constant = None
        rep.families.append(ScanFamily(labels, constant, moduli, flagged=len(labeled) < len(grid)))
    return rep
