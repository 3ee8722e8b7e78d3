"""Geometry of finite point sets on P^1: Moebius maps, cross-ratios, the
j-type modulus of a 4-set, projective equivalence, and Klein four-groups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algnum import (
    DEFAULT_BITS,
    INF,
    AlgebraicNumber,
    ComplexBall,
    Infinity,
    PointP1,
    algnum_equal,
    as_algebraic,
    as_point,
    point_sort_key,
)
from .errors import BadInput
from .exactmath import UniPoly, discriminant

Scalar = AlgebraicNumber  # rationals are degree-one algebraic numbers


def _alg(x) -> AlgebraicNumber:
    return as_algebraic(x)


def _is_zero(x: AlgebraicNumber) -> bool:
    return x.is_zero()


class MobiusMap:
    """z -> (alpha z + beta) / (gamma z + delta), an element of PGL_2."""

    __slots__ = ("alpha", "beta", "gamma", "delta")

    def __init__(self, alpha, beta, gamma, delta):
        self.alpha, self.beta, self.gamma, self.delta = map(_alg, (alpha, beta, gamma, delta))
        if _is_zero(self.det()):
            raise BadInput("singular Moebius matrix")

    @classmethod
    def identity(cls) -> MobiusMap:
        return cls(1, 0, 0, 1)

    @classmethod
    def to_zero_one_inf(cls, z1: PointP1, z2: PointP1, z3: PointP1) -> MobiusMap:
        """The map sending z1, z2, z3 to 0, 1, inf."""
        if isinstance(z1, Infinity):
            return cls(0, z2 - z3, 1, -z3)
        if isinstance(z2, Infinity):
            return cls(1, -z1, 1, -z3)
        if isinstance(z3, Infinity):
            return cls(1, -z1, 0, z2 - z1)
        a = z2 - z3
        c = z2 - z1
        return cls(a, -(z1 * a), c, -(z3 * c))

    @classmethod
    def from_triples(cls, src, dst) -> MobiusMap:
        """The unique map with src[i] -> dst[i] for three distinct points each."""
        s = cls.to_zero_one_inf(*src)
        d = cls.to_zero_one_inf(*dst)
        return d.inverse().compose(s)

    def det(self) -> AlgebraicNumber:
        return self.alpha * self.delta - self.beta * self.gamma

    def entries(self):
        return (self.alpha, self.beta, self.gamma, self.delta)

    def __call__(self, z: PointP1) -> PointP1:
        a, b, c, d = self.entries()
        if isinstance(z, Infinity):
            return INF if _is_zero(c) else a / c
        den = c * z + d
        if _is_zero(den):
            return INF
        return (a * z + b) / den

    def compose(self, other: MobiusMap) -> MobiusMap:
        """self o other."""
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return MobiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> MobiusMap:
        a, b, c, d = self.entries()
        return MobiusMap(d, -b, -c, a)

    def normalized(self) -> MobiusMap:
        """Scale so the first nonzero entry is 1."""
        for e in self.entries():
            if not _is_zero(e):
                inv = e.inverse()
                return MobiusMap(*(x * inv for x in self.entries()))
        raise BadInput("zero matrix")

    def projectively_equal(self, other: MobiusMap) -> bool:
        p, q = self.entries(), other.entries()
        for i in range(4):
            for j in range(i + 1, 4):
                if not _is_zero(p[i] * q[j] - p[j] * q[i]):
                    return False
        return True

    def is_identity(self) -> bool:
        return self.projectively_equal(MobiusMap.identity())

    def is_involution(self) -> bool:
        return not self.is_identity() and self.compose(self).is_identity()

    def ball_apply(self, z, bits: int):
        """Ball enclosure of the image; None when the denominator is not separated from 0."""
        a, b, c, d = (e.enclosure(bits) for e in self.entries())
        if isinstance(z, Infinity):
            num, den = a, c
        else:
            zb = z.enclosure(bits)
            num, den = a * zb + b, c * zb + d
        if den.contains_zero():
            if num.contains_zero():
                return None
            return INF if den.rad == 0 and den.re == 0 and den.im == 0 else None
        return num / den

    def to_text(self) -> list[list[str]]:
        def txt(e: AlgebraicNumber):
            if e.is_rational():
                q = e.as_fraction()
                return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
            return e.to_json()

        n = self.normalized()
        return [[txt(n.alpha), txt(n.beta)], [txt(n.gamma), txt(n.delta)]]

    def __repr__(self):
        return f"MobiusMap({self.to_text()})"


@dataclass
class FourSet:
    points: tuple
    marked_identity: Optional[PointP1] = None

    def __post_init__(self):
        self.points = tuple(as_point(p) for p in self.points)
        if len(self.points) != 4:
            raise BadInput("a FourSet has exactly four points")
        for p, q in itertools.combinations(self.points, 2):
            if algnum_equal(p, q):
                raise BadInput("FourSet points must be pairwise distinct")
        if self.marked_identity is not None:
            self.marked_identity = as_point(self.marked_identity)
            if not any(algnum_equal(self.marked_identity, p) for p in self.points):
                raise BadInput("marked identity is not one of the points")

    def others(self) -> list[PointP1]:
        m = self.marked_identity
        return [p for p in self.points if not algnum_equal(p, m)]

    def with_canonical_mark(self) -> FourSet:
        """Mark the minimal point under (minpoly, ball center) order."""
        return FourSet(self.points, min(self.points, key=point_sort_key))


@dataclass
class WeierstrassCurve:
    """y^2 = x^3 + a2 x^2 + a4 x + a6 with rational or algebraic coefficients."""

    a2: object
    a4: object
    a6: object

    def __post_init__(self):
        for name in ("a2", "a4", "a6"):
            v = getattr(self, name)
            if isinstance(v, AlgebraicNumber) and v.is_rational():
                setattr(self, name, v.as_fraction())
            elif isinstance(v, (int, str)):
                setattr(self, name, Fraction(v))
        if self.is_rational():
            if discriminant(self.cubic()) == 0:
                raise BadInput("singular curve: the cubic has a repeated root")

    def is_rational(self) -> bool:
        return all(isinstance(v, Fraction) for v in (self.a2, self.a4, self.a6))

    def cubic(self) -> UniPoly:
        if not self.is_rational():
            raise BadInput("cubic() needs rational coefficients")
        return UniPoly([self.a6, self.a4, self.a2, 1], "x")


@dataclass
class SymmetricCurve:
    """The curve branched over {a, -a, 1/a, -1/a} with identity over a."""

    a: AlgebraicNumber

    def __post_init__(self):
        self.a = as_algebraic(self.a)
        if self.a.is_zero() or algnum_equal(self.a**4, as_algebraic(1)):
            raise BadInput("a must avoid 0, +-1, +-i")

    @property
    def t(self) -> AlgebraicNumber:
        a2 = self.a * self.a
        return a2 + a2.inverse()

    def four_set(self) -> FourSet:
        a = self.a
        return FourSet((a, -a, a.inverse(), -a.inverse()), a)


# -- invariants -------------------------------------------------------------


def cross_ratio(p1: PointP1, p2: PointP1, p3: PointP1, p4: PointP1) -> AlgebraicNumber:
    """((p1-p3)(p2-p4)) / ((p2-p3)(p1-p4)) with the usual limits at infinity."""
    pts = (p1, p2, p3, p4)
    for p, q in itertools.combinations(pts, 2):
        if algnum_equal(p, q):
            raise BadInput("cross_ratio needs four distinct points")
    if isinstance(p1, Infinity):
        return (p2 - p4) / (p2 - p3)
    if isinstance(p2, Infinity):
        return (p1 - p3) / (p1 - p4)
    if isinstance(p3, Infinity):
        return (p2 - p4) / (p1 - p4)
    if isinstance(p4, Infinity):
        return (p1 - p3) / (p2 - p3)
    return ((p1 - p3) * (p2 - p4)) / ((p2 - p3) * (p1 - p4))


def modulus_of_cross_ratio(lam: AlgebraicNumber) -> AlgebraicNumber:
    """256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2), invariant under the six l-substitutions."""
    num = (lam * lam - lam + 1) ** 3 * 256
    den = (lam * (lam - 1)) ** 2
    return num / den


def fourset_modulus(S: FourSet) -> AlgebraicNumber:
    return modulus_of_cross_ratio(cross_ratio(*S.points))


def quartic_modulus(points: list[PointP1]) -> Optional[AlgebraicNumber]:
    """Exact modulus when the points are complete conjugacy classes over Q.

    Uses the binary-quartic invariants of the product of minimal polynomials
    (a point at infinity lowers the degree of that form).
    """
    groups: dict[str, list] = {}
    has_inf = False
    for p in points:
        if isinstance(p, Infinity):
            has_inf = True
            continue
        groups.setdefault(p.minpoly.to_text(), []).append(p)
    prod = UniPoly([1], "x")
    for key, ps in groups.items():
        mpol = ps[0].minpoly
        if len(ps) != mpol.degree:
            return None
        prod = prod * mpol
    if prod.degree + (1 if has_inf else 0) != 4:
        return None
    c = list(prod.coeffs) + [Fraction(0)] * (5 - len(prod.coeffs))
    e, d, cc, b, a = c[0], c[1], c[2], c[3], c[4]
    I = 12 * a * e - 3 * b * d + cc * cc
    J = 72 * a * cc * e + 9 * b * cc * d - 27 * a * d * d - 27 * e * b * b - 2 * cc**3
    den = 4 * I**3 - J * J
    if den == 0:
        raise BadInput("repeated point in a 4-set")
    return as_algebraic(6912 * I**3 / den)


def exact_modulus(points: list[PointP1]) -> AlgebraicNumber:
    q = quartic_modulus(points)
    if q is not None:
        return q
    return modulus_of_cross_ratio(cross_ratio(*points))


def fourset_equivalent(S, T) -> bool:
    """Projective equivalence of two 4-sets, decided by equality of moduli."""
    S = [as_point(p) for p in S]
    T = [as_point(p) for p in T]
    if len(S) != 4 or len(T) != 4:
        raise BadInput("fourset_equivalent compares 4-point sets")
    return algnum_equal(exact_modulus(S), exact_modulus(T))


# -- equivalence ------------------------------------------------------------


def _member(p: PointP1, S: list[PointP1]) -> bool:
    return any(algnum_equal(p, s) for s in S)


def _maps_onto(g: MobiusMap, T: list[PointP1], S: list[PointP1], bits: int) -> bool:
    # certified exclusion by balls first, exact membership second
    for t in T:
        enc = g.ball_apply(t, bits)
        if isinstance(enc, ComplexBall):
            if all(isinstance(s, Infinity) or enc.disjoint(s.enclosure(bits)) for s in S):
                return False
    return all(_member(g(t), S) for t in T)


def projectively_equivalent(S, T, bits: int = DEFAULT_BITS) -> Optional[MobiusMap]:
    """A map g with g(T) = S as sets, or None."""
    S = [as_point(p) for p in S]
    T = [as_point(p) for p in T]
    if len(S) != len(T) or len(S) < 3:
        raise BadInput("sets must have equal size >= 3")
    anchors = T[:3]
    for triple in itertools.permutations(S, 3):
        g = MobiusMap.from_triples(anchors, triple)
        if _maps_onto(g, T, S, bits):
            return g
    return None


def klein_involutions(S: FourSet) -> list[MobiusMap]:
    """The three involutions preserving S that pair its points two and two.

    Ordered by the partner of the first point: (p1 p2)(p3 p4), (p1 p3)(p2 p4),
    (p1 p4)(p2 p3).
    """
    p1, p2, p3, p4 = S.points
    out = []
    for a, b, c, d in ((p1, p2, p3, p4), (p1, p3, p2, p4), (p1, p4, p2, p3)):
        g = MobiusMap.from_triples((a, b, c), (b, a, d))
        if not algnum_equal(g(d), c):
            raise BadInput("pairing involution does not close up")
        out.append(g)
    return out


def klein_orbit(p: PointP1, S: FourSet | list[MobiusMap]) -> list[PointP1]:
    invs = S if isinstance(S, list) else klein_involutions(S)
    orbit = [p]
    for g in invs:
        q = g(p)
        if not _member(q, orbit):
            orbit.append(q)
    return orbit


def standard_klein_group() -> list[MobiusMap]:
    """z -> -z, 1/z, -1/z: the Klein group of every set {a, -a, 1/a, -1/a}."""
    return [MobiusMap(-1, 0, 0, 1), MobiusMap(0, 1, 1, 0), MobiusMap(0, -1, 1, 0)]


@dataclass
class FourSubsetClass:
    modulus: AlgebraicNumber
    subsets: list = field(default_factory=list)


def classify_four_subsets(P) -> list[FourSubsetClass]:
    """Partition the 4-subsets of P into projective equivalence classes."""
    P = [as_point(p) for p in P]
    if len(P) < 4:
        raise BadInput("need at least four points")
    classes: list[FourSubsetClass] = []
    for sub in itertools.combinations(P, 4):
        j = fourset_modulus(FourSet(sub))
        for cl in classes:
            if algnum_equal(cl.modulus, j):
                # same modulus: confirm with an explicit map
                if projectively_equivalent(list(cl.subsets[0]), list(sub)) is None:
                    raise BadInput("equal moduli without an equivalence")
                cl.subsets.append(sub)
                break
        else:
            classes.append(FourSubsetClass(j, [sub]))
    classes.sort(key=lambda c: (c.modulus.ball.re, c.modulus.ball.im, c.modulus.sort_key()))
    return classes


def normalize_to_weierstrass(S: FourSet, scale=1, shift=0) -> tuple[WeierstrassCurve, MobiusMap]:
    """Send the marked point to infinity with z -> scale/(z - m) + shift.

    The cubic of the returned curve is prod (x - mu(r)) over the other three
    points; for m = inf the map is z -> scale*z + shift.
    """
    m = S.marked_identity
    if m is None:
        raise BadInput("normalize_to_weierstrass needs a marked identity")
    scale, shift = _alg(scale), _alg(shift)
    if isinstance(m, Infinity):
        mu = MobiusMap(scale, shift, 0, 1)
    else:
        mu = MobiusMap(shift, scale - shift * m, 1, -m)
    roots = [mu(r) for r in S.others()]
    e1 = roots[0] + roots[1] + roots[2]
    e2 = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2]
    e3 = roots[0] * roots[1] * roots[2]
    return WeierstrassCurve(-e1, e2, -e3), mu
