"""Division polynomials: the classical psi recurrence, Moebius inversion down to
exact order n, pullbacks to P^1 coordinates, and torsion images as point sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Union

from flint import nmod_poly

from .algnum import (
    DEFAULT_BITS,
    INF,
    MAX_BITS,
    AlgebraicNumber,
    Infinity,
    PointP1,
    algnum_equal,
    as_algebraic,
    eval_poly_ball,
    point_from_json,
    point_sort_key,
    point_to_json,
)
from .errors import BadInput, PrecisionExhausted, VerificationFailure
from .exactmath import MPoly, UniPoly, _prime_factors, discriminant, jordan_totient, resultant
from .projgeom import FourSet, MobiusMap, SymmetricCurve, WeierstrassCurve

Curve = Union[WeierstrassCurve, SymmetricCurve, FourSet]


def mobius_mu(n: int) -> int:
    f = _prime_factors(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def expected_degree(n: int) -> int:
    """Number of x-coordinates of points of exact order n."""
    if n < 2:
        raise BadInput("order must be >= 2")
    return 3 if n == 2 else jordan_totient(2, n) // 2


# -- the recurrence --------------------------------------------------------


def _recurrence(A, B, X):
    """Memoised h_k: psi_k for odd k, psi_k / (2y) for even k, written in X.

    Works over any commutative ring whose elements support + - * with ints.
    """
    F = X**3 + A * X + B
    zero = X * 0
    h = {
        0: zero,
        1: zero + 1,
        2: zero + 1,
        3: 3 * X**4 + 6 * A * X**2 + 12 * B * X - A**2,
        4: 2 * (X**6 + 5 * A * X**4 + 20 * B * X**3 - 5 * A**2 * X**2 - 4 * A * B * X - 8 * B**2 - A**3),
    }
    F2 = None

    def get(k):
        nonlocal F2
        if k in h:
            return h[k]
        m = k // 2
        if k % 2:
            if F2 is None:
                F2 = 16 * F * F
            if m % 2 == 0:
                r = F2 * get(m + 2) * get(m) ** 3 - get(m - 1) * get(m + 1) ** 3
            else:
                r = get(m + 2) * get(m) ** 3 - F2 * get(m - 1) * get(m + 1) ** 3
        else:
            r = get(m) * (get(m + 2) * get(m - 1) ** 2 - get(m - 2) * get(m + 1) ** 2)
        h[k] = r
        return r

    return get, F


def _depressed(a2, a4, a6, x):
    """(A, B, X) with X = x + a2/3 turning the cubic into X^3 + A X + B."""
    A = a4 - a2 * a2 * Fraction(1, 3)
    B = a2**3 * Fraction(2, 27) - a2 * a4 * Fraction(1, 3) + a6
    return A, B, x + a2 * Fraction(1, 3)


def _xpart(get, F, d):
    if d == 2:
        return F
    return F * get(d) if d % 2 == 0 else get(d)


def _inverted(get, F, n):
    num = den = None
    for d in range(2, n + 1):
        if n % d:
            continue
        mu = mobius_mu(n // d)
        if mu == 1:
            num = _xpart(get, F, d) if num is None else num * _xpart(get, F, d)
        elif mu == -1:
            den = _xpart(get, F, d) if den is None else den * _xpart(get, F, d)
    if den is None:
        return num
    return num.exquo(den)


def _ring_elements(a2, a4, a6):
    """Lift coefficients (Fractions or MPolys) into a common ring with x."""
    polys = [c for c in (a2, a4, a6) if isinstance(c, MPoly)]
    if not polys:
        x = UniPoly.gen("x")
        return a2, a4, a6, x
    vars_ = polys[0].vars
    x = MPoly.gens(vars_)[vars_.index("x")]
    return a2, a4, a6, x


def psi(E: WeierstrassCurve, n: int) -> UniPoly:
    """Polynomial in x vanishing exactly on x-coordinates of nonzero n-torsion.

    This is psi_n for odd n and psi_n / y for even n (the y factor carries no
    x-information), so its degree is (n^2 - 1)/2 or (n^2 + 2)/2.
    """
    if n < 2:
        raise BadInput("order must be >= 2")
    if not E.is_rational():
        raise BadInput("psi needs a curve with rational coefficients")
    A, B, X = _depressed(E.a2, E.a4, E.a6, UniPoly.gen("x"))
    get, F = _recurrence(A, B, X)
    return _xpart(get, F, n)


def _generic_primitive(a2, a4, a6, n):
    a2, a4, a6, x = _ring_elements(a2, a4, a6)
    A, B, X = _depressed(a2, a4, a6, x)
    get, F = _recurrence(A, B, X)
    return _inverted(get, F, n)


@dataclass
class DivisionPolynomial:
    order: int
    poly: Union[UniPoly, MPoly]
    kind: str  # "weierstrass", "symmetric", "legendre" or "pullback"
    points_at_infinity: int = 0

    def degree(self, var: str = "x") -> int:
        p = self.poly
        return p.degree if isinstance(p, UniPoly) else p.degree(var)

    def to_json(self) -> dict:
        d = {
            "order": self.order,
            "kind": self.kind,
            "poly": self.poly.to_text(),
            "degree": self.degree(),
        }
        if isinstance(self.poly, MPoly):
            d["variables"] = list(self.poly.vars)
            d["degrees"] = {v: self.poly.degree(v) for v in self.poly.vars}
        if self.points_at_infinity:
            d["points_at_infinity"] = self.points_at_infinity
        return d


@lru_cache(maxsize=256)
def _weierstrass_cached(a2: Fraction, a4: Fraction, a6: Fraction, n: int) -> UniPoly:
    return _generic_primitive(a2, a4, a6, n).monic()


def primitive_divpoly(E: WeierstrassCurve, n: int) -> DivisionPolynomial:
    """Monic f_n whose roots are the x-coordinates of points of exact order n."""
    if n < 2:
        raise BadInput("order must be >= 2")
    if not E.is_rational():
        raise BadInput("primitive_divpoly needs rational coefficients; use a FourSet")
    return DivisionPolynomial(n, _weierstrass_cached(E.a2, E.a4, E.a6, n), "weierstrass")


def _pullback_content_free(f: MPoly, param: str) -> MPoly:
    """Divide out the content of f with respect to x (a polynomial in param)."""
    g = f.content_in("x")
    if g.free_vars():
        f = f.exquo(g)
    return f.canonical()


@lru_cache(maxsize=64)
def _symmetric_cached(n: int) -> MPoly:
    vars_ = ("x", "a")
    x, a = MPoly.gens(vars_)
    # roots of the cubic after z -> D/(z - a), with D = 2a(1 - a^4) clearing denominators
    roots = [-(1 - a**4), 2 * a**2 * (1 + a**2), -2 * a**2 * (1 - a**2)]
    r1, r2, r3 = roots
    a2 = -(r1 + r2 + r3)
    a4 = r1 * r2 + r1 * r3 + r2 * r3
    a6 = -(r1 * r2 * r3)
    # f_n in the Weierstrass coordinate w, computed with w standing in the x slot
    fw = _generic_primitive(a2, a4, a6, n)
    d = fw.degree("x")
    D = 2 * a * (1 - a**4)
    shift = x - a
    out = MPoly.constant(0, vars_)
    for k, c in fw.coeffs_in("x").items():
        out = out + c * D**k * shift ** (d - k)
    return _pullback_content_free(out, "a")


def symmetric_family_divpoly(n: int) -> MPoly:
    """f_n(x, a) for the family branched over {a, -a, 1/a, -1/a}, identity over a.

    Integer primitive, content in a removed, positive leading term in lex (x, a).
    """
    if n < 2:
        raise BadInput("order must be >= 2")
    return _symmetric_cached(n)


@lru_cache(maxsize=64)
def _legendre_cached(n: int) -> MPoly:
    vars_ = ("x", "l")
    x, l = MPoly.gens(vars_)
    f = _generic_primitive(-(l + 1), l, MPoly.constant(0, vars_), n)
    return f.canonical()


def legendre_family_divpoly(n: int) -> MPoly:
    """f_n(x, l) for y^2 = x (x - 1)(x - l)."""
    if n < 2:
        raise BadInput("order must be >= 2")
    return _legendre_cached(n)


def _rational_points(S: FourSet) -> bool:
    return all(isinstance(p, Infinity) or p.is_rational() for p in S.points)


def pullback_divpoly(S: FourSet, n: int) -> DivisionPolynomial:
    """f_n in the P^1 coordinate of a rational 4-set with a marked identity.

    Points of exact order n over infinity show up as a drop in degree.
    """
    if not _rational_points(S):
        raise BadInput("pullback_divpoly needs rational points")
    from .projgeom import normalize_to_weierstrass

    E, mu = normalize_to_weierstrass(S)
    f = primitive_divpoly(E, n).poly
    m = S.marked_identity
    if isinstance(m, Infinity):
        out = f.canonical()
    else:
        mq = m.as_fraction()
        x = UniPoly.gen("x")
        d = f.degree
        out = UniPoly([0], "x")
        for k, c in enumerate(f.coeffs):
            if c:
                out = out + c * (x - mq) ** (d - k)
        out = out.canonical()
    return DivisionPolynomial(n, out, "pullback", expected_degree(n) - out.degree)


# -- torsion images ----------------------------------------------------------


@dataclass
class TorsionImage:
    order: int
    points: list = field(default_factory=list)
    defining_poly: DivisionPolynomial | None = None

    def __len__(self):
        return len(self.points)

    def contains(self, p: PointP1) -> bool:
        return any(algnum_equal(p, q) for q in self.points)

    def sorted_points(self) -> list[PointP1]:
        return sorted(self.points, key=point_sort_key)

    def to_json(self) -> dict:
        d = {"order": self.order, "points": [point_to_json(p) for p in self.sorted_points()]}
        if self.defining_poly is not None:
            d["defining_poly"] = self.defining_poly.to_json()
        return d

    @classmethod
    def from_json(cls, d: dict) -> TorsionImage:
        return cls(d["order"], [point_from_json(p) for p in d["points"]])


def specialized_degree(f: MPoly, var: str, param: str, alpha: AlgebraicNumber) -> int:
    """deg_var f(var, alpha), decided exactly through the minimal polynomial."""
    m = alpha.minpoly.rename(param)
    coeffs = f.coeffs_in(var)
    for k in sorted(coeffs, reverse=True):
        ck = coeffs[k]
        cu = ck.to_uni(param) if ck.free_vars() else UniPoly([ck.constant_value()], param)
        if not (cu % m).is_zero():
            return k
    return -1


def specialization_candidates(f: MPoly, var: str, param: str, minpoly: UniPoly,
                              bits: int = DEFAULT_BITS) -> list[AlgebraicNumber]:
    """Roots of Res_param(minpoly, f): every root of f(var, alpha) for every
    conjugate alpha is among them."""
    mp = MPoly.from_uni(minpoly.rename(param), f.vars)
    R = resultant(mp, f, param)
    return AlgebraicNumber.roots_of(R, bits) if R.degree > 0 else []


def select_specialized_roots(f: MPoly, var: str, param: str, alpha: AlgebraicNumber,
                             candidates: list[AlgebraicNumber], expected: int,
                             bits: int = DEFAULT_BITS) -> list[AlgebraicNumber]:
    """The candidates that are roots of f(var, alpha).

    A candidate is dropped once the ball enclosure of f(candidate, alpha)
    excludes 0; precision doubles until exactly ``expected`` remain.  The
    caller guarantees f(var, alpha) has exactly that many distinct roots.
    """
    b = bits
    alive = list(candidates)
    while b <= MAX_BITS:
        ab = alpha.enclosure(b)
        alive = [c for c in alive
                 if eval_poly_ball(f, {var: c.enclosure(b), param: ab}, b).contains_zero()]
        if len(alive) == expected:
            return alive
        if len(alive) < expected:
            raise VerificationFailure("fewer certified roots than expected")
        b *= 2
    raise PrecisionExhausted("could not separate roots of the specialised polynomial")


def specialized_roots(f: MPoly, param: str, alpha: AlgebraicNumber, bits: int = DEFAULT_BITS,
                      var: str = "x") -> tuple[list[AlgebraicNumber], int]:
    """Distinct roots in var of f(var, alpha), and deg_var f(var, alpha).

    f(var, alpha) must be squarefree.
    """
    if alpha.is_rational() or param not in f.free_vars():
        g = f.subs(param, alpha.as_fraction() if alpha.is_rational() else 0)
        g = g.to_uni(var) if g.free_vars() else UniPoly([g.constant_value()], var)
        return (AlgebraicNumber.roots_of(g, bits) if g.degree > 0 else []), g.degree
    deg = specialized_degree(f, var, param, alpha)
    if deg < 1:
        return [], max(deg, 0)
    cands = specialization_candidates(f, var, param, alpha.minpoly, bits)
    return select_specialized_roots(f, var, param, alpha, cands, deg, bits), deg


def _with_infinity(points, deg, n):
    missing = expected_degree(n) - deg
    if missing not in (0, 1):
        raise VerificationFailure(f"{missing} points of order {n} at infinity")
    return points + [INF] * missing


def torsion_image(E: Curve, n: int, precision_bits: int = DEFAULT_BITS) -> TorsionImage:
    """Images in P^1 of the points of exact order n."""
    if n < 2:
        raise BadInput("order must be >= 2")
    bits = precision_bits
    if isinstance(E, WeierstrassCurve):
        if not E.is_rational():
            raise BadInput("algebraic Weierstrass coefficients: pass the branch FourSet instead")
        dp = primitive_divpoly(E, n)
        return TorsionImage(n, AlgebraicNumber.roots_of(dp.poly, bits), dp)
    if isinstance(E, SymmetricCurve):
        f = symmetric_family_divpoly(n)
        pts, deg = specialized_roots(f, "a", E.a, bits)
        return TorsionImage(n, _with_infinity(pts, deg, n), DivisionPolynomial(n, f, "symmetric"))
    if isinstance(E, FourSet):
        if E.marked_identity is None:
            raise BadInput("the FourSet needs a marked identity")
        if _rational_points(E):
            dp = pullback_divpoly(E, n)
            pts = AlgebraicNumber.roots_of(dp.poly, bits) if dp.poly.degree > 0 else []
            return TorsionImage(n, _with_infinity(pts, dp.poly.degree, n), dp)
        return _legendre_image(E, n, bits)
    raise BadInput(f"unsupported curve description {type(E).__name__}")


def _legendre_image(S: FourSet, n: int, bits: int) -> TorsionImage:
    m = S.marked_identity
    r2, r3, r4 = S.others()
    # gamma: m -> inf, r2 -> 0, r3 -> 1, so r4 -> lambda
    gamma = MobiusMap.from_triples((r2, r3, m), (as_algebraic(0), as_algebraic(1), INF))
    lam = gamma(r4)
    f = legendre_family_divpoly(n)
    pts, deg = specialized_roots(f, "l", lam, bits)
    pts = _with_infinity(pts, deg, n)
    ginv = gamma.inverse()
    return TorsionImage(n, [ginv(p) for p in pts], DivisionPolynomial(n, f, "legendre"))


def image_equal(E1: Curve, E2: Curve, n: int) -> bool:
    """Whether the exact-order-n images coincide as subsets of P^1."""
    if isinstance(E1, WeierstrassCurve) and isinstance(E2, WeierstrassCurve) \
            and E1.is_rational() and E2.is_rational():
        return primitive_divpoly(E1, n).poly == primitive_divpoly(E2, n).poly
    A, B = torsion_image(E1, n), torsion_image(E2, n)
    if len(A) != len(B):
        return False
    return all(B.contains(p) for p in A.points)


# -- finite fields -----------------------------------------------------------


@dataclass(frozen=True)
class FiniteFieldCurve:
    """y^2 = x^3 + a2 x^2 + a4 x + a6 over F_p."""

    p: int
    a2: int
    a4: int
    a6: int

    def __post_init__(self):
        if self.p < 5 or len(_prime_factors(self.p)) != 1 or _prime_factors(self.p).get(self.p) != 1:
            raise BadInput("p must be a prime >= 5")
        disc = -4 * self.a2**3 * self.a6 + self.a2**2 * self.a4**2 + 18 * self.a2 * self.a4 * self.a6 \
            - 4 * self.a4**3 - 27 * self.a6**2
        if disc % self.p == 0:
            raise BadInput("singular reduction")

    def rhs(self, x: int) -> int:
        return (x**3 + self.a2 * x * x + self.a4 * x + self.a6) % self.p


def _add(E: FiniteFieldCurve, d: int, P, Q):
    """Group law on the twist d y^2 = cubic; None is the identity."""
    p = E.p
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + 2 * E.a2 * x1 + E.a4) * pow(2 * d * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (d * lam * lam - E.a2 - x1 - x2) % p
    y3 = (lam * (x1 - x3) - y1) % p
    return (x3, y3)


def _order_is(E, d, P, n) -> bool:
    Q = P
    for k in range(1, n):
        if Q is None:
            return False
        Q = _add(E, d, Q, P)
    return Q is None


def oracle_torsion_fp(E: FiniteFieldCurve, n: int) -> set[int]:
    """x in F_p of points of exact order n, by enumeration.

    A root x of f_n in F_p may have its y only in F_{p^2}; such points live on
    the quadratic twist, so both the curve and its twist are enumerated.
    """
    if n < 2:
        raise BadInput("order must be >= 2")
    p = E.p
    squares = {}
    for y in range(p):
        squares.setdefault(y * y % p, []).append(y)
    nonres = next(c for c in range(2, p) if c not in squares)
    out = set()
    for x in range(p):
        r = E.rhs(x)
        for d in (1, nonres):
            t = r * pow(d, -1, p) % p
            for y in squares.get(t, []):
                if x not in out and _order_is(E, d, (x, y), n):
                    out.add(x)
    return out


def divpoly_roots_mod_p(E: WeierstrassCurve, n: int, p: int) -> set[int]:
    """Roots in F_p of f_n reduced mod p; p must be a prime of good reduction
    not dividing n."""
    if not E.is_rational():
        raise BadInput("needs rational coefficients")
    if p < 5 or n % p == 0:
        raise BadInput("bad prime")
    for c in (E.a2, E.a4, E.a6):
        if c.denominator % p == 0:
            raise BadInput("bad prime")
    disc = discriminant(E.cubic())
    if disc.numerator % p == 0:
        raise BadInput("bad prime")
    f = primitive_divpoly(E, n).poly
    coeffs = []
    for c in f.coeffs:
        if c.denominator % p == 0:
            raise BadInput("bad prime")
        coeffs.append(c.numerator * pow(c.denominator, -1, p) % p)
    g = nmod_poly(coeffs, p)
    return {int(r) for r, _ in g.roots()}


def reduce_curve(E: WeierstrassCurve, p: int) -> FiniteFieldCurve:
    vals = []
    for c in (E.a2, E.a4, E.a6):
        if c.denominator % p == 0:
            raise BadInput("bad prime")
        vals.append(c.numerator * pow(c.denominator, -1, p) % p)
    return FiniteFieldCurve(p, *vals)
