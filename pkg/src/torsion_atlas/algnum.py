"""Certified complex roots and exact identity of algebraic points of P^1.

Root isolation runs Aberth's simultaneous iteration in gmpy2 floating point
and then certifies the result exactly: every center is rounded to a dyadic
Gaussian rational, p and p' are evaluated there in integer arithmetic, and
the Newton inclusion disc of radius deg(p)*|p/p'| is formed.  Each such disc
holds at least one root, so pairwise disjoint discs hold exactly one each.

Ball predicates (containment, disjointness) are exact because centers and
radii are ``Fraction`` values.  Equality of algebraic numbers never relies on
a tolerance: it goes through gcds of minimal polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import flint
import gmpy2
from flint import acb, arb, fmpq, fmpz_poly
from gmpy2 import mpc, mpfr

from .errors import BadInput, PrecisionExhausted
from .exactmath import MPoly, UniPoly, poly_gcd, resultant

DEFAULT_BITS = 256
MAX_BITS = 1 << 15


# -- dyadic helpers ---------------------------------------------------------


def _round_frac(q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Round to a dyadic with ~bits significant bits; returns (value, error bound)."""
    if q == 0 or q.denominator & (q.denominator - 1) == 0 and q.denominator.bit_length() <= bits + 64:
        return q, Fraction(0)
    mag = q.numerator.bit_length() - q.denominator.bit_length()
    k = max(bits - mag, 0)
    v = Fraction(round(q * (1 << k)), 1 << k)
    return v, Fraction(1, 1 << (k + 1))


def _sqrt_up(q: Fraction, bits: int = 64) -> Fraction:
    """Rational upper bound on sqrt(q), q >= 0."""
    if q <= 0:
        return Fraction(0)
    s = max(bits - (q.numerator.bit_length() - q.denominator.bit_length()) // 2, 0)
    scaled = q * (1 << (2 * s))
    n = scaled.numerator // scaled.denominator
    return Fraction(math.isqrt(n) + 1, 1 << s)


def _sqrt_down(q: Fraction, bits: int = 64) -> Fraction:
    if q <= 0:
        return Fraction(0)
    s = max(bits - (q.numerator.bit_length() - q.denominator.bit_length()) // 2, 0)
    scaled = q * (1 << (2 * s))
    n = scaled.numerator // scaled.denominator
    return Fraction(math.isqrt(n), 1 << s)


def _mpfr_frac(x) -> Fraction:
    n, d = x.as_integer_ratio()
    return Fraction(int(n), int(d))


# -- balls ------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexBall:
    """Closed disc {z : |z - (re + i im)| <= rad} with exact rational data."""

    re: Fraction
    im: Fraction
    rad: Fraction
    bits: int = DEFAULT_BITS

    @classmethod
    def exact(cls, z, bits: int = DEFAULT_BITS) -> ComplexBall:
        if isinstance(z, complex):
            return cls(Fraction(z.real), Fraction(z.imag), Fraction(0), bits)
        if isinstance(z, tuple):
            return cls(Fraction(z[0]), Fraction(z[1]), Fraction(0), bits)
        return cls(Fraction(z), Fraction(0), Fraction(0), bits)

    def _new(self, re, im, rad, bits=None) -> ComplexBall:
        bits = bits or self.bits
        re, e1 = _round_frac(re, bits)
        im, e2 = _round_frac(im, bits)
        if e1 or e2:
            rad = rad + e1 + e2
        rad = _round_up(rad, bits)
        return ComplexBall(re, im, rad, bits)

    # geometry
    def abs2_center(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def abs_upper(self) -> Fraction:
        return _sqrt_up(self.abs2_center(), self.bits) + self.rad

    def abs_lower(self) -> Fraction:
        return max(_sqrt_down(self.abs2_center(), self.bits) - self.rad, Fraction(0))

    def contains_point(self, re: Fraction, im: Fraction) -> bool:
        dr, di = re - self.re, im - self.im
        return dr * dr + di * di <= self.rad * self.rad

    def contains_zero(self) -> bool:
        return self.contains_point(Fraction(0), Fraction(0))

    def contains(self, other: ComplexBall) -> bool:
        if other.rad > self.rad:
            return False
        dr, di = other.re - self.re, other.im - self.im
        slack = self.rad - other.rad
        return dr * dr + di * di <= slack * slack

    def disjoint(self, other: ComplexBall) -> bool:
        dr, di = other.re - self.re, other.im - self.im
        s = self.rad + other.rad
        return dr * dr + di * di > s * s

    def overlaps(self, other: ComplexBall) -> bool:
        return not self.disjoint(other)

    # arithmetic
    def __add__(self, other):
        o = _as_ball(other, self.bits)
        return self._new(self.re + o.re, self.im + o.im, self.rad + o.rad)

    __radd__ = __add__

    def __neg__(self):
        return ComplexBall(-self.re, -self.im, self.rad, self.bits)

    def __sub__(self, other):
        return self + (-_as_ball(other, self.bits))

    def __rsub__(self, other):
        return _as_ball(other, self.bits) + (-self)

    def __mul__(self, other):
        o = _as_ball(other, self.bits)
        re = self.re * o.re - self.im * o.im
        im = self.re * o.im + self.im * o.re
        if self.rad == 0 and o.rad == 0:
            rad = Fraction(0)
        else:
            a = _sqrt_up(self.abs2_center(), self.bits)
            b = _sqrt_up(o.abs2_center(), self.bits)
            rad = a * o.rad + b * self.rad + self.rad * o.rad
        return self._new(re, im, rad)

    __rmul__ = __mul__

    def inverse(self) -> ComplexBall:
        lo = self.abs_lower()
        if lo <= 0:
            raise ZeroDivisionError("ball contains zero")
        n2 = self.abs2_center()
        re, im = self.re / n2, -self.im / n2
        c = _sqrt_down(n2, self.bits)
        rad = self.rad / (c * (c - self.rad)) if self.rad else Fraction(0)
        return self._new(re, im, rad)

    def __truediv__(self, other):
        return self * _as_ball(other, self.bits).inverse()

    def __rtruediv__(self, other):
        return _as_ball(other, self.bits) * self.inverse()

    def __pow__(self, k: int):
        out = ComplexBall.exact(1, self.bits)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def sqrt(self) -> ComplexBall:
        """Enclosure of the square root near sqrt(center) (branch continuous on the ball)."""
        prec = self.bits + 32
        with gmpy2.context(gmpy2.get_context(), precision=prec):
            s = gmpy2.sqrt(mpc(mpfr(self.re.numerator) / self.re.denominator,
                               mpfr(self.im.numerator) / self.im.denominator))
            sr, si = _mpfr_frac(s.real), _mpfr_frac(s.imag)
        # |s^2 - c| measured exactly, then |sqrt(w) - s| <= (rad + err)/|s|
        er = sr * sr - si * si - self.re
        ei = 2 * sr * si - self.im
        err = _sqrt_up(er * er + ei * ei, self.bits)
        slo = _sqrt_down(sr * sr + si * si, self.bits)
        total = self.rad + err
        if slo == 0 or total > slo * slo / 4:
            raise PrecisionExhausted("square root enclosure too wide")
        return self._new(sr, si, 2 * total / slo)

    def approx(self) -> complex:
        return complex(float(self.re), float(self.im))

    def mpc(self, prec: int | None = None):
        prec = prec or self.bits
        with gmpy2.context(gmpy2.get_context(), precision=prec):
            return mpc(mpfr(self.re.numerator) / self.re.denominator,
                       mpfr(self.im.numerator) / self.im.denominator)

    def to_json(self) -> dict:
        def dec(q: Fraction) -> str:
            digits = max(int(self.bits * 0.30103) + 2, 20)
            return _to_decimal(q, digits)

        re, im = dec(self.re), dec(self.im)
        # widen by the rounding of the center so the parsed ball still encloses
        slack = abs(Fraction(re) - self.re) + abs(Fraction(im) - self.im)
        return {"re": re, "im": im, "rad": _to_decimal_up(self.rad + slack), "bits": self.bits}

    @classmethod
    def from_json(cls, d: dict) -> ComplexBall:
        return cls(Fraction(d["re"]), Fraction(d["im"]), Fraction(d["rad"]), int(d["bits"]))


def _round_up(q: Fraction, bits: int) -> Fraction:
    if q == 0:
        return q
    mag = q.numerator.bit_length() - q.denominator.bit_length()
    k = max(bits // 2 - mag, 0)
    n = -((-q.numerator * (1 << k)) // q.denominator)
    return Fraction(n, 1 << k)


def _to_decimal(q: Fraction, digits: int) -> str:
    if q == 0:
        return "0"
    sign = "-" if q < 0 else ""
    q = abs(q)
    scale = 10**digits
    n = round(q * scale)
    s = str(n).rjust(digits + 1, "0")
    out = s[:-digits] + "." + s[-digits:]
    return sign + out.rstrip("0").rstrip(".")


def _to_decimal_up(q: Fraction) -> str:
    """Short decimal upper bound for a radius."""
    if q == 0:
        return "0"
    e = math.floor(math.log10(q.numerator) - math.log10(q.denominator))
    scale = Fraction(10) ** (6 - e)
    n = -((-q.numerator * scale.numerator) // (q.denominator * scale.denominator))
    return f"{n}e{e - 6}"


def _as_ball(x, bits: int) -> ComplexBall:
    if isinstance(x, ComplexBall):
        return x
    if isinstance(x, AlgebraicNumber):
        return x.ball
    return ComplexBall.exact(x, bits)


# -- root isolation ---------------------------------------------------------


def squarefree_part(p: UniPoly) -> UniPoly:
    g = poly_gcd(p, p.derivative())
    return p.exquo(g).canonical() if g.degree > 0 else p.canonical()


def _initial_points(coeffs: list[int], n: int, prec: int) -> list:
    """Bini's starting points from the Newton polygon of log|coefficients|."""
    pts = [(i, math.log2(abs(c)) if c.bit_length() < 1000 else (c.bit_length() - 1))
           for i, c in enumerate(coeffs) if c]
    hull: list[tuple[int, float]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    sigma = 0.7
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        two_pi = 2 * gmpy2.const_pi()
        for (i0, y0), (i1, y1) in zip(hull, hull[1:]):
            m = i1 - i0
            radius = mpfr(2) ** ((y0 - y1) / m)
            for j in range(m):
                ang = two_pi * j / m + two_pi * i0 / n + sigma
                out.append(mpc(radius * gmpy2.cos(ang), radius * gmpy2.sin(ang)))
    return out


def _aberth(coeffs: list[int], zs: list, prec: int, max_iter: int) -> list:
    n = len(coeffs) - 1
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        cs = [mpfr(c) for c in coeffs]
        zs = [mpc(z) for z in zs]
        eps = mpfr(2) ** (-prec + 8)
        done = [False] * n
        for _ in range(max_iter):
            moved = False
            for i in range(n):
                if done[i]:
                    continue
                z = zs[i]
                p = mpc(cs[n])
                dp = mpc(0)
                for c in cs[n - 1::-1]:
                    dp = dp * z + p
                    p = p * z + c
                if p == 0:
                    done[i] = True
                    continue
                ratio = p / dp if dp != 0 else mpc(eps)
                s = mpc(0)
                for j in range(n):
                    if j != i:
                        d = z - zs[j]
                        if d != 0:
                            s += 1 / d
                w = ratio / (1 - ratio * s)
                zs[i] = z - w
                if abs(w) <= eps * abs(z):
                    done[i] = True
                else:
                    moved = True
            if not moved:
                break
        return zs


def _exact_inclusion(coeffs: list[int], z, bits: int) -> ComplexBall:
    """Newton inclusion disc around a rounded center, evaluated exactly."""
    n = len(coeffs) - 1
    re, im = _mpfr_frac(z.real), _mpfr_frac(z.imag)
    mag = max(abs(re), abs(im), Fraction(1))
    k = max(bits - (mag.numerator.bit_length() - mag.denominator.bit_length()) + 8, 8)
    X = round(re * (1 << k))
    Y = round(im * (1 << k))
    # S = p(z) 2^(kn) and D = p'(z) 2^(k(n-1)) as Gaussian integers
    sr, si = coeffs[n], 0
    for j in range(n - 1, -1, -1):
        sr, si = sr * X - si * Y + (coeffs[j] << (k * (n - j))), sr * Y + si * X
    dc = [j * coeffs[j] for j in range(1, n + 1)]
    dr, di = dc[-1], 0
    for j in range(n - 2, -1, -1):
        dr, di = dr * X - di * Y + (dc[j] << (k * (n - 1 - j))), dr * Y + di * X
    center_re, center_im = Fraction(X, 1 << k), Fraction(Y, 1 << k)
    s2 = sr * sr + si * si
    if s2 == 0:
        return ComplexBall(center_re, center_im, Fraction(0), bits)
    d2 = dr * dr + di * di
    if d2 == 0:
        return ComplexBall(center_re, center_im, Fraction(1 << 30), bits)
    # |p/p'| = |S| / (|D| 2^k)
    r2 = Fraction(n * n * s2, d2 << (2 * k))
    return ComplexBall(center_re, center_im, _sqrt_up(r2, bits), bits)


def _pairwise_disjoint(balls: list[ComplexBall]) -> bool:
    order = sorted(range(len(balls)), key=lambda i: balls[i].re - balls[i].rad)
    active: list[int] = []
    for i in order:
        b = balls[i]
        lo = b.re - b.rad
        active = [j for j in active if balls[j].re + balls[j].rad >= lo]
        for j in active:
            if not b.disjoint(balls[j]):
                return False
        active.append(i)
    return True


@lru_cache(maxsize=4096)
def _isolate_cached(coeffs: tuple[int, ...], bits: int) -> tuple[ComplexBall, ...]:
    coeffs = list(coeffs)
    n = len(coeffs) - 1
    if n == 0:
        return ()
    if n == 1:
        root = Fraction(-coeffs[0], coeffs[1])
        return (ComplexBall(root, Fraction(0), Fraction(0), bits),)
    prec = max(bits, 64) + 32
    zs = _initial_points(coeffs, n, prec)
    work = prec
    while work <= MAX_BITS:
        zs = _aberth(coeffs, zs, work, max_iter=100 + 4 * n)
        balls = [_exact_inclusion(coeffs, z, max(bits, work - 32)) for z in zs]
        if _pairwise_disjoint(balls):
            return tuple(balls)
        work *= 2
    raise PrecisionExhausted(f"could not certify roots of a degree {n} polynomial")


def isolate_roots(p: UniPoly, precision_bits: int = DEFAULT_BITS) -> list[ComplexBall]:
    """Certified, pairwise disjoint isolating discs for the distinct roots of p."""
    if p.is_zero():
        raise BadInput("isolate_roots of the zero polynomial")
    if precision_bits < 64:
        raise BadInput("precision_bits must be >= 64")
    sq = squarefree_part(p)
    coeffs = tuple(int(c) for c in sq.to_fmpz().coeffs())
    return list(_isolate_cached(coeffs, precision_bits))


# -- algebraic numbers ------------------------------------------------------


class Infinity:
    """The point at infinity of P^1."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "inf"

    __str__ = __repr__

    def __eq__(self, other):
        return isinstance(other, Infinity)

    def __hash__(self):
        return hash("inf")

    def to_json(self):
        return "inf"


INF = Infinity()


@lru_cache(maxsize=4096)
def _irreducible_factors(coeffs: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    _, facs = fmpz_poly(list(coeffs)).factor()
    out = []
    for f, _e in facs:
        c = [int(x) for x in f.coeffs()]
        if c[-1] < 0:
            c = [-x for x in c]
        out.append(tuple(c))
    return tuple(sorted(out, key=lambda c: (len(c), c)))


class AlgebraicNumber:
    """A complex algebraic number: irreducible primitive minimal polynomial plus
    a certified ball isolating exactly one of its roots."""

    __slots__ = ("minpoly", "ball")

    def __init__(self, minpoly: UniPoly, ball: ComplexBall):
        self.minpoly = minpoly
        self.ball = ball

    # constructors
    @classmethod
    def rational(cls, q, bits: int = DEFAULT_BITS) -> AlgebraicNumber:
        q = Fraction(q)
        mp = UniPoly([-q.numerator, q.denominator], "x")
        return cls(mp, ComplexBall(q, Fraction(0), Fraction(0), bits))

    @classmethod
    def roots_of(cls, p: UniPoly, bits: int = DEFAULT_BITS) -> list[AlgebraicNumber]:
        """All distinct roots of p, grouped by irreducible factor."""
        if p.is_zero():
            raise BadInput("the zero polynomial has no isolated roots")
        out = []
        sq = squarefree_part(p.rename("x"))
        for fc in _irreducible_factors(tuple(int(c) for c in sq.to_fmpz().coeffs())):
            f = UniPoly(list(fc), "x")
            for b in _isolate_cached(fc, bits):
                out.append(cls(f, b))
        return out

    @classmethod
    def select_root(cls, p: UniPoly, enclosure: Callable[[int], ComplexBall],
                    bits: int = DEFAULT_BITS) -> AlgebraicNumber:
        """The root of p lying in enclosure(bits); the caller guarantees one does."""
        sq = squarefree_part(p.rename("x"))
        facs = _irreducible_factors(tuple(int(c) for c in sq.to_fmpz().coeffs()))
        b = bits
        while b <= MAX_BITS:
            enc = enclosure(b)
            hits = []
            for fc in facs:
                for ball in _isolate_cached(fc, b):
                    if ball.overlaps(enc):
                        hits.append((fc, ball))
            if len(hits) == 1:
                fc, ball = hits[0]
                return cls(UniPoly(list(fc), "x"), ball)
            if not hits:
                raise BadInput("no root of the polynomial lies in the enclosure")
            b *= 2
        raise PrecisionExhausted("could not separate the requested root")

    # inspection
    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def is_rational(self) -> bool:
        return self.minpoly.degree == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise BadInput("not a rational number")
        c = self.minpoly.coeffs
        return -c[0] / c[1]

    def is_zero(self) -> bool:
        return self.is_rational() and self.minpoly.coeffs[0] == 0

    def approx(self) -> complex:
        return self.ball.approx()

    def refined(self, bits: int) -> AlgebraicNumber:
        """Same number with its ball re-isolated at ``bits`` precision."""
        if self.is_rational():
            return AlgebraicNumber.rational(self.as_fraction(), bits)
        fc = tuple(self.minpoly.integer_coeffs())
        b = bits
        while b <= MAX_BITS:
            hits = [ball for ball in _isolate_cached(fc, b) if ball.overlaps(self.ball)]
            if len(hits) == 1:
                return AlgebraicNumber(self.minpoly, hits[0])
            b *= 2
        raise PrecisionExhausted("refinement failed")

    def enclosure(self, bits: int) -> ComplexBall:
        return self.ball if self.ball.bits >= bits else self.refined(bits).ball

    def sort_key(self):
        return (self.minpoly.degree, tuple(self.minpoly.coeffs), self.ball.re, self.ball.im)

    def __repr__(self):
        z = self.approx()
        return f"AlgebraicNumber({self.minpoly.to_text()!r} ~ {z.real:.6g}{z.imag:+.6g}j)"

    def __eq__(self, other):
        if isinstance(other, (AlgebraicNumber, Infinity)):
            return algnum_equal(self, other)
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.as_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.minpoly.coeffs))

    def to_json(self) -> dict:
        return {"minpoly": self.minpoly.to_text(), "ball": self.ball.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> AlgebraicNumber:
        return cls(UniPoly.parse(d["minpoly"], "x"), ComplexBall.from_json(d["ball"]))

    # arithmetic through resultants
    def _binary(self, other, op: str) -> AlgebraicNumber:
        other = as_algebraic(other, self.ball.bits)
        bits = max(self.ball.bits, other.ball.bits)
        if self.is_rational() and other.is_rational():
            a, b = self.as_fraction(), other.as_fraction()
            val = {"+": a + b, "*": a * b}[op]
            return AlgebraicNumber.rational(val, bits)
        if op == "+":
            if other.is_rational():
                return self._shift(other.as_fraction())
            if self.is_rational():
                return other._shift(self.as_fraction())
        if op == "*":
            if other.is_rational():
                return self._scale(other.as_fraction())
            if self.is_rational():
                return other._scale(self.as_fraction())
        x, y = MPoly.gens(("x", "y"))
        p = _to_mpoly(self.minpoly, y)
        q = other.minpoly
        if op == "+":
            qq = _compose_linear(q, x, y, subtract=True)
        else:
            qq = _homogenize(q, x, y)
        R = resultant(p, qq, "y")

        def enc(b):
            e1, e2 = self.enclosure(b), other.enclosure(b)
            return e1 + e2 if op == "+" else e1 * e2

        return AlgebraicNumber.select_root(R, enc, bits)

    def _shift(self, c: Fraction) -> AlgebraicNumber:
        x = UniPoly.gen("x")
        mp = self.minpoly(x - c).canonical()
        return AlgebraicNumber(mp, self.ball + c)

    def _scale(self, c: Fraction) -> AlgebraicNumber:
        if c == 0:
            return AlgebraicNumber.rational(0, self.ball.bits)
        x = UniPoly.gen("x")
        mp = self.minpoly(x * (1 / c)).canonical()
        return AlgebraicNumber(mp, self.ball * c)

    def __add__(self, other):
        return self._binary(other, "+")

    __radd__ = __add__

    def __neg__(self):
        return self._scale(Fraction(-1))

    def __sub__(self, other):
        return self + (-as_algebraic(other, self.ball.bits))

    def __rsub__(self, other):
        return as_algebraic(other, self.ball.bits) + (-self)

    def __mul__(self, other):
        return self._binary(other, "*")

    __rmul__ = __mul__

    def inverse(self) -> AlgebraicNumber:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return AlgebraicNumber.rational(1 / self.as_fraction(), self.ball.bits)
        mp = self.minpoly.reverse().canonical()
        ball = self.ball
        b = ball.bits
        while ball.abs_lower() <= 0:
            b *= 2
            ball = self.refined(b).ball
        return AlgebraicNumber(mp, ball.inverse())._recertify()

    def __truediv__(self, other):
        return self * as_algebraic(other, self.ball.bits).inverse()

    def __rtruediv__(self, other):
        return as_algebraic(other, self.ball.bits) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = AlgebraicNumber.rational(1, self.ball.bits)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def sqrt(self) -> AlgebraicNumber:
        """A square root (the one continuing sqrt of the ball center)."""
        if self.is_zero():
            return self
        x = UniPoly.gen("x")
        R = self.minpoly(x * x)
        return AlgebraicNumber.select_root(R, lambda b: self.enclosure(b).sqrt(), self.ball.bits)

    def _recertify(self) -> AlgebraicNumber:
        """Replace a propagated ball by a fresh isolating ball of the minimal polynomial."""
        return AlgebraicNumber.select_root(self.minpoly, lambda b: self.ball, self.ball.bits)


def _to_mpoly(p: UniPoly, var: MPoly) -> MPoly:
    out = MPoly.constant(0, var.vars)
    for k, c in enumerate(p.coeffs):
        if c:
            out = out + c * var**k
    return out


def _compose_linear(q: UniPoly, x: MPoly, y: MPoly, subtract: bool) -> MPoly:
    return _to_mpoly(q, x - y) if subtract else _to_mpoly(q, x + y)


def _homogenize(q: UniPoly, x: MPoly, y: MPoly) -> MPoly:
    """y^m q(x/y)."""
    m = q.degree
    out = MPoly.constant(0, x.vars)
    for k, c in enumerate(q.coeffs):
        if c:
            out = out + c * x**k * y ** (m - k)
    return out


PointP1 = Union[AlgebraicNumber, Infinity]


def as_algebraic(x, bits: int = DEFAULT_BITS) -> AlgebraicNumber:
    if isinstance(x, AlgebraicNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return AlgebraicNumber.rational(x, bits)
    raise BadInput(f"cannot interpret {x!r} as an algebraic number")


def as_point(x, bits: int = DEFAULT_BITS) -> PointP1:
    if isinstance(x, Infinity):
        return x
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "oo", "infinity"):
            return INF
        return AlgebraicNumber.rational(Fraction(x.strip()), bits)
    return as_algebraic(x, bits)


def root_of_unity(n: int, k: int = 1, bits: int = DEFAULT_BITS) -> AlgebraicNumber:
    """exp(2 pi i k / n) with its cyclotomic minimal polynomial."""
    x = UniPoly.gen("x")
    with gmpy2.context(gmpy2.get_context(), precision=bits + 32):
        ang = 2 * gmpy2.const_pi() * k / n
        z = mpc(gmpy2.cos(ang), gmpy2.sin(ang))
        re, im = _mpfr_frac(z.real), _mpfr_frac(z.imag)
    tiny = Fraction(1, 1 << bits)
    return AlgebraicNumber.select_root(x**n - 1, lambda b: ComplexBall(re, im, tiny, bits), bits)


def imag_unit(bits: int = DEFAULT_BITS) -> AlgebraicNumber:
    return root_of_unity(4, 1, bits)


# -- equality and intersection ---------------------------------------------


def _locate(g: UniPoly, a: AlgebraicNumber) -> int | None:
    """Index of the root of g equal to a in g's isolation, or None if a is not a root."""
    coeffs = tuple(g.canonical().integer_coeffs())
    bits = max(a.ball.bits, DEFAULT_BITS)
    ball = a.ball
    while bits <= MAX_BITS:
        balls = _isolate_cached(coeffs, bits)
        inside = [i for i, b in enumerate(balls) if ball.contains(b)]
        undecided = [i for i, b in enumerate(balls) if not ball.contains(b) and not ball.disjoint(b)]
        if not undecided:
            if len(inside) > 1:
                raise PrecisionExhausted("ball of an algebraic number is not isolating")
            return inside[0] if inside else None
        bits *= 2
        if ball.rad > 0 and bits > 4 * a.ball.bits:
            ball = a.refined(bits).ball
    raise PrecisionExhausted("could not decide root membership")


def algnum_equal(alpha: PointP1, beta: PointP1) -> bool:
    """Exact equality of two points of P^1 over the algebraic numbers."""
    if isinstance(alpha, Infinity) or isinstance(beta, Infinity):
        return isinstance(alpha, Infinity) and isinstance(beta, Infinity)
    if alpha is beta:
        return True
    if alpha.ball.disjoint(beta.ball):
        return False
    g = poly_gcd(alpha.minpoly, beta.minpoly)
    if g.degree < 1:
        return False
    if g.degree == 1:
        return True
    ia = _locate(g, alpha)
    if ia is None:
        return False
    return ia == _locate(g, beta)


def point_set_intersect(S: list[PointP1], T: list[PointP1]) -> list[PointP1]:
    """Points of S equal (exactly) to some point of T, in S's order."""
    out = []
    for s in S:
        for t in T:
            if algnum_equal(s, t):
                out.append(s)
                break
    return out


def point_sort_key(p: PointP1):
    if isinstance(p, Infinity):
        return (1 << 30,)
    return p.sort_key()


def point_to_json(p: PointP1):
    return p.to_json()


def point_from_json(d) -> PointP1:
    if d == "inf":
        return INF
    return AlgebraicNumber.from_json(d)


def _arf_frac(x) -> Fraction:
    m, e = x.man_exp()
    m, e = int(m), int(e)
    return Fraction(m * (1 << e)) if e >= 0 else Fraction(m, 1 << -e)


def _to_acb(b: ComplexBall):
    r = fmpq(b.rad.numerator, b.rad.denominator)
    return acb(arb(fmpq(b.re.numerator, b.re.denominator), r),
               arb(fmpq(b.im.numerator, b.im.denominator), r))


def _from_acb(z, bits: int) -> ComplexBall:
    re, im = z.real, z.imag
    rad = _arf_frac(re.rad()) + _arf_frac(im.rad())
    return ComplexBall(_arf_frac(re.mid()), _arf_frac(im.mid()), _round_up(rad, bits), bits)


def eval_poly_ball(p: MPoly | UniPoly, values: dict[str, ComplexBall], bits: int) -> ComplexBall:
    """Ball enclosure of p at ball-valued arguments (arb/acb interval arithmetic)."""
    old = flint.ctx.prec
    flint.ctx.prec = bits + 16
    try:
        if isinstance(p, UniPoly):
            z = _to_acb(values[p.var])
            acc = acb(0)
            for c in reversed(p.coeffs):
                acc = acc * z + fmpq(c.numerator, c.denominator)
            return _from_acb(acc, bits)
        zs = [_to_acb(values[v]) if v in values else None for v in p.vars]
        powers: dict[tuple[int, int], object] = {}

        def pw(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = zs[i] ** k
            return powers[key]

        acc = acb(0)
        for mono, c in p.terms().items():
            t = acb(fmpq(c.numerator, c.denominator))
            for i, k in enumerate(mono):
                if k:
                    if zs[i] is None:
                        raise BadInput(f"no value for {p.vars[i]}")
                    t = t * pw(i, k)
            acc = acc + t
        return _from_acb(acc, bits)
    finally:
        flint.ctx.prec = old
