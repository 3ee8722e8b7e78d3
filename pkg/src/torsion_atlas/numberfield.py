"""Polynomials over a number field K = Q[u]/(m(u)).

Common divisors in K[v] are found by a multi-modular Euclid (images in
F_p[u]/(m) followed by CRT and rational reconstruction) and then proved by
exact division over K.  Only the final division matters for correctness; the
modular part just proposes a candidate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from flint import fmpq, fmpq_poly, fmpz, nmod_poly

from .errors import BadInput, BudgetExceeded
from .exactmath import MPoly, UniPoly

KPoly = list  # coefficients in v, each an fmpq_poly in u reduced mod m


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _primes_below(start: int):
    c = start - 1 if start % 2 == 0 else start
    while c > 3:
        if fmpz(c).is_prime():
            yield c
        c -= 2


def rational_reconstruct(a: int, M: int) -> Fraction | None:
    """n/d with |n|, d <= sqrt(M/2) and n = a d mod M, if one exists."""
    bound = isqrt(M // 2)
    r0, r1 = M, a % M
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    f = Fraction(r1, s1)
    return f if (f.numerator * pow(f.denominator, -1, M) - a) % M == 0 else None


@dataclass
class NumberField:
    modulus: UniPoly  # irreducible over Q, variable u

    def __post_init__(self):
        if self.modulus.degree < 1:
            raise BadInput("number field modulus must have positive degree")
        self._m = self.modulus._f

    @property
    def degree(self) -> int:
        return self.modulus.degree

    @property
    def var(self) -> str:
        return self.modulus.var

    def reduce(self, p: fmpq_poly) -> fmpq_poly:
        return p % self._m

    def kpoly(self, P: MPoly, var: str) -> KPoly:
        """P in (var, u) as a list of K-coefficients in var."""
        out: list = []
        for k, c in P.coeffs_in(var).items():
            while len(out) <= k:
                out.append(fmpq_poly(0))
            cu = c.to_uni(self.var) if c.free_vars() else UniPoly([c.constant_value()], self.var)
            out[k] = self.reduce(cu._f)
        return _trim(out)

    def to_mpoly(self, h: KPoly, var: str) -> MPoly:
        vars_ = (var, self.var)
        terms = {}
        for k, c in enumerate(h):
            for j, q in enumerate(c.coeffs()):
                if q != 0:
                    terms[(k, j)] = Fraction(int(q.p), int(q.q))
        return MPoly(terms, vars_)

    def rem_monic(self, A: KPoly, h: KPoly) -> KPoly:
        """Remainder of A by h, which must be monic in v."""
        if not h or h[-1] != 1:
            raise BadInput("divisor must be monic")
        A = [c for c in A]
        dh = len(h) - 1
        while len(A) - 1 >= dh and A:
            q = A[-1]
            s = len(A) - 1 - dh
            for i in range(dh):
                A[s + i] = self.reduce(A[s + i] - q * h[i])
            A.pop()
            _trim(A)
        return A

    def divides(self, h: KPoly, A: KPoly) -> bool:
        return not self.rem_monic(A, h)

    # -- modular images ---------------------------------------------------
    @staticmethod
    def _to_nmod(c: fmpq_poly, p: int) -> nmod_poly | None:
        den = int(c.denom())
        if den % p == 0:
            return None
        inv = pow(den, -1, p)
        return nmod_poly([int(x) * inv % p for x in c.numer().coeffs()], p)

    def _gcd_mod(self, A: KPoly, B: KPoly, p: int):
        """Monic gcd image in (F_p[u]/m)[v], or None for an unusable prime."""
        mp = self._to_nmod(self._m, p)
        if mp is None or mp.degree() != self.degree:
            return None
        imgs = []
        for P in (A, B):
            row = []
            for c in P:
                x = self._to_nmod(c, p)
                if x is None:
                    return None
                row.append(x % mp)
            imgs.append(_trim(row))
        a, b = imgs
        if len(a) != len(A) or len(b) != len(B):
            return None

        def inv(x):
            g, s, _ = x.xgcd(mp)
            if g.degree() != 0:
                return None
            return s * pow(int(g.coeffs()[0]), -1, p) % mp

        while b:
            il = inv(b[-1])
            if il is None:
                return None
            b = [c * il % mp for c in b]
            db = len(b) - 1
            while a and len(a) - 1 >= db:
                q = a[-1]
                s = len(a) - 1 - db
                for i in range(db):
                    a[s + i] = (a[s + i] - q * b[i]) % mp
                a.pop()
                _trim(a)
            a, b = b, a
        return a

    def common_divisor(self, A: KPoly, B: KPoly, max_primes: int = 4096,
                       prime_start: int = 1 << 62) -> KPoly:
        """Monic gcd of A and B in K[v], proved by exact division.

        Raises BudgetExceeded when reconstruction has not stabilised within
        max_primes primes.
        """
        if not A or not B:
            raise BadInput("common_divisor of a zero polynomial")
        best_deg = None
        images: list[tuple[int, list]] = []
        used = 0
        next_try = 4
        for p in _primes_below(prime_start):
            used += 1
            if used > max_primes:
                break
            g = self._gcd_mod(A, B, p)
            if g is None:
                continue
            d = len(g) - 1
            if best_deg is None or d < best_deg:
                best_deg, images = d, []
            if d > best_deg:
                continue
            images.append((p, g))
            if d == 0 and len(images) >= 3:
                return [fmpq_poly(1)]
            if len(images) >= next_try:
                h = self._reconstruct(images)
                if h is not None and self.divides(h, A) and self.divides(h, B):
                    return h
                next_try *= 2
        raise BudgetExceeded("modular gcd over the number field did not stabilise")

    def _reconstruct(self, images) -> KPoly | None:
        M = 1
        for p, _ in images:
            M *= p
        deg_v = len(images[0][1])
        out = []
        for k in range(deg_v):
            coeffs = []
            for j in range(self.degree):
                r, mod = 0, 1
                for p, g in images:
                    cs = g[k].coeffs()
                    x = int(cs[j]) if j < len(cs) else 0
                    # incremental CRT
                    t = (x - r) * pow(mod, -1, p) % p
                    r += mod * t
                    mod *= p
                q = rational_reconstruct(r, M)
                if q is None:
                    return None
                coeffs.append(fmpq(q.numerator, q.denominator))
            out.append(self.reduce(fmpq_poly(coeffs)))
        if out[-1] != 1:
            return None
        return out
