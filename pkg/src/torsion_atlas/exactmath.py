"""Exact polynomial arithmetic over Q.

Univariate polynomials are backed by ``flint.fmpq_poly`` and multivariate ones
by ``flint.fmpq_mpoly``; both wrappers carry their variable names explicitly so
that a polynomial never silently changes meaning.  Rationals on the public
surface are ``fractions.Fraction``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from flint import fmpq, fmpq_mpoly, fmpq_mpoly_ctx, fmpq_poly, fmpz_poly

from .errors import BadInput, VerificationFailure

Rational = Fraction

__all__ = [
    "Rational",
    "UniPoly",
    "MPoly",
    "BiPoly",
    "FactorList",
    "DivRem",
    "parse_poly",
    "poly_gcd",
    "resultant",
    "discriminant",
    "squarefree_factor",
    "divrem_in_var",
    "strip_trivial_factors",
    "reciprocal_reduce",
    "jordan_totient",
    "totient_coincidence_scan",
]


def _q(c) -> fmpq:
    if isinstance(c, fmpq):
        return c
    if isinstance(c, Fraction):
        return fmpq(c.numerator, c.denominator)
    if isinstance(c, int):
        return fmpq(c)
    raise TypeError(f"not a rational: {c!r}")


def _frac(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _fmt_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _fmt_terms(terms, names) -> str:
    """terms: iterable of (exponent tuple, Fraction), already sorted."""
    parts = []
    for exps, c in terms:
        mono = []
        for name, e in zip(names, exps):
            if e == 1:
                mono.append(name)
            elif e > 1:
                mono.append(f"{name}^{e}")
        if not mono:
            s = _fmt_coeff(c)
        elif c == 1:
            s = "*".join(mono)
        elif c == -1:
            s = "-" + "*".join(mono)
        else:
            s = _fmt_coeff(c) + "*" + "*".join(mono)
        if parts and not s.startswith("-"):
            s = "+" + s
        parts.append(s)
    return "".join(parts) if parts else "0"


class UniPoly:
    """Dense univariate polynomial over Q in a named variable."""

    __slots__ = ("var", "_f")

    def __init__(self, coeffs=(), var: str = "x"):
        self.var = var
        if isinstance(coeffs, fmpq_poly):
            self._f = coeffs
        elif isinstance(coeffs, fmpz_poly):
            self._f = fmpq_poly(coeffs)
        else:
            self._f = fmpq_poly([_q(c) for c in coeffs])

    @classmethod
    def gen(cls, var: str = "x") -> UniPoly:
        return cls([0, 1], var)

    @classmethod
    def constant(cls, c, var: str = "x") -> UniPoly:
        return cls([c], var)

    @classmethod
    def from_roots(cls, roots, var: str = "x") -> UniPoly:
        p = fmpq_poly([1])
        for r in roots:
            p *= fmpq_poly([-_q(r), 1])
        return cls(p, var)

    # -- inspection -------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(_frac(c) for c in self._f.coeffs())

    @property
    def degree(self) -> int:
        return int(self._f.degree())

    @property
    def lc(self) -> Fraction:
        return _frac(self._f.leading_coefficient()) if not self.is_zero() else Fraction(0)

    def is_zero(self) -> bool:
        return self._f.is_zero()

    def is_constant(self) -> bool:
        return self._f.degree() <= 0

    def coeff(self, k: int) -> Fraction:
        return _frac(self._f[k])

    def is_palindromic(self) -> bool:
        c = self.coeffs
        return c == c[::-1]

    def integer_coeffs(self) -> list[int]:
        if self._f.denom() != 1:
            raise BadInput("polynomial has non-integer coefficients")
        return [int(c) for c in self._f.numer().coeffs()]

    def to_fmpz(self) -> fmpz_poly:
        """Primitive integer polynomial with positive leading coefficient."""
        return self.primitive()[1]._f.numer()

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, UniPoly):
            if other.var != self.var and not (other.is_constant() or self.is_constant()):
                raise BadInput(f"variable mismatch: {self.var} vs {other.var}")
            return other._f
        if isinstance(other, (int, Fraction, fmpq)):
            return fmpq_poly([_q(other)])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else UniPoly(self._f + o, self.var)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else UniPoly(self._f - o, self.var)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else UniPoly(o - self._f, self.var)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else UniPoly(self._f * o, self.var)

    __rmul__ = __mul__

    def __neg__(self):
        return UniPoly(-self._f, self.var)

    def __pow__(self, k: int):
        return UniPoly(self._f**k, self.var)

    def __divmod__(self, other):
        o = self._coerce(other)
        q, r = divmod(self._f, o)
        return UniPoly(q, self.var), UniPoly(r, self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exquo(self, other) -> UniPoly:
        q, r = divmod(self, other)
        if not r.is_zero():
            raise VerificationFailure(f"inexact division by {other}")
        return q

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self._f == other._f and (self.var == other.var or self.is_constant())
        if isinstance(other, (int, Fraction)):
            return self._f == fmpq_poly([_q(other)])
        return NotImplemented

    def __hash__(self):
        return hash((self.var, tuple(self.coeffs)))

    def __call__(self, x):
        if isinstance(x, UniPoly):
            return UniPoly(self._f(x._f), x.var)
        if isinstance(x, (int, Fraction, fmpq)):
            return _frac(self._f(_q(x)))
        # generic Horner, e.g. for ball or complex arguments
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- transformations --------------------------------------------------
    def derivative(self) -> UniPoly:
        return UniPoly(self._f.derivative(), self.var)

    def monic(self) -> UniPoly:
        if self.is_zero():
            return self
        return UniPoly(self._f / self._f.leading_coefficient(), self.var)

    def primitive(self) -> tuple[Fraction, UniPoly]:
        """Split into (unit, primitive integer polynomial with positive lc)."""
        if self.is_zero():
            return Fraction(0), self
        num = self._f.numer()
        content = num.content()
        if num.leading_coefficient() < 0:
            content = -content
        prim = fmpq_poly(num) / fmpq(content)
        unit = Fraction(int(content), int(self._f.denom()))
        return unit, UniPoly(prim, self.var)

    def canonical(self) -> UniPoly:
        return self.primitive()[1]

    def reverse(self) -> UniPoly:
        return UniPoly(list(reversed(self.coeffs)), self.var)

    def deflation(self) -> int:
        """Largest k with self = q(var^k)."""
        if self.degree <= 0:
            return 0
        from math import gcd

        k = 0
        for i, c in enumerate(self.coeffs):
            if c and i:
                k = gcd(k, i)
        return k

    def deflate(self, k: int, var: str | None = None) -> UniPoly:
        c = self.coeffs
        if any(c[i] for i in range(len(c)) if i % k):
            raise BadInput(f"not a polynomial in {self.var}^{k}")
        return UniPoly(c[::k], var or self.var)

    def inflate(self, k: int, var: str | None = None) -> UniPoly:
        out = [Fraction(0)] * (k * max(self.degree, 0) + 1)
        for i, c in enumerate(self.coeffs):
            out[k * i] = c
        return UniPoly(out, var or self.var)

    def rename(self, var: str) -> UniPoly:
        return UniPoly(self._f, var)

    # -- text -------------------------------------------------------------
    def to_text(self) -> str:
        terms = [((i,), c) for i, c in reversed(list(enumerate(self.coeffs))) if c]
        return _fmt_terms(terms, (self.var,))

    __str__ = to_text

    def __repr__(self):
        return f"UniPoly({self.to_text()!r}, var={self.var!r})"

    @classmethod
    def parse(cls, text: str, var: str = "x") -> UniPoly:
        return parse_poly(text, (var,))


@lru_cache(maxsize=None)
def _ctx(names: tuple[str, ...]):
    return fmpq_mpoly_ctx.get(names, "lex")


class MPoly:
    """Sparse polynomial over Q in a fixed, ordered tuple of variables.

    The variable order is part of the value and is never inferred; it fixes
    the term order used by the printer.  Two-variable instances are the
    ``BiPoly`` of the data model.
    """

    __slots__ = ("vars", "_f")

    def __init__(self, terms, variables):
        self.vars = tuple(variables)
        ctx = _ctx(self.vars)
        if isinstance(terms, fmpq_mpoly):
            if terms.context() is not ctx:
                raise BadInput("flint context does not match variables")
            self._f = terms
        else:
            self._f = ctx.from_dict({tuple(k): _q(v) for k, v in dict(terms).items() if v})

    @classmethod
    def gens(cls, variables) -> tuple[MPoly, ...]:
        variables = tuple(variables)
        return tuple(MPoly(g, variables) for g in _ctx(variables).gens())

    @classmethod
    def constant(cls, c, variables) -> MPoly:
        variables = tuple(variables)
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def from_uni(cls, p: UniPoly, variables) -> MPoly:
        variables = tuple(variables)
        i = variables.index(p.var)
        terms = {}
        for k, c in enumerate(p.coeffs):
            if c:
                e = [0] * len(variables)
                e[i] = k
                terms[tuple(e)] = c
        return cls(terms, variables)

    # -- inspection -------------------------------------------------------
    def _idx(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise BadInput(f"{var!r} is not among the variables {self.vars}") from None

    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return {tuple(m): _frac(c) for m, c in zip(self._f.monoms(), self._f.coeffs())}

    def is_zero(self) -> bool:
        return self._f.is_zero()

    def degree(self, var: str) -> int:
        if self.is_zero():
            return -1
        return int(self._f.degrees()[self._idx(var)])

    def coeffs_in(self, var: str) -> dict[int, MPoly]:
        """Coefficients with respect to ``var`` (same variable tuple, var-free)."""
        i = self._idx(var)
        out: dict[int, dict] = {}
        for m, c in zip(self._f.monoms(), self._f.coeffs()):
            m = tuple(m)
            out.setdefault(m[i], {})[m[:i] + (0,) + m[i + 1:]] = c
        ctx = _ctx(self.vars)
        return {k: MPoly(ctx.from_dict(v), self.vars) for k, v in out.items()}

    def lc_in(self, var: str) -> MPoly:
        if self.is_zero():
            return self
        return self.coeffs_in(var)[self.degree(var)]

    def free_vars(self) -> tuple[str, ...]:
        if self.is_zero():
            return ()
        degs = self._f.degrees()
        return tuple(v for v, d in zip(self.vars, degs) if d > 0)

    def to_uni(self, var: str | None = None) -> UniPoly:
        used = self.free_vars()
        if var is None:
            if len(used) > 1:
                raise BadInput(f"polynomial involves {used}, not univariate")
            var = used[0] if used else self.vars[0]
        elif any(v != var for v in used):
            raise BadInput(f"polynomial involves {used}, not only {var}")
        i = self._idx(var)
        out = [Fraction(0)] * (max(self.degree(var), 0) + 1)
        for m, c in self.terms().items():
            out[m[i]] = c
        return UniPoly(out, var)

    def constant_value(self) -> Fraction:
        if self.free_vars():
            raise BadInput("not a constant")
        return self.terms().get((0,) * len(self.vars), Fraction(0))

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.vars != self.vars:
                raise BadInput(f"variable mismatch: {self.vars} vs {other.vars}")
            return other._f
        if isinstance(other, (int, Fraction, fmpq)):
            return _ctx(self.vars).constant(_q(other))
        if isinstance(other, UniPoly):
            return MPoly.from_uni(other, self.vars)._f
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MPoly(self._f + o, self.vars)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MPoly(self._f - o, self.vars)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MPoly(o - self._f, self.vars)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MPoly(self._f * o, self.vars)

    __rmul__ = __mul__

    def __neg__(self):
        return MPoly(-self._f, self.vars)

    def __pow__(self, k: int):
        return MPoly(self._f**k, self.vars)

    def exquo(self, other) -> MPoly:
        o = self._coerce(other)
        q, r = divmod(self._f, o)
        if not r.is_zero():
            raise VerificationFailure("inexact multivariate division")
        return MPoly(q, self.vars)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.vars == other.vars and self._f == other._f
        if isinstance(other, (int, Fraction)):
            return self._f == _ctx(self.vars).constant(_q(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, tuple(sorted(self.terms().items()))))

    # -- transformations --------------------------------------------------
    def subs(self, var: str, value) -> MPoly:
        """Substitute a rational, or a polynomial in the same variables, for var."""
        if isinstance(value, MPoly):
            ctx = _ctx(self.vars)
            args = [value._f if v == var else g for v, g in zip(self.vars, ctx.gens())]
            return MPoly(self._f.compose(*args, ctx=ctx), self.vars)
        return MPoly(self._f.subs({var: _q(value)}), self.vars)

    def derivative(self, var: str) -> MPoly:
        return MPoly(self._f.derivative(var), self.vars)

    def extend(self, variables) -> MPoly:
        """Re-embed into a variable tuple containing all current variables."""
        variables = tuple(variables)
        pos = [variables.index(v) for v in self.vars]
        terms = {}
        for m, c in self.terms().items():
            e = [0] * len(variables)
            for k, p in zip(m, pos):
                e[p] = k
            terms[tuple(e)] = c
        return MPoly(terms, variables)

    def restrict(self, variables) -> MPoly:
        """Drop variables that do not occur."""
        variables = tuple(variables)
        missing = set(self.free_vars()) - set(variables)
        if missing:
            raise BadInput(f"cannot drop variables in use: {sorted(missing)}")
        idx = [self.vars.index(v) for v in variables]
        return MPoly({tuple(m[i] for i in idx): c for m, c in self.terms().items()}, variables)

    def rename(self, mapping: dict[str, str]) -> MPoly:
        new = tuple(mapping.get(v, v) for v in self.vars)
        return MPoly(self.terms(), new)

    def primitive(self) -> tuple[Fraction, MPoly]:
        """(unit, primitive integer polynomial with positive leading term)."""
        if self.is_zero():
            return Fraction(0), self
        from math import gcd, lcm

        terms = self.terms()
        den = lcm(*(c.denominator for c in terms.values()))
        num = gcd(*(int(c * den) for c in terms.values()))
        lead = terms[max(terms)]
        unit = Fraction(num, den) * (1 if lead > 0 else -1)
        return unit, MPoly({m: c / unit for m, c in terms.items()}, self.vars)

    def canonical(self) -> MPoly:
        return self.primitive()[1]

    def content_in(self, var: str) -> MPoly:
        """Gcd of the coefficients with respect to var (a var-free polynomial)."""
        g = None
        for c in self.coeffs_in(var).values():
            g = c._f if g is None else g.gcd(c._f)
        return MPoly(g, self.vars) if g is not None else self

    # -- text -------------------------------------------------------------
    def to_text(self) -> str:
        terms = sorted(self.terms().items(), reverse=True)
        return _fmt_terms(terms, self.vars)

    __str__ = to_text

    def __repr__(self):
        return f"MPoly({self.to_text()!r}, vars={self.vars!r})"

    @classmethod
    def parse(cls, text: str, variables) -> MPoly:
        p = parse_poly(text, tuple(variables))
        return p if isinstance(p, MPoly) else MPoly.from_uni(p, variables)


BiPoly = MPoly


# -- text format ----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def parse_poly(text: str, variables) -> UniPoly | MPoly:
    """Parse the sparse text format, e.g. ``3/4*x^2*a-x+7``.

    ``variables`` fixes the variable tuple; a single variable yields a
    ``UniPoly``.
    """
    variables = tuple(variables)
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        pos = m.end()
        num, ident, sym = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif ident is not None:
            tokens.append(("var", ident))
        else:
            tokens.append(("sym", sym))
    if not tokens:
        raise BadInput("empty polynomial text")

    terms: dict[tuple[int, ...], Fraction] = {}
    i = 0

    def expect_sym(ch):
        nonlocal i
        if i < len(tokens) and tokens[i] == ("sym", ch):
            i += 1
            return True
        return False

    first = True
    while i < len(tokens):
        sign = 1
        if expect_sym("+"):
            pass
        elif expect_sym("-"):
            sign = -1
        elif not first:
            raise BadInput(f"expected '+' or '-' in {text!r}")
        first = False
        coeff = Fraction(sign)
        exps = [0] * len(variables)
        need_factor = True
        while need_factor:
            if i >= len(tokens):
                raise BadInput(f"dangling operator in {text!r}")
            kind, val = tokens[i]
            i += 1
            if kind == "num":
                c = Fraction(val)
                if expect_sym("/"):
                    if i >= len(tokens) or tokens[i][0] != "num":
                        raise BadInput(f"bad rational in {text!r}")
                    den = tokens[i][1]
                    i += 1
                    if den == 0:
                        raise BadInput("zero denominator")
                    c /= den
                coeff *= c
            elif kind == "var":
                if val not in variables:
                    raise BadInput(f"unknown variable {val!r}; expected one of {variables}")
                e = 1
                if expect_sym("^"):
                    if i >= len(tokens) or tokens[i][0] != "num":
                        raise BadInput(f"bad exponent in {text!r}")
                    e = tokens[i][1]
                    i += 1
                exps[variables.index(val)] += e
            else:
                raise BadInput(f"unexpected {val!r} in {text!r}")
            need_factor = expect_sym("*")
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    if len(variables) == 1:
        deg = max((k[0] for k, c in terms.items() if c), default=0)
        dense = [Fraction(0)] * (deg + 1)
        for k, c in terms.items():
            dense[k[0]] += c
        return UniPoly(dense, variables[0])
    return MPoly(terms, variables)


# -- gcd / resultant / discriminant ----------------------------------------


def poly_gcd(p, q, var: str | None = None):
    """Greatest common divisor, monic in ``var`` when that is possible.

    For multivariate inputs whose gcd has a non-constant leading coefficient
    in ``var``, the primitive integer form with positive leading term is
    returned instead.
    """
    if isinstance(p, UniPoly) and isinstance(q, UniPoly):
        if p.var != q.var:
            raise BadInput(f"variable mismatch: {p.var} vs {q.var}")
        return UniPoly(p._f.gcd(q._f), p.var)
    if isinstance(p, MPoly) and isinstance(q, MPoly):
        if p.vars != q.vars:
            raise BadInput(f"variable mismatch: {p.vars} vs {q.vars}")
        g = MPoly(p._f.gcd(q._f), p.vars)
        if g.is_zero():
            return g
        var = var or p.vars[0]
        lc = g.lc_in(var)
        if not lc.free_vars():
            return g * (1 / lc.constant_value())
        return g.canonical()
    raise BadInput("poly_gcd needs two UniPoly or two MPoly values")


def resultant(p, q, var: str | None = None):
    """Resultant with respect to ``var``.

    Two ``UniPoly`` give a ``Fraction``; two-variable ``MPoly`` inputs give a
    ``UniPoly`` in the remaining variable; wider inputs give an ``MPoly``.
    """
    if isinstance(p, UniPoly) and isinstance(q, UniPoly):
        if p.var != q.var:
            raise BadInput(f"variable mismatch: {p.var} vs {q.var}")
        if p.degree < 1 or q.degree < 1:
            raise BadInput("resultant needs positive degree inputs")
        return _frac(p._f.resultant(q._f))
    if not (isinstance(p, MPoly) and isinstance(q, MPoly)):
        raise BadInput("resultant needs two UniPoly or two MPoly values")
    if p.vars != q.vars:
        raise BadInput(f"variable mismatch: {p.vars} vs {q.vars}")
    if var is None:
        raise BadInput("multivariate resultant needs an explicit variable")
    if p.degree(var) < 1 or q.degree(var) < 1:
        raise BadInput(f"resultant needs positive degree in {var}")
    r = MPoly(p._f.resultant(q._f, var), p.vars)
    rest = tuple(v for v in p.vars if v != var)
    if len(rest) == 1:
        return r.to_uni(rest[0]) if r.free_vars() else UniPoly([r.constant_value()], rest[0])
    return r.restrict(rest)


def discriminant(p: UniPoly) -> Fraction:
    n = p.degree
    if n < 2:
        raise BadInput("discriminant needs degree >= 2")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(p, p.derivative()) / p.lc


# -- factorization helpers -------------------------------------------------


@dataclass
class FactorList:
    unit: Fraction
    factors: list[tuple[UniPoly, int]] = field(default_factory=list)

    def expand(self) -> UniPoly:
        var = self.factors[0][0].var if self.factors else "x"
        out = UniPoly([self.unit], var)
        for f, e in self.factors:
            out = out * f**e
        return out

    def multiplicities(self) -> dict[int, int]:
        """multiplicity -> total degree of the factors carrying it"""
        out: dict[int, int] = {}
        for f, e in self.factors:
            out[e] = out.get(e, 0) + f.degree
        return out


def squarefree_factor(p: UniPoly) -> FactorList:
    """Yun's squarefree decomposition over Q."""
    if p.is_zero():
        raise BadInput("squarefree_factor of the zero polynomial")
    f = p.canonical()
    factors: list[tuple[UniPoly, int]] = []
    if f.degree > 0:
        df = f.derivative()
        a0 = poly_gcd(f, df)
        b = f.exquo(a0)
        c = df.exquo(a0)
        d = c - b.derivative()
        i = 1
        while b.degree > 0:
            a = poly_gcd(b, d)
            b = b.exquo(a)
            c = d.exquo(a)
            d = c - b.derivative()
            if a.degree > 0:
                factors.append((a, i))
            i += 1
    out = [(g.canonical(), e) for g, e in factors]
    lead = Fraction(1)
    for g, e in out:
        lead *= g.lc**e
    fl = FactorList(p.lc / lead, out)
    if fl.expand() != p:
        raise VerificationFailure("squarefree decomposition does not reconstruct its input")
    return fl


@dataclass
class DivRem:
    quotient: MPoly | UniPoly
    remainder: MPoly | UniPoly
    denominator: MPoly | Fraction

    def check(self, f, g) -> bool:
        return self.denominator * f == self.quotient * g + self.remainder


def divrem_in_var(f, g, var: str) -> DivRem:
    """Pseudo-division of f by g in ``var``.

    Returns q, r and d = lc_var(g)^(deg f - deg g + 1) with d*f = q*g + r and
    deg_var r < deg_var g.  Inputs with different variable sets are embedded
    in the ordered union of their variables (f's variables first).
    """
    uni = isinstance(f, UniPoly) and isinstance(g, UniPoly)
    if uni:
        if f.var != var or g.var != var:
            raise BadInput(f"univariate division must be in {var}")
        f, g = MPoly.from_uni(f, (var,)), MPoly.from_uni(g, (var,))
    if not (isinstance(f, MPoly) and isinstance(g, MPoly)):
        raise BadInput("divrem_in_var needs polynomials")
    variables = f.vars + tuple(v for v in g.vars if v not in f.vars)
    if var not in variables:
        raise BadInput(f"{var!r} is not a variable of the inputs")
    f, g = f.extend(variables), g.extend(variables)
    m = g.degree(var)
    if m < 1:
        raise BadInput(f"divisor has no positive degree in {var}")
    lc = g.lc_in(var)
    n = f.degree(var)
    x = MPoly.gens(variables)[variables.index(var)]
    zero = MPoly.constant(0, variables)
    if n < m:
        q, r, d = zero, f, MPoly.constant(1, variables)
    else:
        q, r = zero, f
        e = n - m + 1
        while not r.is_zero() and r.degree(var) >= m:
            t = r.lc_in(var) * x ** (r.degree(var) - m)
            q = lc * q + t
            r = lc * r - t * g
            e -= 1
        scale = lc**e
        q, r = scale * q, scale * r
        d = lc ** (n - m + 1)
    if uni:
        dq = d.constant_value()
        return DivRem(q.to_uni(var), r.to_uni(var), dq)
    return DivRem(q, r, d)


def strip_trivial_factors(p: UniPoly, roots) -> tuple[UniPoly, list[int]]:
    """Divide out (var - rho) for each listed rational root to exact multiplicity."""
    mults = []
    for rho in roots:
        rho = Fraction(rho)
        k = 0
        lin = UniPoly([-rho, 1], p.var)
        while not p.is_zero() and p.degree > 0 and p(rho) == 0:
            p = p.exquo(lin)
            k += 1
        mults.append(k)
    return p, mults


def reciprocal_reduce(p: UniPoly, var: str = "r") -> UniPoly:
    """For palindromic p of degree 2m return q of degree m with p(t) = t^m q(t + 1/t)."""
    if p.is_zero() or p.degree % 2 or not p.is_palindromic():
        raise BadInput("reciprocal_reduce needs a palindromic polynomial of even degree")
    m = p.degree // 2
    c = p.coeffs
    r = UniPoly.gen(var)
    # Dickson-type polynomials: t^k + t^-k = D_k(t + 1/t)
    d_prev, d_cur = UniPoly([2], var), r
    q = UniPoly([c[m]], var)
    for k in range(1, m + 1):
        q = q + c[m + k] * d_cur
        d_prev, d_cur = d_cur, r * d_cur - d_prev
    return q


# -- Jordan totients --------------------------------------------------------


def _prime_factors(n: int) -> dict[int, int]:
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def jordan_totient(k: int, n: int) -> int:
    """J_k(n) = n^k prod_{p | n} (1 - p^-k)."""
    if n < 1:
        raise BadInput("jordan_totient needs n >= 1")
    if k < 1:
        raise BadInput("jordan_totient needs k >= 1")
    out = 1
    for p, e in _prime_factors(n).items():
        out *= p ** (k * (e - 1)) * (p**k - 1)
    return out


def totient_coincidence_scan(k: int, bound: int) -> list[tuple[int, list[int]]]:
    """Groups of n in [2, bound] sharing J_k(n), as (value, members), by first member."""
    if bound < 2:
        raise BadInput("bound must be >= 2")
    groups: dict[int, list[int]] = {}
    for n in range(2, bound + 1):
        groups.setdefault(jordan_totient(k, n), []).append(n)
    found = [(v, ms) for v, ms in groups.items() if len(ms) > 1]
    return sorted(found, key=lambda g: g[1][0])
