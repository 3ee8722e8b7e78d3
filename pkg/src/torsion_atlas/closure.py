"""Growing point sets of P^1 by adjoining torsion images of the curves they
branch, plus the square-root, shifted-square-root and cube-root constructions
built from such images."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .algnum import (
    INF,
    AlgebraicNumber,
    Infinity,
    PointP1,
    algnum_equal,
    as_algebraic,
    as_point,
    point_sort_key,
    point_to_json,
)
from .divpoly import TorsionImage, _generic_primitive, torsion_image
from .errors import BadInput, VerificationFailure
from .exactmath import MPoly, divrem_in_var
from .projgeom import FourSet, MobiusMap

RULE_KINDS = ("four_torsion", "n_torsion", "sqrt_product", "sqrt_shift", "cube_root")


@dataclass(frozen=True)
class GenerationRule:
    kind: str
    allowed_orders: frozenset = frozenset({4})

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise BadInput(f"unknown rule kind {self.kind!r}")
        if 4 not in self.allowed_orders:
            raise BadInput("allowed orders must contain 4")
        if any(n < 2 for n in self.allowed_orders):
            raise BadInput("orders must be >= 2")

    def orders(self) -> list[int]:
        if self.kind == "four_torsion":
            return [4]
        return sorted(self.allowed_orders)


def four_torsion_of_set(r: FourSet | Iterable) -> TorsionImage:
    """Image of the exact-order-4 points of the curve branched over r.

    The identity is put over the minimal point of r; the image does not depend
    on that choice.
    """
    if not isinstance(r, FourSet):
        r = FourSet(tuple(r))
    return torsion_image(r.with_canonical_mark(), 4)


def _distinct(points) -> bool:
    return not any(algnum_equal(p, q) for p, q in itertools.combinations(points, 2))


def sqrt_product_step(x, y) -> AlgebraicNumber:
    """sqrt(xy), read off as a fixed point of z -> xy/z on the curve over {0, x, y, inf}."""
    x, y = as_algebraic(x), as_algebraic(y)
    if algnum_equal(x, y):
        return x
    if x.is_zero() or y.is_zero():
        raise BadInput("degenerate configuration: zero factor")
    img = four_torsion_of_set(FourSet((as_algebraic(0), x, y, INF)))
    w = (x * y).sqrt()
    for p in (w, -w):
        if not img.contains(p):
            raise VerificationFailure("fixed point of z -> xy/z missing from the 4-torsion image")
    return w


def sqrt_step(b) -> AlgebraicNumber:
    """sqrt(b) from the curve over {0, 1, b, inf}."""
    return sqrt_product_step(as_algebraic(1), b)


def sqrt_shift_step(b, c) -> AlgebraicNumber:
    """sqrt(b + c) through the curve over {inf, b, d, d + 1}, d^2 + d + c = 0."""
    b, c = as_algebraic(b), as_algebraic(c)
    d = _root_of_dd(c)
    r = (INF, b, d, d + 1)
    if not _distinct(r):
        raise BadInput("degenerate configuration: b collides with d or d + 1")
    img = four_torsion_of_set(FourSet(r))
    s = (b - d).sqrt()
    for p in (d + s, d - s):
        if not img.contains(p):
            raise VerificationFailure("d +- sqrt(b - d) missing from the 4-torsion image")
    w = sqrt_product_step(s + d, s - d)
    if not algnum_equal(w * w, b + c):
        raise VerificationFailure("product root does not square to b + c")
    return w


def _root_of_dd(c: AlgebraicNumber) -> AlgebraicNumber:
    """The canonical root d of d^2 + d + c."""
    disc = 1 - 4 * c
    s = disc.sqrt()
    roots = [(s - 1) / 2, (-s - 1) / 2]
    roots = sorted(roots, key=point_sort_key)
    d = roots[0]
    if not (d * d + d + c).is_zero():
        raise VerificationFailure("auxiliary root check failed")
    return d


def product_root_step(bs) -> AlgebraicNumber:
    """A 2^(m-1)-th root of b_1 ... b_m built by chained product roots."""
    bs = [as_algebraic(b) for b in bs]
    m = len(bs)
    if m < 2:
        raise BadInput("need at least two factors")
    root = sqrt_product_step(bs[0], bs[1])
    for k in range(2, m):
        # b_{k+1}^(1/2^(k-1)) by repeated square roots, then one product root
        t = bs[k]
        for _ in range(k - 1):
            t = sqrt_step(t)
        root = sqrt_product_step(root, t)
    prod = bs[0]
    for b in bs[1:]:
        prod = prod * b
    if not algnum_equal(root ** (2 ** (m - 1)), prod):
        raise VerificationFailure("chained root does not power back to the product")
    return root


# -- cube roots --------------------------------------------------------------


@dataclass
class IdentityCheck:
    name: str
    holds: bool
    difference: str

    def to_json(self) -> dict:
        return {"name": self.name, "holds": self.holds, "difference": self.difference}


def quartic_resolvent(q: MPoly, var: str = "x") -> MPoly:
    """prod (y - (x_i x_j + x_k x_l)) over the three pairings of the roots of the
    quartic q (made monic), written back in ``var``."""
    cs = q.coeffs_in(var)
    if max(cs) != 4:
        raise BadInput("quartic_resolvent needs degree 4")
    lead = cs[4].constant_value()
    a, b, c, d = (cs.get(k, q * 0) * (1 / lead) for k in (3, 2, 1, 0))
    x = MPoly.gens(q.vars)[q.vars.index(var)]
    return x**3 - b * x**2 + (a * c - 4 * d) * x - (a * a * d - 4 * b * d + c * c)


def cube_root_identities() -> list[IdentityCheck]:
    """The three polynomial identities behind cube roots, checked over Q[b]."""
    vars_ = ("x", "b", "s")
    x, b, s = MPoly.gens(vars_)
    rel = s * s - b

    def red(p: MPoly) -> MPoly:
        return divrem_in_var(p, rel, "s").remainder

    # the cubic with roots b, s, -s and identity at infinity
    cubic = red((x - b) * (x - s) * (x + s))
    cs = cubic.coeffs_in("x")
    zero = x * 0
    a2, a4, a6 = (cs.get(k, zero) for k in (2, 1, 0))
    f3 = red(_generic_primitive(a2, a4, a6, 3))
    want1 = 3 * x**4 - 4 * b * x**3 - 6 * b * x**2 + 12 * b**2 * x - 4 * b**3 - b**2
    d1 = f3 - want1
    rc = quartic_resolvent(f3)
    want2 = x**3 + 2 * b * x**2 + Fraction(4, 3) * b**2 * x + Fraction(8, 3) * b**3 \
        - Fraction(128, 27) * b**4 + Fraction(64, 27) * b**5
    d2 = rc - want2
    shifted = rc.subs("x", Fraction(2, 3) * b * (2 * x - 1))
    want3 = (Fraction(4, 3) * b) ** 3 * (x**3 + (b - 1) ** 2)
    d3 = shifted - want3
    out = []
    for name, d in (("division_polynomial", d1), ("resolvent", d2), ("shifted_resolvent", d3)):
        out.append(IdentityCheck(name, d.is_zero(), d.to_text()))
    return out


def cube_root_step(b) -> list[AlgebraicNumber]:
    """The three cube roots of -(b - 1)^2, obtained from the order-3 image of
    the curve over {b, sqrt b, -sqrt b, inf} and its cubic resolvent."""
    b = as_algebraic(b)
    if b.is_zero() or algnum_equal(b, as_algebraic(1)):
        raise BadInput("degenerate configuration: b must avoid 0 and 1")
    s = b.sqrt()
    img = torsion_image(FourSet((b, s, -s, INF), INF), 3)
    xs = [p for p in img.points if not isinstance(p, Infinity)]
    if len(xs) != 4:
        raise VerificationFailure("order-3 image should be four finite points")
    out = []
    for (i, j), (k, l) in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
        y = xs[i] * xs[j] + xs[k] * xs[l]
        # invert y = 2b(2x - 1)/3
        t = (y * 3 / (b * 2) + 1) / 2
        out.append(t)
    target = -((b - 1) ** 2)
    for t in out:
        if not algnum_equal(t**3, target):
            raise VerificationFailure("resolvent root is not a cube root of -(b-1)^2")
    return sorted(out, key=point_sort_key)


# -- explorer ----------------------------------------------------------------


@dataclass
class LogEntry:
    rule: str
    order: int
    inputs: tuple  # indices into the element list at the time
    outputs: list  # serialized new points, in adjoin order

    def to_json(self) -> dict:
        return {"rule": self.rule, "order": self.order, "inputs": list(self.inputs),
                "outputs": self.outputs}


@dataclass
class ClosureState:
    elements: list = field(default_factory=list)
    depth: int = 0
    log: list = field(default_factory=list)
    truncated: bool = False
    constructions: int = 0

    def contains(self, p: PointP1) -> bool:
        return any(algnum_equal(p, q) for q in self.elements)

    def adjoin(self, p: PointP1) -> bool:
        if self.contains(p):
            return False
        self.elements.append(p)
        return True

    @property
    def has_infinity(self) -> bool:
        return any(isinstance(p, Infinity) for p in self.elements)

    def finite(self) -> list[AlgebraicNumber]:
        return [p for p in self.elements if not isinstance(p, Infinity)]

    def stats(self) -> dict:
        out: dict[str, int] = {}
        for e in self.log:
            key = e.rule if e.rule != "n_torsion" else f"n_torsion[{e.order}]"
            out[key] = out.get(key, 0) + len(e.outputs)
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "truncated": self.truncated,
            "constructions": self.constructions,
            "size": len(self.elements),
            "has_infinity": self.has_infinity,
            "elements": [point_to_json(p) for p in self.elements],
            "log": [e.to_json() for e in self.log],
            "rule_stats": self.stats(),
        }


def _apply(rule: str, order: int, inputs: tuple, pts: list[PointP1]) -> list[PointP1]:
    chosen = [pts[i] for i in inputs]
    if rule in ("four_torsion", "n_torsion"):
        return list(torsion_image(FourSet(tuple(chosen)).with_canonical_mark(), order).points)
    if rule == "sqrt_product":
        w = sqrt_product_step(*chosen)
        return [w, -w]
    if rule == "sqrt_shift":
        w = sqrt_shift_step(*chosen)
        return [w, -w]
    if rule == "cube_root":
        return cube_root_step(chosen[0])
    raise BadInput(f"unknown rule {rule!r}")


def _tasks(rules: list[GenerationRule], n_elems: int, pts: list[PointP1]):
    """Deterministic construction order for one round."""
    finite = [i for i in range(n_elems) if not isinstance(pts[i], Infinity)]
    for rule in rules:
        if rule.kind in ("four_torsion", "n_torsion"):
            for n in rule.orders():
                for sub in itertools.combinations(range(n_elems), 4):
                    yield rule.kind, n, sub
        elif rule.kind in ("sqrt_product", "sqrt_shift"):
            for pair in itertools.combinations(finite, 2):
                yield rule.kind, 2, pair
        elif rule.kind == "cube_root":
            for i in finite:
                yield rule.kind, 3, (i,)


def closure_explore(seed, rules: Optional[Iterable[GenerationRule]] = None, depth: int = 2,
                    budget: int = 200, progress=None) -> ClosureState:
    """Breadth-first closure of a point set under the given rules.

    Each round uses the element list as it stood at the start of the round and
    performs at most ``budget`` constructions; hitting the budget marks the
    state truncated.  Inputs that are already done or degenerate are skipped.
    """
    if depth < 0 or budget < 1:
        raise BadInput("depth must be >= 0 and budget >= 1")
    rules = list(rules) if rules is not None else [GenerationRule("four_torsion")]
    seed_pts = list(seed.points) if isinstance(seed, FourSet) else [as_point(p) for p in seed]
    state = ClosureState()
    for p in seed_pts:
        if not state.adjoin(p):
            raise BadInput(f"seed point {p} listed twice")
    if len(state.elements) < 4:
        raise BadInput("seed needs at least four points")
    done: set = set()
    for rnd in range(depth):
        snapshot = list(state.elements)
        used = 0
        for rule, order, inputs in _tasks(rules, len(snapshot), snapshot):
            key = (rule, order, inputs)
            if key in done:
                continue
            if used >= budget:
                state.truncated = True
                break
            done.add(key)
            try:
                new = _apply(rule, order, inputs, snapshot)
            except BadInput:
                continue
            used += 1
            state.constructions += 1
            added = [p for p in new if state.adjoin(p)]
            state.log.append(LogEntry(rule, order, inputs, [point_to_json(p) for p in added]))
            if progress is not None and used % 25 == 0:
                progress(f"round {rnd + 1}: {used} constructions, {len(state.elements)} points")
        state.depth = rnd + 1
    return state


def replay(seed, log: list[LogEntry]) -> ClosureState:
    """Rebuild a state from its seed and log, re-running every construction."""
    seed_pts = list(seed.points) if isinstance(seed, FourSet) else [as_point(p) for p in seed]
    state = ClosureState()
    for p in seed_pts:
        state.adjoin(p)
    for e in log:
        if max(e.inputs) >= len(state.elements):
            raise VerificationFailure("log refers to an element that does not exist yet")
        new = _apply(e.rule, e.order, e.inputs, state.elements)
        added = [p for p in new if state.adjoin(p)]
        if [point_to_json(p) for p in added] != e.outputs:
            raise VerificationFailure(f"replay diverged at {e.rule} {e.inputs}")
        state.log.append(e)
        state.constructions += 1
    return state


def involution_sample(state: ClosureState, limit: int = 8) -> list[tuple]:
    """(x, (x-1)/(x+1)) for the first finite points other than -1."""
    g = MobiusMap(1, -1, 1, 1)
    out = []
    for p in state.elements:
        if len(out) >= limit:
            break
        if isinstance(p, AlgebraicNumber) and algnum_equal(p, as_algebraic(-1)):
            continue
        out.append((p, g(p)))
    return out
