"""torsion-atlas command line."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import signal
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algnum import DEFAULT_BITS, as_point, point_to_json
from .closure import GenerationRule, closure_explore
from .divpoly import (
    expected_degree,
    primitive_divpoly,
    pullback_divpoly,
    symmetric_family_divpoly,
)
from .errors import (
    BadInput,
    BudgetExceeded,
    PrecisionExhausted,
    TorsionAtlasError,
    VerificationFailure,
)
from .exactmath import jordan_totient, totient_coincidence_scan
from .intersect import census_3_5, census_3_n, certify_shared_point, moduli_scan
from .projgeom import FourSet, WeierstrassCurve

SCHEMA = "torsion-atlas/1"
CSV_COLUMNS = ["a1_minpoly", "a2_minpoly", "order", "point_minpoly", "orbit_class", "count"]

EXIT_OK, EXIT_VERIFY, EXIT_BUDGET, EXIT_PRECISION, EXIT_BAD_INPUT = 0, 2, 3, 4, 5


@dataclass
class RunConfig:
    precision_bits: int = DEFAULT_BITS
    budget_seconds: Optional[int] = None
    extended: bool = False
    seed: int = 0
    output: Optional[str] = None
    format: str = "json"

    def __post_init__(self):
        if self.precision_bits < 64:
            raise BadInput("precision must be at least 64 bits")
        if self.format not in ("json", "csv", "text"):
            raise BadInput(f"unknown format {self.format!r}")
        if self.budget_seconds is not None and self.budget_seconds <= 0:
            raise BadInput("budget must be positive")


def heartbeat(msg: str) -> None:
    print(f"[torsion-atlas] {msg}", file=sys.stderr, flush=True)


@contextmanager
def _deadline(seconds: Optional[int]):
    if not seconds:
        yield
        return

    def fire(signum, frame):
        raise BudgetExceeded(f"wall-clock budget of {seconds}s exceeded")

    old = signal.signal(signal.SIGALRM, fire)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


# -- parsing helpers --------------------------------------------------------------


def _rationals(text: str, count: Optional[int] = None) -> list[Fraction]:
    try:
        vals = [Fraction(t.strip()) for t in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise BadInput(f"expected comma-separated rationals, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise BadInput(f"expected {count} values, got {len(vals)}")
    return vals


def _points(text: str) -> list:
    out = []
    for t in text.split(","):
        try:
            out.append(as_point(t.strip()))
        except (ValueError, ZeroDivisionError):
            raise BadInput(f"bad point {t!r}; use rationals or inf") from None
    return out


def _ramification(text: str) -> FourSet:
    if ":" not in text:
        raise BadInput("ramification needs p1,p2,p3,p4:marked")
    pts, marked = text.rsplit(":", 1)
    return FourSet(tuple(_points(pts)), _points(marked)[0])


# -- payloads (plain dicts, reused by the verification battery) -----------------------


def divpoly_payload(n: int, weierstrass: Optional[str] = None, symmetric: Optional[str] = None,
                    ramification: Optional[str] = None) -> dict:
    if sum(x is not None for x in (weierstrass, symmetric, ramification)) != 1:
        raise BadInput("give exactly one of --weierstrass, --symmetric, --ramification")
    if n < 2:
        raise BadInput("order must be >= 2")
    want = expected_degree(n)
    at_inf = 0
    if weierstrass is not None:
        a2, a4, a6 = _rationals(weierstrass, 3)
        poly = primitive_divpoly(WeierstrassCurve(a2, a4, a6), n).poly
        curve = {"weierstrass": [str(a2), str(a4), str(a6)]}
    elif symmetric is not None:
        (a,) = _rationals(symmetric, 1)
        if a == 0 or a**4 == 1:
            raise BadInput("symmetric parameter must avoid 0 and fourth roots of unity")
        poly = symmetric_family_divpoly(n).subs("a", a).to_uni("x").canonical()
        curve = {"symmetric": str(a)}
    else:
        S = _ramification(ramification)
        dp = pullback_divpoly(S, n)
        poly = dp.poly
        at_inf = want - poly.degree
        curve = {"ramification": [point_to_json(p) for p in S.points],
                 "marked": point_to_json(S.marked_identity)}
    deg = poly.degree
    return {
        "schema": SCHEMA,
        "command": "divpoly",
        "curve": curve,
        "n": n,
        "polynomial": poly.to_text(),
        "degree": deg,
        "points_at_infinity": at_inf,
        "expected_degree": want,
        "degree_ok": deg + at_inf == want and at_inf in (0, 1),
    }


def totient_payload(k: int, bound: int) -> dict:
    if k < 1 or bound < 1:
        raise BadInput("k and bound must be positive")
    groups = totient_coincidence_scan(k, bound)
    return {
        "schema": SCHEMA,
        "command": "totient",
        "k": k,
        "bound": bound,
        "groups": [{"value": v, "n": ns} for v, ns in groups],
        "values": {str(n): jordan_totient(k, n) for n in range(1, bound + 1)},
    }


# -- output --------------------------------------------------------------------


def _text(payload: dict) -> str:
    lines = []
    for k, v in payload.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v, sort_keys=True)
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def emit(cfg: RunConfig, payload: dict, rows: Optional[list] = None) -> None:
    if cfg.format == "csv":
        if rows is None:
            raise BadInput("csv output is only available for census tables")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        w.writerows(rows)
        data = buf.getvalue()
    elif cfg.format == "text":
        data = _text(payload)
    else:
        data = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)
        sys.stdout.flush()


# -- subcommands -----------------------------------------------------------------


def cmd_divpoly(cfg: RunConfig, args) -> int:
    p = divpoly_payload(args.n, args.weierstrass, args.symmetric, args.ramification)
    emit(cfg, p)
    return EXIT_OK if p["degree_ok"] else EXIT_VERIFY


def cmd_intersect(cfg: RunConfig, args) -> int:
    chosen = sum(x is not None for x in (args.from_x, args.census))
    if chosen != 1:
        raise BadInput("give exactly one of --from-x or --census")
    if args.from_x is not None:
        orders = _rationals(args.orders) if args.orders else [Fraction(3)]
        if orders != [3]:
            raise BadInput("--from-x supports --orders 3")
        (x,) = _rationals(args.from_x, 1)
        cert = certify_shared_point(x, cfg.precision_bits)
        payload = {"schema": SCHEMA, "command": "intersect", "mode": "from-x",
                   "x": str(x), "certificate": cert.to_json(), "evidence_only": True}
        emit(cfg, payload, [[cert.a1.minpoly.to_text(), cert.a2.minpoly.to_text(), 3,
                             c.point.minpoly.to_text(), c.orbit_class, cert.count_lower_bound]
                            for c in cert.common])
        return EXIT_OK
    pair = [int(v) for v in _rationals(args.census, 2)]
    if pair[0] != 3:
        raise BadInput("census pairs are (3, n)")
    n = pair[1]
    if n == 5:
        rep = census_3_5(cfg.precision_bits, progress=heartbeat)
    else:
        rep = census_3_n(n, cfg.precision_bits, extended=cfg.extended, progress=heartbeat,
                         budget_seconds=cfg.budget_seconds)
    payload = {"schema": SCHEMA, "command": "intersect", "mode": "census",
               "census": rep.to_json(), "evidence_only": True}
    emit(cfg, payload, rep.csv_rows())
    return EXIT_OK


def cmd_verify_paper(cfg: RunConfig, args) -> int:
    from .verify import Memo, coverage_manifest, run_battery

    memo = Memo(cfg.precision_bits, cfg.budget_seconds, cfg.extended)
    only = [c.strip() for c in args.only.split(",")] if args.only else None
    try:
        results = run_battery(memo, inject=args.inject, only=only)
    except KeyError as e:
        raise BadInput(f"unknown check {e.args[0]!r}") from None
    for r in results:
        heartbeat(f"{r.status.upper():5s} {r.id}  {r.detail}")
    failed = [r.id for r in results if r.status in ("fail", "error")]
    payload = {
        "schema": SCHEMA,
        "command": "verify-paper",
        "extended": cfg.extended,
        "results": [r.to_json() for r in results],
        "coverage": coverage_manifest(),
        "passed": sum(r.status == "pass" for r in results),
        "failed": failed,
        "skipped": [r.id for r in results if r.status == "skip"],
    }
    emit(cfg, payload)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_closure(cfg: RunConfig, args) -> int:
    seed = _points(args.seed)
    orders = sorted({int(v) for v in _rationals(args.orders)}) if args.orders else [4]
    rules = [GenerationRule("four_torsion")]
    extra = [n for n in orders if n != 4]
    if extra:
        rules.append(GenerationRule("n_torsion", frozenset(orders)))
    st = closure_explore(seed, rules, depth=args.depth, budget=args.budget, progress=heartbeat)
    payload = {"schema": SCHEMA, "command": "closure", "seed": [point_to_json(p) for p in seed],
               "orders": orders, "budget": args.budget, "state": st.to_json(),
               "evidence_only": True}
    emit(cfg, payload)
    return EXIT_OK


def cmd_totient(cfg: RunConfig, args) -> int:
    emit(cfg, totient_payload(args.k, args.bound))
    return EXIT_OK


def cmd_moduli_scan(cfg: RunConfig, args) -> int:
    grid = _rationals(args.grid)
    rep = moduli_scan(args.n, grid, bits=cfg.precision_bits)
    payload = {"schema": SCHEMA, "command": "moduli-scan", "scan": rep.to_json(),
               "verdict": "all-constant" if rep.all_constant else
               ("non-constant" if rep.nonconstant else "undecided")}
    emit(cfg, payload)
    return EXIT_OK


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None,
                        help="working precision in bits (default: $TORSION_ATLAS_PRECISION or 256)")
    common.add_argument("--budget", dest="budget_seconds", type=int, default=None,
                        help="wall-clock budget in seconds")
    common.add_argument("--extended", action="store_true", help="allow the long (3,11)+ runs")
    common.add_argument("--seed", dest="rng_seed", type=int, default=0,
                        help="seed for any sampling")
    common.add_argument("--output", "-o", default=None)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")

    p = argparse.ArgumentParser(prog="torsion-atlas", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("divpoly", parents=[common], help="primitive division polynomial")
    d.add_argument("--weierstrass")
    d.add_argument("--symmetric")
    d.add_argument("--ramification")
    d.add_argument("--n", type=int, required=True)
    d.set_defaults(func=cmd_divpoly)

    i = sub.add_parser("intersect", parents=[common], help="shared torsion points")
    i.add_argument("--from-x", dest="from_x")
    i.add_argument("--orders")
    i.add_argument("--census")
    i.set_defaults(func=cmd_intersect)

    v = sub.add_parser("verify-paper", parents=[common], help="run the identity battery")
    v.add_argument("--inject", default=None, help="perturb the named check (harness self-test)")
    v.add_argument("--only", default=None, help="comma-separated check ids to run")
    v.set_defaults(func=cmd_verify_paper)

    c = sub.add_parser("closure", parents=[common], help="bounded closure explorer")
    c.add_argument("--seed-points", "--seed-set", dest="seed", default="0,1,-1,inf")
    c.add_argument("--depth", type=int, default=2)
    c.add_argument("--max-constructions", dest="budget", type=int, default=200)
    c.add_argument("--orders", default=None)
    c.set_defaults(func=cmd_closure)

    t = sub.add_parser("totient", parents=[common], help="Jordan totient coincidences")
    t.add_argument("--k", type=int, default=2)
    t.add_argument("--bound", type=int, required=True)
    t.set_defaults(func=cmd_totient)

    m = sub.add_parser("moduli-scan", parents=[common], help="moduli of 4-subsets across a grid")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--grid", required=True)
    m.set_defaults(func=cmd_moduli_scan)
    return p


def _config(args) -> RunConfig:
    bits = args.precision
    if bits is None:
        env = os.environ.get("TORSION_ATLAS_PRECISION")
        try:
            bits = int(env) if env else DEFAULT_BITS
        except ValueError:
            raise BadInput(f"TORSION_ATLAS_PRECISION must be an integer, got {env!r}") from None
    return RunConfig(bits, args.budget_seconds, args.extended, args.rng_seed, args.output, args.format)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "closure":
        # `closure --seed 0,1,-1,inf` names the seed set, not the RNG seed
        argv = [("--seed-set" if a == "--seed" else a) for a in argv]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_BAD_INPUT
    try:
        cfg = _config(args)
        random.seed(cfg.seed)
        with _deadline(cfg.budget_seconds):
            return args.func(cfg, args)
    except BadInput as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (ValueError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except VerificationFailure as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFY
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except PrecisionExhausted as e:
        print(f"precision exhausted: {e}", file=sys.stderr)
        return EXIT_PRECISION
    except TorsionAtlasError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
