"""Explore the closure of a seed set under the generation rules, then replay the log.

    python scripts/run_closure.py --depth 2 --budget 200 --out results/
"""

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from torsion_atlas.cli import SCHEMA, _points
from torsion_atlas.closure import GenerationRule, closure_explore, replay


@dataclass
class ClosureConfig:
    seed: str = "0,1,-1,inf"
    depth: int = 2
    budget: int = 200
    orders: str = "4"
    out: str = "results"


def progress(msg: str) -> None:
    print(f"[closure] {msg}", file=sys.stderr, flush=True)


def run(cfg: ClosureConfig) -> dict:
    t0 = time.perf_counter()
    seed = _points(cfg.seed)
    orders = frozenset(int(k) for k in cfg.orders.split(","))
    rules = [GenerationRule("four_torsion")]
    if orders - {4}:
        rules.append(GenerationRule("n_torsion", orders | {4}))
    st = closure_explore(seed, rules, depth=cfg.depth, budget=cfg.budget, progress=progress)
    again = replay(seed, st.log)
    assert [str(p) for p in again.elements] == [str(p) for p in st.elements]
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    report = {"schema": SCHEMA, "config": asdict(cfg), "state": st.to_json(), "replayed": True}
    (out / f"closure_depth{cfg.depth}.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    progress(f"{st.stats()} in {time.perf_counter() - t0:.1f}s, replay ok")
    return report


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(ClosureConfig()).items():
        ap.add_argument("--" + name, type=type(default), default=default)
    run(ClosureConfig(**vars(ap.parse_args())))


if __name__ == "__main__":
    main()
