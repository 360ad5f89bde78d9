"""Sweep the constructed ODE families and report recovery rates and timings.

    python scripts/family_sweep.py --family xyp -n 100
"""
from __future__ import annotations

import argparse
import json
import random
import statistics
import time
from collections import Counter
from dataclasses import asdict, dataclass

from odemu.exactness import verify_factor
from odemu.families import xy_family, xyp_family
from odemu.expr import render
from odemu.pipeline import constant_ratio, solve


@dataclass
class SweepConfig:
    family: str = "xyp"  # xy | xyp
    n: int = 100
    seed_offset: int = 0
    shape: str | None = None  # C | D | E, xyp only
    out: str | None = None


def _generate(cfg: SweepConfig, seed: int):
    rng = random.Random(cfg.seed_offset + seed)
    if cfg.family == "xy":
        ode, mu = xy_family(rng)
        return ode, mu, None
    return xyp_family(rng, cfg.shape)


def run(cfg: SweepConfig) -> dict:
    rows = []
    for seed in range(cfg.n):
        ode, mu, shape = _generate(cfg, seed)
        t0 = time.perf_counter()
        res = solve(ode, cfg.family, reduce=False, seed=seed)
        ms = (time.perf_counter() - t0) * 1000
        row = {"seed": seed, "ode": str(ode), "shape": shape, "status": res.status.value, "case": res.case_label, "ms": ms}
        if res.found:
            row["mu"] = render(res.mu)
            row["ratio_constant"] = constant_ratio(res.mu, mu, seed)
            row["reverified"] = verify_factor(ode, res.mu, seed=seed).exact
        rows.append(row)
    times = [r["ms"] for r in rows]
    found = [r for r in rows if r["status"] == "Found"]
    return {
        "config": asdict(cfg),
        "found": len(found),
        "ratio_constant": sum(r["ratio_constant"] for r in found),
        "reverified": sum(r["reverified"] for r in found),
        "status": dict(Counter(r["status"] for r in rows)),
        "case": dict(Counter(r["case"] for r in rows)),
        "ms_mean": statistics.fmean(times),
        "ms_max": max(times),
        "rows": rows,
    }


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--family", choices=["xy", "xyp"], default="xyp")
    p.add_argument("-n", type=int, default=100)
    p.add_argument("--seed-offset", type=int, default=0)
    p.add_argument("--shape", choices=list("CDE"))
    p.add_argument("--out")
    a = p.parse_args()
    cfg = SweepConfig(a.family, a.n, a.seed_offset, a.shape, a.out)
    summary = run(cfg)
    print(f"family {cfg.family}: {summary['found']}/{cfg.n} Found, "
          f"{summary['ratio_constant']} with constant ratio, {summary['reverified']} re-verified")
    print("status:", summary["status"])
    print("case:  ", summary["case"])
    print(f"time per ODE: mean {summary['ms_mean']:.0f} ms, max {summary['ms_max']:.0f} ms")
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=1, default=str)


if __name__ == "__main__":
    main()
