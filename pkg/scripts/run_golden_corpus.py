"""Run the bundled golden corpus and print one line per entry.

    python scripts/run_golden_corpus.py [--include-optional] [--json out.json]
"""
from __future__ import annotations

import argparse
import json
from dataclasses import dataclass

from odemu.pipeline import golden_corpus_text, parse_corpus, run_corpus


@dataclass
class CorpusConfig:
    seed: int = 0
    parallel: int = 1
    include_optional: bool = False
    json_path: str | None = None


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--include-optional", action="store_true")
    p.add_argument("--json", dest="json_path")
    a = p.parse_args()
    cfg = CorpusConfig(a.seed, a.parallel, a.include_optional, a.json_path)

    report = run_corpus(parse_corpus(golden_corpus_text()), cfg.seed, cfg.parallel, cfg.include_optional)
    print(f"{'id':12s} {'verdict':9s} {'case':5s} {'ms':>7s}  mu")
    for e in report.entries:
        print(f"{e.id:12s} {e.verdict:9s} {e.found_case or '-':5s} {e.time_ms:7.0f}  {e.found_mu or e.detail}")
    print("totals:", report.by_verdict, "by case:", report.by_case)
    if cfg.json_path:
        with open(cfg.json_path, "w", encoding="utf-8") as fh:
            json.dump(report.to_json(), fh, indent=1)
    raise SystemExit(0 if report.ok else 1)


if __name__ == "__main__":
    main()
