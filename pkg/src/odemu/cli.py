"""Command line entry point: ``odemu solve | verify | corpus run``."""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .exactness import VerdictKind, verify_factor
from .expr import FuncSym, Ode, ParseError, parse_expr, render
from .pipeline import classify, golden_corpus_text, parse_corpus, result_record, run_corpus, solve
from .results import AnsatzKind, Status

EXIT_OK, EXIT_NONE, EXIT_UNSURE, EXIT_INPUT = 0, 1, 2, 3

_STATUS_EXIT = {
    Status.FOUND: EXIT_OK,
    Status.NOT_EXISTS: EXIT_NONE,
    Status.INCONCLUSIVE: EXIT_UNSURE,
    Status.FOUND_UP_TO_LINEAR_ODE: EXIT_UNSURE,
}
_VERDICT_EXIT = {VerdictKind.EXACT: EXIT_OK, VerdictKind.NOT_EXACT: EXIT_NONE, VerdictKind.UNDETERMINED: EXIT_UNSURE}


class InputError(Exception):
    pass


def _decls(decls) -> tuple:
    out = []
    for decl in decls or ():
        for piece in decl.split(","):
            if piece.strip():
                out.append(FuncSym.parse(piece.strip()))
    return tuple(out)


def _read_ode_text(args) -> str:
    if args.expr is not None:
        return args.expr
    try:
        lines = Path(args.ode_file).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise InputError(str(e)) from e
    for line in lines:
        if line.strip() and not line.strip().startswith("#"):
            return line.strip()
    raise InputError(f"{args.ode_file}: no ODE found")


def _ode(text: str, decls) -> Ode:
    return Ode.parse(text, decls)


def cmd_solve(args) -> int:
    decls = _decls(args.arbitrary)
    ode = _ode(_read_ode_text(args), decls)
    t0 = time.perf_counter()
    res = solve(ode, AnsatzKind(args.ansatz), reduce=args.reduce, seed=args.seed, verify=args.verify)
    ms = (time.perf_counter() - t0) * 1000
    rec = result_record(res, ode, seed=args.seed, time_ms=ms, flags=classify(ode, args.seed))
    if args.json:
        print(json.dumps(rec))
    else:
        print(f"ode:      {ode}")
        print(f"status:   {rec['status']}")
        if rec["mu"] is not None:
            print(f"ansatz:   {rec['ansatz']}   case: {rec['case']}")
            print(f"mu:       {rec['mu']}")
        for key in ("extra_factors", "first_integral", "linear_ode", "template", "failed_condition"):
            if key in rec:
                print(f"{key.replace('_', ' ')}: {rec[key]}")
        print(f"time:     {rec['time_ms']} ms")
    return _STATUS_EXIT[res.status]


def cmd_verify(args) -> int:
    decls = _decls(args.arbitrary)
    ode = _ode(args.expr, decls)
    mu = parse_expr(args.mu, decls)
    v = verify_factor(ode, mu, seed=args.seed)
    rec = {
        "verdict": v.kind.value,
        "mu": render(mu),
        "residual": {"symbolic": v.symbolic, "numeric_max_abs": v.numeric_max_abs},
        "seed": args.seed,
    }
    print(json.dumps(rec) if args.json else f"{v.kind.value} (max |residual| = {v.numeric_max_abs})")
    return _VERDICT_EXIT[v.kind]


def cmd_corpus_run(args) -> int:
    if args.path == "golden":
        text = golden_corpus_text()
    else:
        try:
            text = Path(args.path).read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(str(e)) from e
    report = run_corpus(parse_corpus(text), seed=args.seed, parallelism=args.parallel, include_optional=args.include_optional)
    if args.json:
        print(json.dumps(report.to_json()))
    else:
        for e in report.entries:
            line = f"{e.id:12s} {e.verdict:12s} {e.found_case or '-':6s} {e.found_mu or '-'}"
            if e.detail:
                line += f"   [{e.detail}]"
            print(line)
        print("totals:", ", ".join(f"{k}={v}" for k, v in sorted(report.by_verdict.items())))
    verdicts = report.by_verdict
    if verdicts.get("fail"):
        return EXIT_NONE
    if verdicts.get("inconclusive"):
        return EXIT_UNSURE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="odemu", description="Integrating factors for y'' = phi(x, y, y').")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="search for an integrating factor")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--expr", help="ODE as \"y'' = ...\" or just the right-hand side")
    src.add_argument("--ode-file", help="file whose first non-comment line is the ODE")
    s.add_argument("--arbitrary", action="append", metavar="NAME(VAR)", help="declare an arbitrary function, e.g. h(y')")
    s.add_argument("--ansatz", choices=[k.value for k in AnsatzKind], default="auto")
    s.add_argument("--reduce", action="store_true", help="also build the first integral")
    s.add_argument("--verify", choices=["symbolic", "numeric", "both"], default="both")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a candidate integrating factor")
    v.add_argument("--expr", required=True)
    v.add_argument("--mu", required=True)
    v.add_argument("--arbitrary", action="append", metavar="NAME(VAR)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("corpus", help="corpus harness")
    csub = c.add_subparsers(dest="corpus_command", required=True)
    r = csub.add_parser("run", help="run every entry of a corpus file ('golden' for the bundled one)")
    r.add_argument("path")
    r.add_argument("--parallel", type=int, default=1)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--include-optional", action="store_true")
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_corpus_run)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, ParseError, ValueError) as e:
        print(f"odemu: input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
