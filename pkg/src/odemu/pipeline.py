"""Dispatch over the three ansatze, ODE classification and the corpus harness."""
from __future__ import annotations

import hashlib
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

import sympy as sp

from .exactness import first_integral, verify_factor
from .expr import X, Y, YP, FuncSym, Ode, ParseError, Tri, free_of, normalize, parse_expr, render
from .mu_xprime import _linear_coeffs, decide, find_mu_xprime
from .mu_xy import extract_abc, solve_mu_xy
from .mu_yprime import find_mu_yprime
from .results import CASE_LABELS, AnsatzKind, FactorResult, Status

AUTO_ORDER = (AnsatzKind.XY, AnsatzKind.XYP, AnsatzKind.YYP)
_PRIORITY = {
    Status.FOUND: 0,
    Status.FOUND_UP_TO_LINEAR_ODE: 1,
    Status.INCONCLUSIVE: 2,
    Status.NOT_EXISTS: 3,
}


def classify(ode: Ode, seed=0) -> dict:
    """Flags ``missing_x``, ``missing_y``, ``exact_as_given``, ``linear``; ``None`` when undecided."""

    def tri_flag(e):
        t = decide(e, seed)
        return None if t is Tri.UNKNOWN else t is Tri.ZERO

    exact = verify_factor(ode, sp.Integer(1), seed=seed).kind.value
    return {
        "missing_x": tri_flag(sp.diff(ode.phi, X)),
        "missing_y": tri_flag(sp.diff(ode.phi, Y)),
        "exact_as_given": {"Exact": True, "NotExact": False}.get(exact),
        "linear": _linear_coeffs(ode) is not None,
    }


def _solve_one(ode: Ode, kind: AnsatzKind, seed) -> FactorResult:
    if kind is AnsatzKind.XY:
        pf = extract_abc(ode)
        if pf is None:
            return FactorResult.not_exists("phi is not a polynomial of degree two in y'", ansatz=AnsatzKind.XY)
        return solve_mu_xy(pf, seed=seed)
    if kind is AnsatzKind.XYP:
        return find_mu_xprime(ode, seed=seed)
    return find_mu_yprime(ode, seed=seed)


def solve(ode: Ode, ansatz: AnsatzKind = AnsatzKind.AUTO, reduce: bool = True, seed=0, verify: str = "both") -> FactorResult:
    """Search for an integrating factor; ``reduce`` also attaches a first integral."""
    if isinstance(ansatz, str):
        ansatz = AnsatzKind(ansatz)
    kinds = AUTO_ORDER if ansatz is AnsatzKind.AUTO else (ansatz,)
    tried = []
    res = None
    for kind in kinds:
        r = _solve_one(ode, kind, seed)
        tried.append(r)
        if r.status is Status.FOUND:
            res = r
            break
    if res is None:
        res = min(tried, key=lambda r: _PRIORITY[r.status])
        if len(tried) > 1:
            res.diagnostics["attempts"] = {r.ansatz.value: (r.status.value, r.failed_condition) for r in tried}
        return res
    if verify != "both":
        res.verdict = verify_factor(ode, res.mu, seed=seed, mode=verify)
        if not res.verdict.exact:
            return FactorResult.inconclusive(
                f"factor not confirmed with --verify {verify}", ansatz=res.ansatz, diagnostics=res.diagnostics
            )
    if reduce:
        res.first_integral = first_integral(ode, res.mu, seed=seed)
    return res


def result_record(res: FactorResult, ode: Ode, *, seed, time_ms, flags=None, entry_id=None) -> dict:
    """Plain-JSON view of a result."""
    rec: dict = {}
    if entry_id is not None:
        rec["id"] = entry_id
    rec["status"] = res.status.value
    rec["ansatz"] = res.ansatz.value if res.ansatz else None
    rec["case"] = res.case_label
    rec["mu"] = render(res.mu) if res.mu is not None else None
    if res.first_integral is not None:
        rec["first_integral"] = str(res.first_integral)
    v = res.verdict
    rec["residual"] = {
        "symbolic": bool(v.symbolic) if v is not None else False,
        "numeric_max_abs": v.numeric_max_abs if v is not None else None,
    }
    rec["flags"] = flags if flags is not None else classify(ode, seed)
    if res.failed_condition:
        rec["failed_condition"] = res.failed_condition
    if res.status is Status.FOUND_UP_TO_LINEAR_ODE:
        a, b = res.linear_ode
        rec["linear_ode"] = f"nu'' = ({render(a)})*nu' + ({render(b)})*nu"
        rec["template"] = render(res.template)
    if res.extra_factors:
        rec["extra_factors"] = [render(m) for m in res.extra_factors]
    rec["time_ms"] = round(time_ms, 1)
    rec["seed"] = seed
    return rec


# ------------------------------------------------------------------ corpus


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    ode_text: str
    func_decls: tuple = ()
    expected_mu: str | None = None
    expected_case: str | None = None
    tags: tuple = ()

    @property
    def optional(self) -> bool:
        return "optional" in self.tags


@dataclass
class EntryReport:
    id: str
    verdict: str  # pass | fail | inconclusive | skipped
    found_case: str | None = None
    found_mu: str | None = None
    status: str | None = None
    residual: dict = field(default_factory=dict)
    time_ms: float = 0.0
    detail: str = ""
    record: dict | None = None


@dataclass
class CorpusReport:
    entries: list

    @property
    def by_verdict(self) -> dict:
        return dict(Counter(e.verdict for e in self.entries))

    @property
    def by_status(self) -> dict:
        return dict(Counter(e.status for e in self.entries if e.status))

    @property
    def by_case(self) -> dict:
        return dict(Counter(e.found_case for e in self.entries if e.found_case))

    @property
    def ok(self) -> bool:
        return all(e.verdict in ("pass", "skipped") for e in self.entries)

    def to_json(self) -> dict:
        return {
            "entries": [e.record or {"id": e.id, "verdict": e.verdict, "detail": e.detail} for e in self.entries],
            "totals": {"verdict": self.by_verdict, "status": self.by_status, "case": self.by_case},
        }


def parse_corpus(text: str) -> list[CorpusEntry]:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = {}
        for part in line.split(";"):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise ParseError(f"line {lineno}: expected key=value, got {part!r}", 0)
            k, v = part.split("=", 1)
            fields[k.strip()] = v.strip()
        if "id" not in fields or "ode" not in fields:
            raise ParseError(f"line {lineno}: id and ode are required", 0)
        case = fields.get("expect_case")
        if case is not None and case not in CASE_LABELS:
            raise ParseError(f"line {lineno}: unknown case label {case!r}", 0)
        split = lambda s: tuple(t.strip() for t in s.split(",") if t.strip()) if s else ()
        entries.append(
            CorpusEntry(
                id=fields["id"],
                ode_text=fields["ode"],
                func_decls=split(fields.get("arbitrary")),
                expected_mu=fields.get("expect_mu"),
                expected_case=case,
                tags=split(fields.get("tags")),
            )
        )
    return entries


def golden_corpus_text() -> str:
    return resources.files("odemu").joinpath("data/golden.txt").read_text(encoding="utf-8")


def entry_seed(seed: int, entry_id: str) -> int:
    digest = hashlib.sha256(f"{seed}:{entry_id}".encode()).digest()
    return int.from_bytes(digest[:4], "big")


def constant_ratio(a, b, seed=0) -> bool:
    """True when ``a/b`` is free of x, y and y'."""
    ratio = normalize(sp.sympify(a) / sp.sympify(b))
    if free_of(ratio, X, Y, YP) and not ratio.has(sp.Integral):
        return ratio != 0
    return all(decide(sp.diff(ratio, v), seed) is Tri.ZERO for v in (X, Y, YP))


def run_entry(entry: CorpusEntry, seed: int = 0) -> EntryReport:
    s = entry_seed(seed, entry.id)
    t0 = time.perf_counter()
    try:
        decls = tuple(FuncSym.parse(d) for d in entry.func_decls)
        ode = Ode.parse(entry.ode_text, decls)
        expected = parse_expr(entry.expected_mu, decls) if entry.expected_mu else None
    except (ParseError, ValueError) as e:
        return EntryReport(entry.id, "fail", detail=f"input error: {e}")
    res = solve(ode, seed=s)
    ms = (time.perf_counter() - t0) * 1000
    rec = result_record(res, ode, seed=s, time_ms=ms, entry_id=entry.id)
    rep = EntryReport(
        entry.id,
        "pass",
        found_case=res.case_label,
        found_mu=rec["mu"],
        status=res.status.value,
        residual=rec["residual"],
        time_ms=ms,
        record=rec,
    )
    problems = []
    if res.status is not Status.FOUND:
        rep.verdict = "inconclusive" if res.status is not Status.NOT_EXISTS else "fail"
        rep.detail = f"{res.status.value}: {res.failed_condition}"
    else:
        if expected is not None and not constant_ratio(res.mu, expected, s):
            problems.append(f"mu {rec['mu']} is not a constant multiple of {entry.expected_mu}")
        if entry.expected_case and res.case_label != entry.expected_case:
            problems.append(f"case {res.case_label} found, {entry.expected_case} expected")
        if not verify_factor(ode, res.mu, seed=s).exact:
            problems.append("stored factor does not re-verify")
        if problems:
            rep.verdict = "fail"
            rep.detail = "; ".join(problems)
    rec["verdict"] = rep.verdict
    if rep.detail:
        rec["detail"] = rep.detail
    return rep


def _run_entry_args(args):
    return run_entry(*args)


def run_corpus(entries, seed: int = 0, parallelism: int = 1, include_optional: bool = False) -> CorpusReport:
    todo, reports = [], []
    for e in entries:
        if e.optional and not include_optional:
            reports.append(EntryReport(e.id, "skipped", detail="optional entry"))
        else:
            todo.append(e)
    if parallelism > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            reports.extend(pool.map(_run_entry_args, [(e, seed) for e in todo]))
    else:
        reports.extend(run_entry(e, seed) for e in todo)
    reports.sort(key=lambda r: r.id)
    return CorpusReport(reports)
