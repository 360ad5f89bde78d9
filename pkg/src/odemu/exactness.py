"""Exactness gate and first integrals for y'' = phi(x, y, y')."""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass

import sympy as sp

from .calculus import antiderivative
from .expr import X, Y, YP, Ode, Prober, normalize, poly_in

ACCEPT_TOL = 1e-9
REJECT_TOL = 1e-6
PROBE_POINTS = 100
# beyond this many operations a numerically-zero residual is not canonicalised
SYMBOLIC_OPS_LIMIT = 600


@dataclass(frozen=True)
class ResidualPair:
    a_res: sp.Expr
    b_res: sp.Expr


class VerdictKind(enum.Enum):
    EXACT = "Exact"
    NOT_EXACT = "NotExact"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    symbolic: bool = False
    numeric_max_abs: float | None = None
    point: dict | None = None

    @property
    def exact(self) -> bool:
        return self.kind is VerdictKind.EXACT


@dataclass(frozen=True)
class FirstIntegral:
    r: sp.Expr
    constant_name: str = "C1"

    def __str__(self) -> str:
        from .expr import render

        return f"{render(self.r)} + {self.constant_name} = 0"


class _Derivatives:
    """Memoised partial derivatives; higher orders are built from lower ones."""

    def __init__(self, e):
        self.cache = {(): sp.sympify(e)}

    def __call__(self, *vs):
        key = tuple(sorted(vs, key=str))
        if key not in self.cache:
            self.cache[key] = sp.diff(self(*key[:-1]), key[-1])
        return self.cache[key]


def euler_residuals(phi, mu, canonical: bool = True) -> ResidualPair:
    """The two coefficients of the exactness condition ``A + y'' B = 0`` after splitting.

    With ``canonical=False`` the raw (unsimplified) expressions are returned.
    """
    m, f = _Derivatives(mu), _Derivatives(phi)
    phi, mu = f(), m()
    x, y, yp = X, Y, YP
    a = (
        (yp * m(yp, y) - m(y) + m(yp, x)) * phi
        + (f(yp, x) + yp * f(yp, y) - f(y)) * mu
        + yp**2 * m(y, y)
        + (m(y) * f(yp) + m(yp) * f(y) + 2 * m(x, y)) * yp
        + m(yp) * f(x)
        + m(x) * f(yp)
        + m(x, x)
    )
    b = (
        yp * m(yp, y)
        + phi * m(yp, yp)
        + mu * f(yp, yp)
        + 2 * m(y)
        + 2 * m(yp) * f(yp)
        + m(yp, x)
    )
    if not canonical:
        return ResidualPair(a, b)
    return ResidualPair(normalize(a), normalize(b))


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def check_zero(exprs, seed=0, mode: str = "both", npoints: int = PROBE_POINTS) -> Verdict:
    """Decide whether every expression vanishes identically (canonically or at probe points).

    Probing runs first on the expressions as given, so that a non-zero residual is rejected
    without paying for canonicalisation. Large expressions that probe as zero are accepted
    numerically unless ``mode="symbolic"`` insists on a canonical zero.
    """
    exprs = [sp.sympify(e) for e in exprs]
    pending = [e for e in exprs if e != 0]
    if not pending:
        return Verdict(VerdictKind.EXACT, symbolic=mode != "numeric", numeric_max_abs=0.0)
    small = sum(sp.count_ops(e) for e in pending) <= SYMBOLIC_OPS_LIMIT
    if mode != "numeric" and small:
        pending = [normalize(e) for e in pending]
        if all(e == 0 for e in pending):
            return Verdict(VerdictKind.EXACT, symbolic=True, numeric_max_abs=0.0)
    res = Prober(pending, _rng(seed)).run(npoints, stop_above=REJECT_TOL)
    worst = max(res.values) if res.points else None
    if worst is not None and worst > REJECT_TOL:
        return Verdict(VerdictKind.NOT_EXACT, numeric_max_abs=worst, point=res.worst_point)
    if mode == "symbolic" and not small:
        if all(normalize(e) == 0 for e in pending):
            return Verdict(VerdictKind.EXACT, symbolic=True, numeric_max_abs=worst if worst is not None else 0.0)
    if worst is None:
        return Verdict(VerdictKind.UNDETERMINED)
    if worst < ACCEPT_TOL and mode != "symbolic" and len(res.points) >= npoints // 2:
        return Verdict(VerdictKind.EXACT, symbolic=False, numeric_max_abs=worst)
    return Verdict(VerdictKind.UNDETERMINED, numeric_max_abs=worst)


def verify_factor(ode: Ode, mu, seed=0, mode: str = "both") -> Verdict:
    """Gate every candidate factor through the residuals ``A`` and ``B``."""
    pair = euler_residuals(ode.phi, mu, canonical=False)
    return check_zero([pair.a_res, pair.b_res], seed=seed, mode=mode)


def _drop_constant(r: sp.Expr) -> sp.Expr:
    num, den = sp.fraction(r)
    variables = {X, Y, YP}
    if den.free_symbols & variables:
        return r
    kept = [t for t in sp.Add.make_args(sp.expand(num)) if t.free_symbols & variables or t.has(sp.Integral)]
    return normalize(sp.Add(*kept) / den)


def first_integral(ode: Ode, mu, seed=0, check: bool = True) -> FirstIntegral | None:
    """Build ``R = int(mu, y') + G(x, y)``; ``None`` when an antiderivative is out of reach."""
    mu = normalize(mu)
    s = antiderivative(mu, YP)
    if s is None:
        return None
    t = normalize(-(sp.diff(s, X) + YP * sp.diff(s, Y) + ode.phi * mu))
    coeffs = poly_in(t, YP, 1)
    if coeffs is None:
        return None
    coeffs = coeffs + [sp.Integer(0)] * (2 - len(coeffs))
    t0, t1 = coeffs
    g1 = sp.Integer(0) if t1 == 0 else antiderivative(t1, Y)
    if g1 is None:
        return None
    kprime = normalize(t0 - sp.diff(g1, X))
    if kprime.free_symbols & {Y, YP}:
        return None
    k = sp.Integer(0) if kprime == 0 else antiderivative(kprime, X)
    if k is None:
        return None
    r = _drop_constant(normalize(s + g1 + k))
    if check:
        v = check_zero(
            [sp.diff(r, YP) - mu, sp.diff(r, X) + YP * sp.diff(r, Y) + ode.phi * sp.diff(r, YP)],
            seed=seed,
        )
        if not v.exact:
            return None
    return FirstIntegral(r)
