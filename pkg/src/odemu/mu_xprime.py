"""Integrating factors mu(x, y') for y'' = phi(x, y, y').

The search writes ``mu = calF(x, y') * mu_tilde(x)``. A case ladder on
``Upsilon = phi_y`` produces ``calF``; ``mu_tilde`` then follows from a
single quadrature.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

import sympy as sp

from .calculus import DependenceError, exp_integral
from .exactness import verify_factor
from .expr import X, Y, YP, Ode, Tri, free_of, is_identically_zero, multiplicative_factors, normalize, poly_in, render, witnesses_dependence
from .results import AnsatzKind, FactorResult, Status

# fresh symbols standing for p'(x), p''(x), p'''(x)
U, V, T = sp.symbols("u_p1 v_p2 t_p3")


class LadderStop(Exception):
    """A branch ended without a factor; ``decided`` is False when a zero test was Unknown."""

    def __init__(self, why: str, decided: bool = True):
        super().__init__(why)
        self.why = why
        self.decided = decided


@dataclass
class CaseWork:
    upsilon: sp.Expr = sp.Integer(0)
    w: sp.Expr = sp.Integer(1)
    h_fun: sp.Expr | None = None
    h_const: sp.Expr | None = None
    p_prime: sp.Expr | None = None
    lam: sp.Expr | None = None
    psi: sp.Expr | None = None
    calF: sp.Expr | None = None
    mu_tilde: sp.Expr | None = None
    phis: tuple | None = None
    beta: sp.Expr | None = None
    gamma: sp.Expr | None = None
    case: str | None = None
    seed: int = 0
    notes: list = field(default_factory=list)

    def rng(self):
        return random.Random(self.seed)


def _d(e, *v):
    return normalize(sp.diff(e, *v))


def decide(e, seed=0) -> Tri:
    """Tri-state zero test with one heavier simplification before giving up."""
    t = is_identically_zero(e, rng=random.Random(seed))
    if t is Tri.UNKNOWN:
        try:
            if normalize(sp.simplify(e)) == 0:
                return Tri.ZERO
        except (TypeError, ValueError, NotImplementedError):
            pass
    return t


def _is_zero(e, seed, what) -> bool:
    t = decide(e, seed)
    if t is Tri.UNKNOWN:
        raise LadderStop(f"could not decide whether {what} vanishes", decided=False)
    return t is Tri.ZERO


def _indep(e, v, seed) -> bool:
    return free_of(e, v) or decide(sp.diff(e, v), seed) is Tri.ZERO


# ------------------------------------------------------------------ linear ODEs


def _linear_coeffs(ode: Ode):
    """``(a, b, c)`` with ``phi = a y' + b y + c`` and x-only coefficients, else ``None``."""
    cy = poly_in(ode.phi, YP, 1)
    if cy is None:
        return None
    cy = cy + [sp.Integer(0)] * (2 - len(cy))
    rest, a = cy
    cyy = poly_in(rest, Y, 1)
    if cyy is None:
        return None
    cyy = cyy + [sp.Integer(0)] * (2 - len(cyy))
    c, b = cyy
    if not all(free_of(k, Y, YP) for k in (a, b, c)):
        return None
    return a, b, c


def linear_shortcut(ode: Ode, seed=0) -> FactorResult | None:
    """Linear ODEs: ``mu = y'/b`` when ``b'/b - 2a`` vanishes; ``None`` if not linear with ``b != 0``."""
    abc = _linear_coeffs(ode)
    if abc is None:
        return None
    a, b, _ = abc
    if b == 0:
        return None
    cond = normalize(sp.diff(b, X) / b - 2 * a)
    t = decide(cond, seed)
    if t is Tri.UNKNOWN:
        return FactorResult.inconclusive("could not decide b'/b - 2a = 0", ansatz=AnsatzKind.XYP)
    if t is Tri.NONZERO:
        return FactorResult.not_exists("b'/b - 2a != 0", ansatz=AnsatzKind.XYP)
    mu = normalize(YP / b)
    verdict = verify_factor(ode, mu, seed=seed)
    if not verdict.exact:
        return FactorResult.not_exists("y'/b rejected by the exactness gate", ansatz=AnsatzKind.XYP)
    return FactorResult(Status.FOUND, AnsatzKind.XYP, mu, "Linear", verdict=verdict)


# ------------------------------------------------------------------ case ladder for calF


def upsilon_of(ode: Ode) -> sp.Expr:
    return _d(ode.phi, Y)


def _factors_where(e, pred):
    _, facs = multiplicative_factors(e)
    out = sp.Integer(1)
    for base, k in facs:
        if pred(base):
            out *= base**k
    return normalize(out)


def pure_yp_part(upsilon):
    """Product of the factors of ``upsilon`` that depend on y' but not on y."""
    return _factors_where(upsilon, lambda b: not free_of(b, YP) and free_of(b, Y))


def pure_y_part(upsilon):
    """Product of the factors of ``upsilon`` that depend on y but not on y'."""
    return _factors_where(upsilon, lambda b: not free_of(b, Y) and free_of(b, YP))


def calF_case_A(work: CaseWork):
    ups = work.upsilon
    test = _d(_d(ups, Y) / ups, YP)
    if _is_zero(test, work.seed, "d/dy' (Upsilon_y/Upsilon)"):
        return None
    work.case = "A"
    work.calF = normalize(1 / pure_yp_part(ups))
    return work.calF


def calF_case_C(work: CaseWork):
    """``calF = (p' + y') w / Upsilon``; ``None`` routes to Case D (``H = 0``) or E/F (``H`` constant)."""
    ups = work.upsilon
    w = pure_y_part(ups)
    work.w = w
    h = normalize(sp.diff(w, Y) / w)
    work.h_fun = h
    if _is_zero(h, work.seed, "H"):
        return None
    if _is_zero(_d(h, Y), work.seed, "H_y"):
        if not free_of(h, X, Y, YP):
            raise LadderStop("H is y-free but not constant")
        work.h_const = h
        return None
    work.case = "C"
    wx, wy = sp.diff(w, X), sp.diff(w, Y)
    pp = normalize((sp.diff(w, X, Y) * w - wx * wy) / (sp.diff(w, Y, 2) * w - wy**2))
    if not (_indep(pp, Y, work.seed) and _indep(pp, YP, work.seed)):
        raise LadderStop("p' is not a function of x alone")
    work.p_prime = pp
    calF = normalize((pp + YP) * w / ups)
    if not _indep(calF, Y, work.seed):
        raise LadderStop("calF depends on y")
    work.calF = calF
    return calF


def _solve_linear_u(e, seed, what):
    """Solve ``e0 + e1*u = 0`` identically in y' for an x-only ``u``."""
    e = normalize(e)
    e1 = _d(e, U)
    if not _is_zero(_d(e1, U), seed, "second u-derivative"):
        raise LadderStop(f"{what} is not linear in p'")
    e0 = normalize(e.subs(U, 0))
    if _is_zero(e1, seed, f"p'-coefficient of {what}"):
        if _is_zero(e0, seed, what):
            raise LadderStop(f"{what} leaves p' undetermined")
        raise LadderStop(f"{what} is inconsistent")
    u = normalize(-e0 / e1)
    if not (_indep(u, YP, seed) and _indep(u, Y, seed)):
        raise LadderStop(f"p' from {what} depends on y or y'")
    return u


def pprime_case_D(work: CaseWork, ode: Ode):
    """``p'`` when ``H = 0``; returns the string ``"Linear"`` for the degenerate linear branch."""
    seed = work.seed
    lam = normalize(1 / work.upsilon)
    psi = normalize(ode.phi / work.upsilon - Y)
    work.lam, work.psi = lam, psi
    if not _indep(psi, Y, seed):
        raise LadderStop("Psi depends on y")
    work.case = "D"
    alpha = _d(lam, YP)
    beta = normalize(sp.diff(lam, X, YP) + sp.diff(psi, YP, 2))
    gamma = normalize(sp.diff(lam, X) + 2 * sp.diff(psi, YP))
    a0 = _is_zero(alpha, seed, "Lambda_y'")
    b0 = _is_zero(beta, seed, "Lambda_xy' + Psi_y'y'")
    if a0 and b0:
        if _is_zero(gamma, seed, "Lambda_x + 2 Psi_y'"):
            work.case = "Linear"
            return "Linear"
        raise LadderStop("p''-equation is inconsistent")
    if a0:
        pp = _solve_linear_u(beta * (YP + U) + gamma, seed, "p''-equation")
    else:
        rho = normalize(beta / alpha)
        sigma = normalize((beta * YP + gamma) / alpha)
        if not _indep(rho, YP, seed):
            pp = _solve_linear_u(_d(rho, YP) * U + _d(sigma, YP), seed, "y'-derivative of the p''-equation")
        else:
            if not _indep(sigma, YP, seed):
                raise LadderStop("p''-equation is inconsistent")
            v = -rho * U - sigma
            t = -sp.diff(rho, X) * U + rho * (rho * U + sigma) - sp.diff(sigma, X)
            eq4 = (
                lam * t
                + (sp.diff(lam, X, 2) + sp.diff(psi, YP, X)) * (YP + U)
                + (sp.diff(lam, X) + sp.diff(psi, YP)) * v
                + sp.diff(psi, X)
                - U
            )
            pp = _solve_linear_u(eq4, seed, "p'''-equation")
    work.p_prime = pp
    return pp


def pprime_case_E_F(work: CaseWork, ode: Ode) -> list:
    """Candidate ``p'`` values when ``H`` is a nonzero constant ``C1``."""
    seed = work.seed
    c1 = work.h_const
    ey = sp.exp(c1 * Y)
    lam = normalize(c1 * ey / work.upsilon)
    if not _indep(lam, Y, seed):
        raise LadderStop("Lambda depends on y")
    psi = normalize(lam * ode.phi - ey)
    if not _indep(psi, Y, seed):
        raise LadderStop("Psi depends on y")
    work.lam, work.psi = lam, psi
    work.case = "E"
    alpha = _d(lam, YP)
    lxy = sp.diff(lam, X, YP) + sp.diff(psi, YP, 2)
    b1 = normalize(YP * alpha * c1 + lam * c1 + lxy)
    g1 = normalize(2 * sp.diff(psi, YP) + sp.diff(lam, X) + YP * lxy)
    if _is_zero(alpha, seed, "Lambda_y'"):
        return [_solve_linear_u(U * b1 + g1, seed, "p''-equation")]
    rho = normalize(b1 / alpha)
    sigma = normalize(g1 / alpha)
    if not _indep(rho, YP, seed):
        return [_solve_linear_u(_d(rho, YP) * U + _d(sigma, YP), seed, "y'-derivative of the p''-equation")]
    if not _indep(sigma, YP, seed):
        raise LadderStop("p''-equation is inconsistent")
    work.case = "F"
    beta = V + c1 * U**2 + rho * U + sigma
    lhs = V * lam + (YP + U) * sp.diff(lam, X) + (YP + U) * U * lam * c1 + psi + (YP + U) * sp.diff(psi, YP)
    gamma = normalize(lhs - lam * beta)
    if not _indep(gamma, YP, seed):
        raise LadderStop("gamma depends on y'")
    work.beta, work.gamma = normalize(beta), gamma
    v_sol = normalize(-c1 * U**2 - rho * U - sigma)
    t_sol = normalize(sp.diff(v_sol, X) + sp.diff(v_sol, U) * v_sol)
    dgamma = sp.diff(gamma, X) + sp.diff(gamma, U) * V + sp.diff(gamma, V) * T
    cond = normalize((dgamma + c1 * U * gamma).subs({T: t_sol}).subs({V: v_sol}))
    if _is_zero(cond, seed, "d gamma/dx + C1 p' gamma"):
        raise LadderStop("Case F condition leaves p' undetermined")
    num = sp.numer(sp.together(cond))
    try:
        sols = sp.solve(num, U)
    except NotImplementedError:
        raise LadderStop("could not solve the Case F equation for p'", decided=False)
    out = [normalize(s) for s in sols if free_of(s, Y, YP)]
    if not out:
        raise LadderStop("Case F has no x-only p'")
    return out


# ------------------------------------------------------------------ mu_tilde by quadrature


def lemma2_phis(calF, ode: Ode):
    ups_f = normalize(sp.diff(ode.phi, Y) * calF)
    d_ups_f = _d(ups_f, YP)
    phi1 = normalize(ups_f - YP * d_ups_f)
    phi3 = normalize(-sp.diff(ode.phi * calF, YP))
    phi4 = _d(calF, YP)
    return phi1, d_ups_f, phi3, phi4


def mu_tilde_from_calF(calF, ode: Ode, seed=0, work: CaseWork | None = None):
    """``mu_tilde(x)`` from ``calF``; raises LadderStop when it does not exist or is out of reach."""
    phi1, phi2, phi3, phi4 = lemma2_phis(calF, ode)
    if work is not None:
        work.phis = (phi1, phi2, phi3, phi4)
    if not _is_zero(phi2, seed, "phi2"):
        integrand = (sp.diff(phi1, Y) - sp.diff(phi2, X)) / phi2
    elif not _is_zero(phi4, seed, "phi4"):
        integrand = (sp.diff(phi3, YP) - sp.diff(phi4, X)) / phi4
    else:
        raise LadderStop("phi2 and phi4 both vanish", decided=False)
    rng = random.Random(seed)
    if witnesses_dependence(integrand, Y, rng) or witnesses_dependence(integrand, YP, rng):
        raise LadderStop("mu_tilde integrand depends on y or y'")
    integrand = normalize(integrand)
    if not (_indep(integrand, Y, seed) and _indep(integrand, YP, seed)):
        raise LadderStop("mu_tilde integrand depends on y or y'")
    try:
        mt = exp_integral(integrand, X)
    except DependenceError:
        raise LadderStop("mu_tilde integrand depends on y or y'")
    if mt is None:
        raise LadderStop("no antiderivative for the mu_tilde integrand", decided=False)
    if work is not None:
        work.mu_tilde = mt
    return mt


# ------------------------------------------------------------------ orchestration


def _gate(calF, ode, work, label):
    mt = mu_tilde_from_calF(calF, ode, work.seed, work)
    mu = normalize(calF * mt)
    verdict = verify_factor(ode, mu, seed=work.seed)
    if not verdict.exact:
        raise LadderStop(f"case {label} candidate rejected by the exactness gate")
    return FactorResult(
        Status.FOUND, AnsatzKind.XYP, mu, label, verdict=verdict, diagnostics={"work": work}
    )


def find_mu_xprime(ode: Ode, seed=0) -> FactorResult:
    work = CaseWork(seed=seed)
    flags = {"missing_y": False, "linear": False}
    undecided: list[str] = []
    failures: list[str] = []

    def finish(res: FactorResult) -> FactorResult:
        res.diagnostics.setdefault("work", work)
        res.diagnostics["flags"] = flags
        return res

    def stop(e: LadderStop):
        (failures if e.decided else undecided).append(e.why)

    lin = linear_shortcut(ode, seed)
    if lin is not None:
        flags["linear"] = True
        work.case = "Linear"
        return finish(lin)

    ups = upsilon_of(ode)
    work.upsilon = ups
    if ups == 0 or decide(ups, seed) is Tri.ZERO:
        flags["missing_y"] = True
        for calF in (sp.Integer(1), YP):
            try:
                return finish(_gate(calF, ode, work, "B"))
            except LadderStop as e:
                stop(e)
        return finish(FactorResult.inconclusive("ODE is missing y", ansatz=AnsatzKind.XYP))

    # Case A, then the two Case B guesses
    try:
        calF = calF_case_A(work)
        if calF is not None:
            try:
                return finish(_gate(calF, ode, work, "A"))
            except LadderStop as e:
                stop(e)
                return finish(_failure(failures, undecided))
    except LadderStop as e:
        stop(e)
        return finish(_failure(failures, undecided))

    part = pure_yp_part(ups)
    for calF in (normalize(1 / part), normalize(YP / part)):
        try:
            return finish(_gate(calF, ode, work, "B"))
        except LadderStop as e:
            # a failed guess only means the other assumption must be pursued
            work.notes.append(f"case B guess {render(calF)}: {e.why}")

    try:
        if _is_zero(_d(ups, Y), seed, "Upsilon_y"):
            pp = pprime_case_D(work, ode)
            if pp == "Linear":
                flags["linear"] = True
                return finish(FactorResult.not_exists("degenerate linear branch without a linear-ODE factor", ansatz=AnsatzKind.XYP))
            candidates = [pp]
        else:
            calF = calF_case_C(work)
            if calF is not None:
                return finish(_gate(calF, ode, work, "C"))
            if work.h_const is None:
                raise LadderStop("Upsilon_y != 0 but H vanishes")
            candidates = pprime_case_E_F(work, ode)
    except LadderStop as e:
        stop(e)
        return finish(_failure(failures, undecided))

    label = work.case
    for pp in candidates:
        work.p_prime = pp
        calF = normalize((pp + YP) * work.w / ups)
        work.calF = calF
        try:
            return finish(_gate(calF, ode, work, label))
        except LadderStop as e:
            stop(e)
    return finish(_failure(failures, undecided))


def _failure(failures, undecided) -> FactorResult:
    if undecided:
        return FactorResult.inconclusive("; ".join(undecided), ansatz=AnsatzKind.XYP)
    return FactorResult.not_exists("; ".join(failures) or "no case applies", ansatz=AnsatzKind.XYP)
