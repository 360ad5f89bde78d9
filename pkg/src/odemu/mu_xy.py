"""Integrating factors mu(x, y) for y'' = a y'^2 + b y' + c."""
from __future__ import annotations

import random
from dataclasses import dataclass

import sympy as sp

from .calculus import antiderivative, collapse_exp, exp_integral
from .exactness import verify_factor
from .expr import X, Y, YP, Ode, Tri, free_of, is_identically_zero, normalize, poly_in
from .results import AnsatzKind, FactorResult, Status


@dataclass(frozen=True)
class PolyForm:
    a: sp.Expr
    b: sp.Expr
    c: sp.Expr
    funcs: tuple = ()

    def ode(self) -> Ode:
        return Ode(self.a * YP**2 + self.b * YP + self.c, self.funcs)


def extract_abc(ode: Ode) -> PolyForm | None:
    coeffs = poly_in(ode.phi, YP, 2)
    if coeffs is None:
        return None
    c, b, a = (coeffs + [sp.Integer(0)] * 3)[:3]
    return PolyForm(a, b, c, ode.funcs)


def _d(e, *v):
    return normalize(sp.diff(e, *v))


def _decide(cond, name, rng_seed):
    """``None`` when the condition vanishes, else a failure FactorResult."""
    t = is_identically_zero(cond, rng=_seeded(rng_seed))
    if t is Tri.ZERO:
        return None
    if t is Tri.NONZERO:
        return FactorResult.not_exists(f"{name} != 0", ansatz=AnsatzKind.XY)
    return FactorResult.inconclusive(f"could not decide {name} = 0", ansatz=AnsatzKind.XY)


def _seeded(seed):
    return random.Random(seed)


def solve_mu_xy(pf: PolyForm, seed=0) -> FactorResult:
    a, b, c = pf.a, pf.b, pf.c
    ode = pf.ode()
    work = {"a": a, "b": b, "c": c}
    ax = _d(a, X)
    split = normalize(2 * ax - _d(b, Y))
    t = is_identically_zero(split, rng=_seeded(seed))
    if t is Tri.UNKNOWN:
        return FactorResult.inconclusive("could not decide 2*a_x - b_y = 0", ansatz=AnsatzKind.XY, diagnostics=work)

    int_a = sp.Integer(0) if a == 0 else antiderivative(a, Y)
    if int_a is None:
        return FactorResult.inconclusive("no antiderivative for int(a, y)", ansatz=AnsatzKind.XY, diagnostics=work)
    i_aux = _d(int_a, X)
    work["i_aux"] = i_aux

    if t is Tri.NONZERO:
        work["case"] = "XY_A"
        phi_aux = normalize(_d(c, Y) - a * c - _d(b, X))
        upsilon = normalize((_d(a, X, X) + ax * b + _d(phi_aux, Y)) / split)
        work.update(phi_aux=phi_aux, upsilon=upsilon)
        for cond, name in (
            (_d(upsilon, Y) - ax, "Upsilon_y - a_x"),
            (_d(upsilon, X) + phi_aux + b * upsilon - upsilon**2, "Upsilon_x + phi + b*Upsilon - Upsilon^2"),
        ):
            fail = _decide(cond, name, seed)
            if fail is not None:
                fail.diagnostics = work
                return fail
        integrand = normalize(-upsilon + i_aux)
        if not free_of(integrand, Y, YP):
            return FactorResult.inconclusive("x-integrand is not free of y", ansatz=AnsatzKind.XY, diagnostics=work)
        ex = sp.Integer(0) if integrand == 0 else antiderivative(integrand, X)
        if ex is None:
            return FactorResult.inconclusive("no antiderivative for the x-integral", ansatz=AnsatzKind.XY, diagnostics=work)
        mu = collapse_exp(ex - int_a)
        verdict = verify_factor(ode, mu, seed=seed)
        if not verdict.exact:
            return FactorResult.inconclusive(
                f"candidate rejected by the exactness gate ({verdict.kind.value})", ansatz=AnsatzKind.XY, diagnostics=work
            )
        return FactorResult(Status.FOUND, AnsatzKind.XY, mu, "XY_A", verdict=verdict, diagnostics=work)

    work["case"] = "XY_B"
    phi_aux = normalize(_d(c, Y) - a * c)
    work["phi_aux"] = phi_aux
    fail = _decide(_d(a, X, X) - ax * b - _d(phi_aux, Y), "a_xx - a_x*b - phi_y", seed)
    if fail is not None:
        fail.diagnostics = work
        return fail
    coef_a = normalize(2 * i_aux - b)
    coef_b = normalize(phi_aux + i_aux * (b - i_aux) - _d(b - i_aux, X))
    if not (free_of(coef_a, Y, YP) and free_of(coef_b, Y, YP)):
        return FactorResult.not_exists("linear nu-ODE coefficients depend on y", ansatz=AnsatzKind.XY, diagnostics=work)
    template = collapse_exp(-int_a)
    work.update(nu_ode=(coef_a, coef_b), template=template)
    nus = linear_ode_catalog(coef_a, coef_b)
    if not nus:
        return FactorResult(
            Status.FOUND_UP_TO_LINEAR_ODE,
            AnsatzKind.XY,
            case_label="XY_B",
            linear_ode=(coef_a, coef_b),
            template=template,
            diagnostics=work,
        )
    found = []
    for nu in nus:
        mu = normalize(nu * template)
        verdict = verify_factor(ode, mu, seed=seed)
        if verdict.exact:
            found.append((mu, verdict))
    if not found:
        return FactorResult.inconclusive("catalog solutions rejected by the exactness gate", ansatz=AnsatzKind.XY, diagnostics=work)
    (mu, verdict), rest = found[0], found[1:]
    return FactorResult(
        Status.FOUND,
        AnsatzKind.XY,
        mu,
        "XY_B",
        verdict=verdict,
        extra_factors=[m for m, _ in rest],
        linear_ode=(coef_a, coef_b),
        template=template,
        diagnostics=work,
    )


def _char_solutions(r1, r2, disc, basis_real, basis_log):
    """Two independent solutions from characteristic roots."""
    if disc == 0:
        return [basis_real(r1), basis_log(r1)]
    return [basis_real(r1), basis_real(r2)]


POLY_DEGREE = 4


def linear_ode_catalog(coef_a, coef_b) -> list:
    """Up to two independent solutions of ``nu'' = A nu' + B nu`` from a small catalog."""
    A = normalize(coef_a)
    B = normalize(coef_b)
    if not (free_of(A, Y, YP) and free_of(B, Y, YP)):
        return []
    candidates: list = []
    if free_of(A, X) and free_of(B, X):
        disc = normalize(A**2 + 4 * B)
        if disc.is_number and disc < 0:
            alpha, beta = A / 2, sp.sqrt(-disc) / 2
            candidates = [sp.exp(alpha * X) * sp.cos(beta * X), sp.exp(alpha * X) * sp.sin(beta * X)]
        else:
            r1, r2 = (A + sp.sqrt(disc)) / 2, (A - sp.sqrt(disc)) / 2
            candidates = _char_solutions(
                r1, r2, disc, lambda q: sp.exp(q * X), lambda q: X * sp.exp(q * X)
            )
    elif B == 0:
        w = exp_integral(A, X)
        candidates = [sp.Integer(1)]
        if w is not None:
            second = antiderivative(w, X)
            if second is not None:
                candidates.append(second)
    else:
        alpha = normalize(A * X)
        beta = normalize(B * X**2)
        if free_of(alpha, X) and free_of(beta, X):
            # x^r: r^2 - (1 + alpha) r - beta = 0
            s = 1 + alpha
            disc = normalize(s**2 + 4 * beta)
            if disc.is_number and disc < 0:
                re_, im_ = s / 2, sp.sqrt(-disc) / 2
                candidates = [X**re_ * sp.cos(im_ * sp.log(X)), X**re_ * sp.sin(im_ * sp.log(X))]
            else:
                r1, r2 = (s + sp.sqrt(disc)) / 2, (s - sp.sqrt(disc)) / 2
                candidates = _char_solutions(r1, r2, disc, lambda q: X**q, lambda q: X**q * sp.log(X))
    out = _verified(candidates, A, B)
    if not out:
        out = _polynomial_solutions(A, B)
    return out


def _verified(candidates, A, B) -> list:
    out = []
    for nu in candidates:
        nu = normalize(nu)
        if nu == 0:
            continue
        residual = normalize(sp.diff(nu, X, 2) - A * sp.diff(nu, X) - B * nu)
        if is_identically_zero(residual) is Tri.ZERO:
            out.append(nu)
    return out


def _polynomial_solutions(A, B, max_degree: int = POLY_DEGREE) -> list:
    """A polynomial solution by undetermined coefficients, plus a second one by reduction of order."""
    if not (A.is_rational_function(X) and B.is_rational_function(X)) or (A.free_symbols | B.free_symbols) - {X}:
        return []
    cs = sp.symbols(f"c0:{max_degree + 1}")
    nu = sum(c * X**k for k, c in enumerate(cs))
    num = sp.fraction(sp.together(sp.diff(nu, X, 2) - A * sp.diff(nu, X) - B * nu))[0]
    eqs = sp.Poly(sp.expand(num), X).coeffs()
    sol = sp.solve(eqs, cs, dict=True)
    if not sol:
        return []
    nu1 = nu.subs(sol[0])
    free = [c for c in cs if nu1.has(c)]
    if not free:
        return []
    nu1 = nu1.subs({c: (1 if i == 0 else 0) for i, c in enumerate(free)})
    out = _verified([nu1], A, B)
    if not out:
        return []
    w = exp_integral(A, X)
    if w is not None:
        second = antiderivative(normalize(w / nu1**2), X)
        if second is not None:
            out += _verified([nu1 * second], A, B)
    return out
