"""Integrating factors mu(y, y') through the exchange of x and y."""
from __future__ import annotations

import sympy as sp

from .exactness import verify_factor
from .expr import X, Y, YP, Ode, normalize
from .mu_xprime import find_mu_xprime
from .results import AnsatzKind, FactorResult, Status


def _swap_vars(e, yp_image):
    """Simultaneous x -> y, y -> x, y' -> yp_image."""
    return e.xreplace({X: Y, Y: X, YP: yp_image}) if yp_image.is_Symbol else e.subs(
        {X: Y, Y: X, YP: yp_image}, simultaneous=True
    )


def swap_ode(ode: Ode) -> Ode:
    """Treat y as the independent variable: ``phi~ = -y'^3 phi(y, x, 1/y')``."""
    phi = _swap_vars(ode.phi, 1 / YP)
    return Ode(normalize(-(YP**3) * phi), ode.funcs)


def pull_back_mu(mu_swapped) -> sp.Expr:
    """A factor of the swapped ODE, expressed back in the original variables."""
    return normalize(_swap_vars(sp.sympify(mu_swapped), 1 / YP) / YP**2)


def find_mu_yprime(ode: Ode, seed=0) -> FactorResult:
    swapped = swap_ode(ode)
    res = find_mu_xprime(swapped, seed=seed)
    res.ansatz = AnsatzKind.YYP
    res.diagnostics["swapped_ode"] = swapped
    if res.status is not Status.FOUND:
        return res
    res.diagnostics["swapped_mu"] = res.mu
    mu = pull_back_mu(res.mu)
    verdict = verify_factor(ode, mu, seed=seed)
    if not verdict.exact:
        return FactorResult.inconclusive(
            "pulled-back factor rejected by the exactness gate", ansatz=AnsatzKind.YYP, diagnostics=res.diagnostics
        )
    res.mu = mu
    res.verdict = verdict
    return res
