"""Random ODE generators with a known integrating factor."""
from __future__ import annotations

import random

import sympy as sp

from .expr import X, Y, YP, Ode, normalize


def _coef(rng: random.Random) -> sp.Rational:
    return sp.Rational(rng.choice([-1, 1]) * rng.randint(1, 5), rng.randint(1, 3))


def random_poly(rng: random.Random, v1, v2, deg: int, terms: int = 3) -> sp.Expr:
    monos = [v1**i * v2**j for i in range(deg + 1) for j in range(deg + 1 - i)]
    picked = rng.sample(monos, min(terms, len(monos)))
    return sp.Add(*[_coef(rng) * m for m in picked])


def xy_family(rng: random.Random):
    """``y'' = -(mu_y y'^2 + (mu_x + G_y) y' + G_x)/mu`` has the factor ``mu(x, y)``."""
    while True:
        mu = random_poly(rng, X, Y, 2, terms=2)
        g = random_poly(rng, X, Y, 3, terms=3)
        if mu.free_symbols and not mu.is_number:
            break
    phi = -(sp.diff(mu, Y) * YP**2 + (sp.diff(mu, X) + sp.diff(g, Y)) * YP + sp.diff(g, X)) / mu
    return Ode(normalize(phi)), normalize(mu)


def _g_shape(rng: random.Random, shape: str):
    p = random_poly(rng, X, X, 2, terms=2) if rng.random() < 0.8 else sp.Integer(0)
    s = Y + p
    g0 = random_poly(rng, X, X, 2, terms=1)
    if shape == "C":
        return rng.choice([s**3, s**4 / 2, sp.log(s), 1 / s]) + g0
    if shape == "D":
        return _coef(rng) * s**2 + _coef(rng) * s + g0
    return sp.exp(s) + _coef(rng) * s + g0


def xyp_family(rng: random.Random, shape: str | None = None):
    """``y'' = -(F_x + G_x + G_y y')/F_y'`` has the factor ``mu = F_y'``."""
    shape = shape or rng.choice("CDE")
    while True:
        f = random_poly(rng, X, YP, 3, terms=3)
        if sp.diff(f, YP, 2) != 0:
            break
    g = _g_shape(rng, shape)
    fy = sp.diff(f, YP)
    phi = -(sp.diff(f, X) + sp.diff(g, X) + sp.diff(g, Y) * YP) / fy
    return Ode(normalize(phi)), normalize(fy), shape
