"""Cached family runs shared across test modules."""
from __future__ import annotations

import functools
import random

from odemu.families import random_poly, xy_family, xyp_family  # noqa: F401

FAMILY_SIZE = 100


@functools.lru_cache(maxsize=None)
def solved_xy_family(n: int = FAMILY_SIZE):
    """``(ode, known_mu, result)`` for seeds ``0..n-1``; shared across test modules."""
    from odemu.pipeline import solve

    out = []
    for seed in range(n):
        ode, mu = xy_family(random.Random(seed))
        out.append((ode, mu, solve(ode, "xy", reduce=False, seed=seed)))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def solved_xyp_family(n: int = FAMILY_SIZE):
    """``(ode, known_mu, shape, result)`` from ``find_mu_xprime`` for seeds ``0..n-1``."""
    from odemu.mu_xprime import find_mu_xprime

    out = []
    for seed in range(n):
        ode, mu, shape = xyp_family(random.Random(1000 + seed))
        out.append((ode, mu, shape, find_mu_xprime(ode, seed=seed)))
    return tuple(out)
