import random

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from odemu.exactness import (
    ACCEPT_TOL,
    PROBE_POINTS,
    VerdictKind,
    check_zero,
    euler_residuals,
    first_integral,
    verify_factor,
)
from odemu.expr import X, Y, YP, YPP, FuncSym, Ode, free_of, normalize, parse_expr
from families import xy_family
from strategies import rational_functions

H = FuncSym.parse("h(y')")
G = FuncSym.parse("g(x)")
GON = "y'' = y'^2/y - sin(x)*y*y' - cos(x)*y^2"
GON2 = "y'' = y'^2/y + g(x)*p*y^p*y' + g'(x)*y^(p+1)"
K226 = "y'' = (x^2*y*y' + x*y^2)/y'"
K136 = "y'' = h(y')/(x-y)"


def euler_oracle(phi, mu):
    """Euler operator of ``mu*(y'' - phi)`` computed by sympy on a genuine function y(t).

    ``dL/dy - D dL/dy' + D^2 dL/dy''`` with D the total derivative; this shares no code
    with the residual formulas under test.
    """
    t = sp.Symbol("t")
    yf = sp.Function("yy")(t)
    d1, d2 = yf.diff(t), yf.diff(t, 2)
    lag = (mu * (YPP - phi)).subs({YPP: d2, YP: d1, Y: yf, X: t}, simultaneous=True)
    expr = sp.diff(lag, yf) - sp.diff(sp.diff(lag, d1), t) + sp.diff(sp.diff(lag, d2), t, 2)
    back = {
        yf.diff(t, 4): sp.Symbol("y4"),
        yf.diff(t, 3): sp.Symbol("y3"),
        d2: YPP,
        d1: YP,
        yf: Y,
        t: X,
    }
    for k, v in back.items():
        expr = expr.subs(k, v)
    return normalize(expr)


# ---------------------------------------------------------------- residuals


def test_residuals_trivial():
    r = euler_residuals(0, 1)
    assert (r.a_res, r.b_res) == (0, 0)


def test_residuals_gon():
    r = euler_residuals(Ode.parse(GON).phi, 1 / Y)
    assert (r.a_res, r.b_res) == (0, 0)


def test_residuals_phi_y():
    r = euler_residuals(Y, 1)
    assert (r.a_res, r.b_res) == (-1, 0)


def test_residual_of_negative_control_is_one_half():
    r = euler_residuals(Y**2 + X, YP / 2)
    assert (r.a_res, r.b_res) == (sp.Rational(1, 2), 0)


@pytest.mark.parametrize(
    "phi, mu",
    [
        (GON, "1/y"),
        (K226, "y'"),
        (K226, "x*y"),
        ("y'' = y^2 + x", "y'/2"),
        ("y'' = x*y'^2 + y", "exp(x)*y'"),
    ],
)
def test_residuals_agree_with_oracle(phi, mu):
    phi = Ode.parse(phi).phi
    mu = parse_expr(mu)
    r = euler_residuals(phi, mu)
    assert normalize(euler_oracle(phi, mu) - (r.a_res + YPP * r.b_res)) == 0


@settings(max_examples=15, deadline=None)
@given(rational_functions(), rational_functions())
def test_residuals_agree_with_oracle_random(phi, mu):
    if normalize(mu) == 0:
        return
    r = euler_residuals(phi, mu)
    assert normalize(euler_oracle(phi, mu) - (r.a_res + YPP * r.b_res)) == 0


# ---------------------------------------------------------------- gate


def test_verify_226():
    v = verify_factor(Ode.parse(K226), YP)
    assert v.kind is VerdictKind.EXACT and v.symbolic


def test_verify_negative_control():
    v = verify_factor(Ode.parse("y'' = y^2 + x"), YP / 2)
    assert v.kind is VerdictKind.NOT_EXACT
    assert v.numeric_max_abs == pytest.approx(0.5)
    assert v.point is not None


def test_verify_136_symbolic():
    ode = Ode.parse(K136, [H])
    v = verify_factor(ode, (YP - 1) / H.applied())
    assert v.kind is VerdictKind.EXACT and v.symbolic


def test_verify_numeric_mode_accepts_below_tolerance():
    ode = Ode.parse(K226)
    v = verify_factor(ode, YP, mode="numeric")
    assert v.kind is VerdictKind.EXACT and not v.symbolic
    assert v.numeric_max_abs < ACCEPT_TOL


def test_check_zero_undetermined_band():
    # a constant sitting between the accept and reject tolerances
    v = check_zero([sp.Rational(1, 10**7)])
    assert v.kind is VerdictKind.UNDETERMINED


def test_check_zero_symbolic_mode_needs_canonical_zero():
    e = sp.sin(X) ** 2 + sp.cos(X) ** 2 - 1
    assert check_zero([e], mode="symbolic").kind is VerdictKind.UNDETERMINED
    assert check_zero([e], mode="both").kind is VerdictKind.EXACT


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_verdicts_deterministic(seed):
    ode = Ode.parse("y'' = y^2 + x*y'")
    mu = X * YP + Y
    assert verify_factor(ode, mu, seed=seed) == verify_factor(ode, mu, seed=seed)


def test_probe_budget():
    assert PROBE_POINTS == 100


# ---------------------------------------------------------------- first integrals


def _differs_by_constant(a, b):
    return free_of(normalize(a - b), X, Y, YP)


def test_first_integral_gon():
    r = first_integral(Ode.parse(GON), 1 / Y)
    assert r is not None
    assert _differs_by_constant(r.r, sp.sin(X) * Y + YP / Y)
    assert str(r).endswith("+ C1 = 0")


def test_first_integral_trivial():
    r = first_integral(Ode.parse("y'' = 0"), 1)
    assert r.r == YP


def test_first_integral_gon2():
    ode = Ode.parse(GON2, [G])
    r = first_integral(ode, 1 / Y)
    assert r is not None
    p = sp.Symbol("p")
    assert _differs_by_constant(r.r, YP / Y - G.applied() * Y**p)


def test_first_integral_missing_antiderivative():
    ode = Ode.parse("y'' = h(y')", [H])
    assert first_integral(ode, 1 / H.applied()) is None


def _check_first_integral(ode, mu, r):
    assert normalize(sp.diff(r, YP) - mu) == 0
    total = sp.diff(r, X) + YP * sp.diff(r, Y) + ode.phi * sp.diff(r, YP)
    v = check_zero([total])
    assert v.kind is VerdictKind.EXACT


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_first_integral_invariants_on_family(seed):
    ode, mu = xy_family(random.Random(seed))
    assert verify_factor(ode, mu, seed=seed).exact
    fi = first_integral(ode, mu, seed=seed)
    if fi is not None:
        _check_first_integral(ode, mu, fi.r)
