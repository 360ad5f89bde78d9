import random

import mpmath
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from odemu.calculus import DependenceError, antiderivative, collapse_exp, exp_integral
from odemu.expr import X, Y, YP, FuncSym, normalize, parse_expr

F = FuncSym.parse("f(x)")
H = FuncSym.parse("h(y')")


def test_power_rule():
    assert antiderivative(YP, YP) == YP**2 / 2


def test_log_rule():
    assert antiderivative(1 / Y, Y) == sp.log(Y)


def test_opaque_function_not_found():
    assert antiderivative(H.applied(), YP) is None


def test_no_rule_returns_none():
    assert antiderivative(sp.exp(X**2), X) is None


@pytest.mark.parametrize(
    "text",
    [
        "exp(2*x+1) + cos(3*x) + 1/(2*x+1)^2",
        "2*x/(x^2+1)",
        "x*(x^2+1)^3",
        "1/(x^2-1)",
        "sin(x)*y + cos(x)*y'",
        "1/(x*ln(x))",
        "f(x)",
    ],
)
def test_differentiation_inverts(text):
    e = parse_expr(text, [F])
    r = antiderivative(e, X)
    assert r is not None
    assert normalize(sp.diff(r, X) - e) == 0


def test_exp_integral_zero():
    assert exp_integral(0, X) == 1


def test_exp_integral_formal_node():
    mu = exp_integral(F.applied(), X)
    assert mu == sp.exp(sp.Integral(F.applied(), X))
    assert normalize(sp.diff(mu, X) - F.applied() * mu) == 0


def test_exp_integral_collapses_log():
    assert exp_integral(-1 / X, X) == 1 / X


def test_exp_integral_rejects_other_variables():
    with pytest.raises(DependenceError):
        exp_integral(X * Y, X)


def test_collapse_exp():
    assert collapse_exp(2 * sp.log(X) + X) == X**2 * sp.exp(X)


polys = st.lists(st.integers(-4, 4), min_size=1, max_size=4).map(
    lambda cs: sum(c * X**k for k, c in enumerate(cs))
)


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_rational_antiderivatives_verify(p, q):
    e = p / (q * X + 1) if q != 0 else p
    r = antiderivative(e, X)
    if r is not None:
        assert normalize(sp.diff(r, X) - e) == 0


@settings(max_examples=40, deadline=None)
@given(polys, st.integers(0, 10**6))
def test_exp_integral_positive(p, seed):
    mu = exp_integral(p, X)
    assert mu is not None
    f = sp.lambdify(X, mu, modules="mpmath")
    rng = random.Random(seed)
    for _ in range(20):
        assert f(mpmath.mpf(rng.randint(-500, 500)) / 100) > 0
