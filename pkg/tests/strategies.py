"""Hypothesis strategies for expressions over x, y, y'."""
from __future__ import annotations

import sympy as sp
from hypothesis import strategies as st

from odemu.expr import X, Y, YP

variables = st.sampled_from([X, Y, YP])
rationals = st.builds(
    sp.Rational,
    st.integers(-9, 9),
    st.integers(1, 9),
)
leaves = st.one_of(variables, rationals)


def _extend(children):
    return st.one_of(
        st.builds(lambda a, b: a + b, children, children),
        st.builds(lambda a, b: a * b, children, children),
        st.builds(lambda a, b: a - b, children, children),
        st.builds(lambda a, k: a**k, children, st.integers(-2, 3)),
    )


rational_exprs = st.recursive(leaves, _extend, max_leaves=8).filter(
    lambda e: not e.has(sp.zoo, sp.nan, sp.oo)
)


def _extend_transcendental(children):
    return st.one_of(
        _extend(children),
        st.builds(sp.exp, children),
        st.builds(lambda a: sp.log(a), variables),
        st.builds(sp.sin, variables),
    )


exprs = st.recursive(leaves, _extend_transcendental, max_leaves=7).filter(
    lambda e: not e.has(sp.zoo, sp.nan, sp.oo)
)


@st.composite
def rational_functions(draw):
    """A quotient of two small polynomials in x, y, y' with a nonzero denominator."""
    monos = [X, Y, YP, X * Y, Y * YP, X * YP, X**2, YP**2, sp.Integer(1)]
    num = sum(draw(rationals) * m for m in draw(st.lists(st.sampled_from(monos), min_size=1, max_size=3)))
    den = sum(draw(rationals) * m for m in draw(st.lists(st.sampled_from(monos), min_size=1, max_size=3)))
    if den == 0:
        den = sp.Integer(1)
    return num / den
