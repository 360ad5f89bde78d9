"""Table-driven antiderivatives.

Only the rules below are tried; anything else returns ``None`` instead of a
guess. Every result is differentiated back and compared canonically before
it is returned.
"""
from __future__ import annotations

import sympy as sp
from sympy.core.function import AppliedUndef

from .expr import RESERVED, X, as_symbol, multiplicative_factors, normalize


class DependenceError(ValueError):
    """The integrand of an exponential integral depends on a second variable."""


def antiderivative(e, v):
    """Antiderivative of ``e`` with respect to ``v`` or ``None`` when no rule applies."""
    s = as_symbol(v)
    raw = sp.sympify(e)
    e = normalize(raw)
    try:
        r = _integrate(e, s, depth=0)
        if r is None and raw.is_Add:
            # the common denominator can hide summands that integrate separately
            r = _integrate_terms([normalize(t) for t in raw.args], s, depth=1)
    except (sp.PolynomialError, NotImplementedError, ZeroDivisionError):
        r = None
    if r is None:
        return None
    r = normalize(r)
    if normalize(sp.diff(r, s) - e) != 0:
        return None
    return r


def _linear_coeffs(arg, s):
    """``(a, b)`` with ``arg == a*s + b`` and ``a != 0``, else ``None``."""
    a = normalize(sp.diff(arg, s))
    if a == 0 or s in a.free_symbols:
        return None
    return a, normalize(arg - a * s)


def _integrate(e, s, depth):
    if depth > 6:
        return None
    if s not in e.free_symbols:
        return e * s
    r = _integrate_term(e, s)
    if r is not None:
        return r
    expanded = sp.expand(e)
    if expanded.is_Add:
        r = _integrate_terms([normalize(t) for t in expanded.args], s, depth + 1)
        if r is not None:
            return r
    grouped = _group_by_transcendental_part(e, s)
    if grouped is not None:
        r = _integrate_terms(grouped, s, depth + 1)
        if r is not None:
            return r
    return _integrate_rational(e, s, depth)


def _group_by_transcendental_part(e, s):
    """Split ``num/den`` by the non-polynomial factors of the numerator terms, or ``None``."""
    num, den = sp.fraction(e)
    groups: dict = {}
    for term in sp.Add.make_args(sp.expand(num)):
        poly_part, trans = [], []
        for f in sp.Mul.make_args(term):
            (poly_part if f.is_polynomial(s) else trans).append(f)
        key = sp.Mul(*trans)
        groups[key] = groups.get(key, 0) + sp.Mul(*poly_part)
    if len(groups) < 2:
        return None
    return [normalize(key * coeff / den) for key, coeff in groups.items()]


def _integrate_terms(terms, s, depth):
    parts = []
    for t in terms:
        r = _integrate(t, s, depth)
        if r is None:
            return None
        parts.append(r)
    return sp.Add(*parts)


def _integrate_rational(e, s, depth):
    num, den = sp.fraction(e)
    if s not in den.free_symbols:
        return None
    try:
        sp.Poly(num, s)
        sp.Poly(den, s)
    except sp.PolynomialError:
        return None
    pf = sp.apart(e, s)
    if pf == e or not pf.is_Add:
        return None
    parts = []
    for t in pf.args:
        r = _integrate_term(normalize(t), s)
        if r is None:
            return None
        parts.append(r)
    return sp.Add(*parts)


def _integrate_term(t, s):
    if s not in t.free_symbols:
        return t * s
    c, rest = t.as_independent(s, as_Add=False)
    r = _single(rest, s)
    if r is None:
        return None
    return c * r


def _single(rest, s):
    if rest == s:
        return s**2 / 2
    if rest.is_Pow and s not in rest.exp.free_symbols:
        lin = _linear_coeffs(rest.base, s)
        if lin is not None:
            a, _ = lin
            n = rest.exp
            if n == -1:
                return sp.log(rest.base) / a
            if (n + 1).is_zero:
                return None
            return rest.base ** (n + 1) / ((n + 1) * a)
    if isinstance(rest, (sp.exp, sp.sin, sp.cos)):
        lin = _linear_coeffs(rest.args[0], s)
        if lin is not None:
            a, _ = lin
            if isinstance(rest, sp.exp):
                return rest / a
            if isinstance(rest, sp.sin):
                return -sp.cos(rest.args[0]) / a
            return sp.sin(rest.args[0]) / a
    if isinstance(rest, AppliedUndef) and rest.args == (s,) and s == X:
        # formal antiderivative, only for arbitrary functions of x
        return sp.Integral(rest, s)
    if isinstance(rest, sp.Derivative) and isinstance(rest.expr, AppliedUndef) and set(rest.variables) == {s}:
        n = rest.derivative_count
        return rest.expr if n == 1 else sp.Derivative(rest.expr, (s, n - 1))
    return _chain_patterns(rest, s)


def _chain_patterns(rest, s):
    """``u'/u -> ln u`` and ``u' * u**n -> u**(n+1)/(n+1)``."""
    num, den = sp.fraction(rest)
    if s in den.free_symbols:
        dd = sp.diff(den, s)
        if dd != 0:
            q = normalize(num / dd)
            if s not in q.free_symbols:
                return q * sp.log(den)
    const, factors = multiplicative_factors(rest)
    for base, k in factors:
        if s not in base.free_symbols or s in k.free_symbols:
            continue
        db = sp.diff(base, s)
        if db == 0:
            continue
        q = normalize(rest / (base**k * db))
        if s in q.free_symbols:
            continue
        if k == -1:
            return q * sp.log(base)
        if (k + 1).is_zero:
            continue
        return q * base ** (k + 1) / (k + 1)
    return None


def collapse_exp(exponent) -> sp.Expr:
    """``exp(c*ln(u) + rest)`` -> ``u**c * exp(rest)`` for rational ``c``."""
    powers = sp.Integer(1)
    remaining = []
    for term in sp.Add.make_args(sp.expand(exponent)):
        c, rest = term.as_coeff_Mul()
        if isinstance(rest, sp.log) and c.is_Rational:
            powers *= rest.args[0] ** c
        else:
            remaining.append(term)
    return normalize(powers * sp.exp(sp.Add(*remaining)))


def exp_integral(integrand, v):
    """``exp(antiderivative(integrand, v))`` with ``exp``/``ln`` collapsed; ``None`` if not integrable."""
    s = as_symbol(v)
    integrand = normalize(integrand)
    others = (integrand.free_symbols & RESERVED) - {s}
    if others:
        raise DependenceError(f"integrand depends on {sorted(map(str, others))}")
    if integrand == 0:
        return sp.Integer(1)
    anti = antiderivative(integrand, s)
    if anti is None:
        return None
    return collapse_exp(anti)
