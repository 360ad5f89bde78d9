"""Expression layer: parsing, rendering, canonical normalization and probing.

Expressions are plain sympy trees over the reserved symbols ``x``, ``y``,
``y'`` (and ``y''`` inside verification identities), named parameters,
declared arbitrary functions and the formal antiderivative node
``Integral(f(x), x)``.
"""
from __future__ import annotations

import enum
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import mpmath
import sympy as sp
from sympy.core.function import AppliedUndef
from sympy.printing.str import StrPrinter

X = sp.Symbol("x")
Y = sp.Symbol("y")
YP = sp.Symbol("y'")
YPP = sp.Symbol("y''")

PROBE_DPS = 30
NONZERO_TOL = 1e-6
DEN_TOL = 1e-6
RECHECK_TOL = 1e-10


class VarId(enum.Enum):
    X = "x"
    Y = "y"
    YP = "y'"
    YPP = "y''"

    @property
    def symbol(self) -> sp.Symbol:
        return _VAR_SYMBOLS[self]


_VAR_SYMBOLS = {VarId.X: X, VarId.Y: Y, VarId.YP: YP, VarId.YPP: YPP}
RESERVED = frozenset(_VAR_SYMBOLS.values())


def as_symbol(v) -> sp.Symbol:
    if isinstance(v, VarId):
        return v.symbol
    if isinstance(v, sp.Symbol):
        return v
    if isinstance(v, str):
        return VarId(v).symbol
    raise TypeError(f"not a variable: {v!r}")


@dataclass(frozen=True)
class FuncSym:
    """A declared arbitrary function such as ``h(y')`` or ``f(x)``."""

    name: str
    var: VarId

    @classmethod
    def parse(cls, text: str) -> "FuncSym":
        m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z_0-9]*)\s*\(\s*(x|y'?)\s*\)\s*", text)
        if not m:
            raise ParseError(f"bad function declaration {text!r}", 0)
        return cls(m.group(1), VarId(m.group(2)))

    @property
    def func(self) -> sp.FunctionClass:
        return sp.Function(self.name)

    def applied(self) -> sp.Expr:
        return self.func(self.var.symbol)

    @property
    def dependence(self) -> frozenset:
        return frozenset({self.var})

    def __str__(self) -> str:
        return f"{self.name}({self.var.value})"


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


class SamplingError(ArithmeticError):
    """A probe point hit a pole; the caller should resample."""


class Tri(enum.Enum):
    ZERO = "zero"
    NONZERO = "nonzero"
    UNKNOWN = "unknown"


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<prime>')|(?P<op>[-+*/^(),=]))"
)
_BUILTINS = {
    "exp": sp.exp,
    "ln": sp.log,
    "log": sp.log,
    "sin": sp.sin,
    "cos": sp.cos,
    "sqrt": sp.sqrt,
}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, decls: Iterable[FuncSym], allow_ypp: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.funcs = {d.name: d for d in decls}
        self.allow_ypp = allow_ypp

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, val: str):
        kind, v, pos = self.take()
        if v != val:
            raise ParseError(f"expected {val!r}, got {v or 'end of input'!r}", pos)

    def parse(self) -> sp.Expr:
        e = self.sum()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {v!r}", pos)
        return e

    def sum(self):
        e = self.product()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.product()
            e = e + rhs if op == "+" else e - rhs
        return e

    def product(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                e = e * rhs
            else:
                if rhs == 0:
                    raise ParseError("division by literal zero", self.peek()[2])
                e = e / rhs
        return e

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            return base ** self.unary()  # right associative
        return base

    def primes(self) -> int:
        n = 0
        while self.peek()[0] == "prime":
            self.take()
            n += 1
        return n

    def atom(self):
        kind, v, pos = self.take()
        if kind == "num":
            if "." in v:
                raise ParseError("floating-point constants are not allowed", pos)
            return sp.Integer(int(v))
        if v == "(":
            e = self.sum()
            self.expect(")")
            return e
        if kind != "name":
            raise ParseError(f"unexpected token {v or 'end of input'!r}", pos)
        nprimes = self.primes()
        if v == "y":
            if nprimes == 0:
                return Y
            if nprimes == 1:
                return YP
            if nprimes == 2 and self.allow_ypp:
                return YPP
            raise ParseError("y'' is only allowed in verification identities", pos)
        if v == "x" and nprimes == 0:
            return X
        if self.peek()[1] == "(":
            self.take()
            if v == "int" and nprimes == 0:
                integrand = self.sum()
                self.expect(",")
                var = self.atom()
                self.expect(")")
                if var not in RESERVED:
                    raise ParseError("int() needs a variable of integration", pos)
                return sp.Integral(integrand, var)
            arg = self.sum()
            self.expect(")")
            if v in _BUILTINS and nprimes == 0:
                return _BUILTINS[v](arg)
            if v not in self.funcs:
                raise ParseError(f"undeclared function symbol {v!r}", pos)
            app = sp.Function(v)(arg)
            if nprimes:
                if not isinstance(arg, sp.Symbol):
                    raise ParseError("derivatives need a plain variable argument", pos)
                return sp.Derivative(app, (arg, nprimes))
            return app
        if nprimes:
            raise ParseError(f"primes are only allowed on y or declared functions", pos)
        if v in self.funcs:
            raise ParseError(f"function {v!r} used without an argument", pos)
        return sp.Symbol(v)


def parse_expr(text: str, decls: Iterable[FuncSym] = (), *, allow_ypp: bool = False) -> sp.Expr:
    """Parse the ASCII grammar into a normalized expression."""
    return normalize(_Parser(text, decls, allow_ypp).parse())


# -------------------------------------------------------------- rendering


class _Printer(StrPrinter):
    def _print_Pow(self, expr, rational=False):
        return super()._print_Pow(expr, rational).replace("**", "^")

    def _print_log(self, expr):
        return "ln(%s)" % self._print(expr.args[0])

    def _print_Derivative(self, expr):
        f = expr.expr
        if isinstance(f, AppliedUndef) and len(f.args) == 1 and len(expr.variables) == expr.derivative_count:
            if set(expr.variables) == {f.args[0]}:
                return "%s%s(%s)" % (f.func.__name__, "'" * expr.derivative_count, self._print(f.args[0]))
        return super()._print_Derivative(expr)

    def _print_Integral(self, expr):
        if len(expr.limits) == 1 and len(expr.limits[0]) == 1:
            return "int(%s, %s)" % (self._print(expr.function), self._print(expr.limits[0][0]))
        return super()._print_Integral(expr)

    def _print_Rational(self, expr):
        return "%d/%d" % (expr.p, expr.q)

    def _print_Exp1(self, expr):
        return "exp(1)"

    def _print_Float(self, expr):
        raise ValueError("floating-point leaf in expression")


def render(e) -> str:
    return _Printer({"order": None}).doprint(sp.sympify(e))


# ---------------------------------------------------------- normalization

_NON_ARITH = (sp.exp, sp.log, sp.sin, sp.cos, AppliedUndef, sp.Derivative, sp.Integral, sp.Subs)


def _split_symbolic_powers(e: sp.Expr) -> tuple[sp.Expr, dict]:
    """Replace ``b**(n + s)`` with symbolic ``s`` by ``b**n * D**k`` (``D`` a dummy for ``b**s0``)."""
    table: dict = {}
    back: dict = {}

    def gen(base, s):
        key = (base, s)
        if key not in table:
            d = sp.Dummy("g")
            table[key] = d
            back[d] = base**s
        return table[key]

    def split(base, exponent):
        n, rest = exponent.as_coeff_Add()
        out = sp.Integer(1)
        if n != 0:
            if n.is_Integer:
                out = base**n
            else:
                rest = rest + n
        for term in sp.Add.make_args(rest):
            k, s = term.as_coeff_Mul()
            if k.is_Integer:
                out *= gen(base, s) ** k
            elif k.is_Rational:
                out *= gen(base, s / k.q) ** k.p
            else:
                out *= gen(base, term)
        return out

    def visit(node):
        if node.is_Atom:
            return node
        if node.is_Pow and not node.exp.is_Number:
            return split(visit(node.base), node.exp)
        if isinstance(node, sp.exp):
            # exp(a + b) is split like E**a * E**b so the generators do not depend on the input form
            return split(sp.E, sp.expand(node.args[0]))
        if isinstance(node, _NON_ARITH):
            return node
        return node.func(*[visit(a) for a in node.args])

    return visit(e), back


def _normalize_arguments(e: sp.Expr) -> sp.Expr:
    """Normalize the arguments of function nodes bottom-up."""
    if e.is_Atom:
        return e
    if isinstance(e, (sp.exp, sp.log, sp.sin, sp.cos)):
        return e.func(normalize(e.args[0]))
    if isinstance(e, sp.Integral):
        return sp.Integral(normalize(e.function), *e.limits)
    if isinstance(e, (AppliedUndef, sp.Derivative, sp.Subs)):
        return _clean_subs(e)
    return e.func(*[_normalize_arguments(a) for a in e.args])


def _clean_subs(e):
    """Collapse ``Subs(D(f(v), v), v, w)`` into ``D(f(w), w)`` when ``w`` is a symbol."""

    def fix(node):
        if isinstance(node, sp.Subs) and all(isinstance(p, sp.Symbol) for p in node.point):
            return node.expr.xreplace(dict(zip(node.variables, node.point)))
        return node

    return e.replace(lambda n: isinstance(n, sp.Subs), fix)


def normalize(e) -> sp.Expr:
    """Canonical form: a single reduced fraction, expanded numerator and denominator."""
    e = sp.sympify(e)
    if e.has(sp.Float):
        raise ValueError("floating-point constants are not allowed")
    if e.is_Atom:
        return e
    e = _normalize_arguments(e)
    e, back = _split_symbolic_powers(e)
    e = sp.cancel(sp.together(e))
    return e.xreplace(back) if back else e


# -------------------------------------------------------- basic calculus


def partial_diff(e, v) -> sp.Expr:
    return normalize(sp.diff(e, as_symbol(v)))


def _key_to_symbol(k):
    if isinstance(k, (VarId, str)) and not isinstance(k, sp.Basic):
        try:
            return as_symbol(k)
        except ValueError:
            return sp.Symbol(k)
    return k


def substitute(e, bindings: Mapping) -> sp.Expr:
    """Simultaneous substitution of variables and/or arbitrary functions, then normalize."""
    e = sp.sympify(e)
    sym_map = {}
    func_map = {}
    for k, val in bindings.items():
        if isinstance(k, FuncSym):
            func_map[k.name] = (k.var.symbol, sp.sympify(val))
        elif isinstance(k, sp.FunctionClass):
            func_map[k.__name__] = (sp.Symbol("t"), sp.sympify(val))
        else:
            sym_map[_key_to_symbol(k)] = sp.sympify(val)
    if func_map:
        e = instantiate_functions(e, func_map)
    if sym_map:
        if all(isinstance(v, sp.Symbol) for v in sym_map.values()):
            e = e.xreplace(sym_map)
        else:
            e = e.subs(sym_map, simultaneous=True)
    return normalize(_clean_subs(e))


def instantiate_functions(e: sp.Expr, func_map: Mapping[str, tuple]) -> sp.Expr:
    """Replace applied arbitrary functions ``f(arg)`` by ``body[var := arg]`` and evaluate."""

    def is_target(node):
        return isinstance(node, AppliedUndef) and node.func.__name__ in func_map

    def repl(node):
        var, body = func_map[node.func.__name__]
        return body.xreplace({var: node.args[0]}) if isinstance(node.args[0], sp.Symbol) else body.subs(var, node.args[0])

    return e.replace(is_target, repl).doit()


def depends_on(e, v) -> bool:
    return as_symbol(v) in sp.sympify(e).free_symbols


def free_of(e, *vs) -> bool:
    fs = sp.sympify(e).free_symbols
    return not any(as_symbol(v) in fs for v in vs)


def multiplicative_factors(e) -> tuple[sp.Expr, list[tuple[sp.Expr, sp.Expr]]]:
    """Split ``e`` into ``(constant, [(base, exponent), ...])`` with polynomial bases square-free split."""
    e = normalize(e)
    if e == 0:
        return sp.Integer(0), []
    num, den = sp.fraction(e)
    const = sp.Integer(1)
    merged: dict = {}
    for part, sign in ((num, 1), (den, -1)):
        c, facs = _factor_part(part)
        const *= c**sign
        for base, ex in facs:
            merged[base] = merged.get(base, 0) + sign * ex
    out = [(b, sp.nsimplify(k)) for b, k in merged.items() if k != 0]
    out.sort(key=lambda be: sp.default_sort_key(be[0]))
    return const, out


def _factor_part(part: sp.Expr):
    split, back = _split_symbolic_powers(part)
    try:
        c, facs = sp.factor_list(split)
    except (sp.PolynomialError, TypeError, NotImplementedError):
        c, facs = sp.Integer(1), [(split, 1)]
    pieces = []
    for f, k in facs:
        f = f.xreplace(back)
        for sub in sp.Mul.make_args(f):
            if sub.is_Number:
                c *= sub**k
                continue
            if sub.is_Pow and not isinstance(sub, sp.exp):
                b, ex = sub.base, sub.exp
            else:
                b, ex = sub, sp.Integer(1)
            pieces.append((b, ex * k))
    if not c.is_Number:
        extra = c
        c = sp.Integer(1)
        for sub in sp.Mul.make_args(extra):
            if sub.is_Number:
                c *= sub
            else:
                b, ex = sub.as_base_exp() if not isinstance(sub, sp.exp) else (sub, 1)
                pieces.append((b, sp.sympify(ex)))
    return c, pieces


class NotPolynomial(Exception):
    pass


def poly_in(e, v, max_deg: int):
    """Coefficients ``[c0, c1, ...]`` of ``e`` as a polynomial in ``v`` of degree at most ``max_deg``.

    Returns ``None`` when ``e`` is not such a polynomial.
    """
    s = as_symbol(v)
    e = normalize(e)
    if e == 0:
        return [sp.Integer(0)]
    num, den = sp.fraction(e)
    if s in den.free_symbols:
        return None
    split, back = _split_symbolic_powers(sp.expand(num))
    try:
        p = sp.Poly(split, s)
    except sp.PolynomialError:
        return None
    if p.degree() > max_deg:
        return None
    coeffs = [normalize(p.coeff_monomial(s**k).xreplace(back) / den) for k in range(p.degree() + 1)]
    if any(s in c.free_symbols for c in coeffs):
        return None
    return coeffs


# ------------------------------------------------------ evaluation/probing


def _free_params(e: sp.Expr) -> set:
    return {s for s in e.free_symbols if s not in RESERVED}


def _applied_funcs(e: sp.Expr) -> set:
    return {a.func.__name__ for a in e.atoms(AppliedUndef)}


def _random_rational(rng: random.Random) -> sp.Rational:
    return sp.Rational(rng.choice((-1, 1)) * rng.randint(1, 9), rng.randint(1, 9))


def random_instantiation(exprs: Sequence[sp.Expr], rng: random.Random) -> tuple[dict, dict]:
    """Random degree-3 polynomials (nonzero coefficients) for functions, rationals for parameters."""
    t = sp.Symbol("t")
    funcs = set().union(*(_applied_funcs(e) for e in exprs)) if exprs else set()
    params = set().union(*(_free_params(e) for e in exprs)) if exprs else set()
    func_map = {}
    for name in sorted(funcs):
        func_map[name] = (t, sum(_random_rational(rng) * t**k for k in range(4)))
    param_map = {p: _random_rational(rng) for p in sorted(params, key=str)}
    return func_map, param_map


def _random_coordinate(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-500, 500), 100)


@dataclass
class ProbeResult:
    values: list  # per expression, max |value| over points
    points: list
    failures: int = 0
    worst_point: dict | None = None


def _stable_value(f, pt, v, max_dps: int = 16 * PROBE_DPS):
    """Re-evaluate at doubling precision until the value settles.

    Cancellation noise shrinks as precision grows while genuine values do not.
    """
    dps = PROBE_DPS
    while dps < max_dps:
        dps *= 2
        with mpmath.workdps(dps):
            w = f(*[mpmath.mpf(p.numerator) / p.denominator for p in pt])
        if abs(w - v) <= 1e-3 * abs(w) or abs(w) <= RECHECK_TOL:
            return w
        v = w
    return v


def _denominators(e: sp.Expr) -> list:
    """Bases raised to negative powers anywhere in ``e`` (candidate poles)."""
    out = {p.base for p in e.atoms(sp.Pow) if p.exp.is_negative}
    return sorted(out, key=sp.default_sort_key) or [sp.Integer(1)]


class Prober:
    """Evaluates expressions at random points after instantiating functions and parameters.

    Everything is driven by one seeded ``random.Random`` so probing is reproducible.
    """

    def __init__(self, exprs: Sequence[sp.Expr], rng: random.Random, instantiations: int = 4):
        self.exprs = [sp.sympify(e) for e in exprs]
        self.rng = rng
        self.instantiations = max(1, instantiations)

    def _compile(self, func_map, param_map):
        variables = [X, Y, YP, YPP]
        compiled = []
        for e in self.exprs:
            inst = instantiate_functions(e, func_map) if func_map else e
            inst = inst.xreplace(param_map)
            inst = _clean_subs(inst).doit()
            compiled.append(
                (
                    sp.lambdify(variables, inst, modules="mpmath", cse=True),
                    sp.lambdify(variables, sp.Tuple(*_denominators(inst)), modules="mpmath"),
                )
            )
        return compiled

    def run(self, npoints: int, max_resample: int = 50, stop_above: float | None = None) -> ProbeResult:
        """Probe up to ``npoints`` points; stop early once a value exceeds ``stop_above``."""
        per_inst = -(-npoints // self.instantiations)
        maxima = [0.0] * len(self.exprs)
        points = []
        worst = None
        worst_val = -1.0
        failures = 0
        fixed = None
        with mpmath.workdps(PROBE_DPS):
            done = 0
            while done < npoints:
                func_map, param_map = random_instantiation(self.exprs, self.rng)
                try:
                    if not (func_map or param_map) and fixed is not None:
                        compiled = fixed
                    else:
                        compiled = self._compile(func_map, param_map)
                    if not (func_map or param_map):
                        fixed = compiled
                except (ZeroDivisionError, ValueError, TypeError):
                    failures += 1
                    if failures > max_resample:
                        break
                    continue
                for _ in range(min(per_inst, npoints - done)):
                    vals = None
                    for _attempt in range(max_resample):
                        pt = [_random_coordinate(self.rng) for _ in range(4)]
                        args = [mpmath.mpf(p.numerator) / p.denominator for p in pt]
                        try:
                            vals = []
                            for f, d in compiled:
                                if any(abs(q) < DEN_TOL for q in d(*args)):
                                    raise SamplingError
                                v = f(*args)
                                if not mpmath.isfinite(v):
                                    raise SamplingError
                                if abs(v) > RECHECK_TOL:
                                    v = _stable_value(f, pt, v)
                                vals.append(float(abs(v)))
                            break
                        except (SamplingError, ZeroDivisionError, ValueError, OverflowError, TypeError):
                            vals = None
                            failures += 1
                    done += 1
                    if vals is None:
                        continue
                    point = {"x": pt[0], "y": pt[1], "y'": pt[2], "y''": pt[3]}
                    point.update({str(k): Fraction(int(v.p), int(v.q)) for k, v in param_map.items()})
                    points.append(point)
                    for i, v in enumerate(vals):
                        maxima[i] = max(maxima[i], v)
                    if max(vals) > worst_val:
                        worst_val = max(vals)
                        worst = point
                    if stop_above is not None and worst_val > stop_above:
                        return ProbeResult(maxima, points, failures, worst)
        return ProbeResult(maxima, points, failures, worst)


def _mp(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def witnesses_dependence(e, var: sp.Symbol, rng: random.Random, npoints: int = 6) -> bool:
    """True when ``e`` provably changes with ``var``: two probes differing only in ``var`` disagree.

    ``False`` proves nothing; it only means no witness was found.
    """
    e = sp.sympify(e)
    if not depends_on(e, var):
        return False
    prober = Prober([e], rng, instantiations=1)
    func_map, param_map = random_instantiation(prober.exprs, rng)
    try:
        (f, _), = prober._compile(func_map, param_map)
    except (ZeroDivisionError, ValueError, TypeError):
        return False
    k = [X, Y, YP, YPP].index(var)
    with mpmath.workdps(PROBE_DPS):
        for _ in range(npoints):
            args = [_mp(_random_coordinate(rng)) for _ in range(4)]
            other = list(args)
            other[k] = _mp(_random_coordinate(rng))
            try:
                a, b = f(*args), f(*other)
            except (ZeroDivisionError, ValueError, OverflowError, TypeError):
                continue
            if not (mpmath.isfinite(a) and mpmath.isfinite(b)):
                continue
            if abs(a - b) > NONZERO_TOL * (1 + abs(a) + abs(b)):
                return True
    return False


def eval_at(e, point: Mapping, func_impls: Mapping | None = None):
    """Evaluate at a point; exact ``Fraction`` for rational results, ``float`` otherwise."""
    e = sp.sympify(e)
    if func_impls:
        fmap = {}
        for k, body in func_impls.items():
            if isinstance(k, FuncSym):
                fmap[k.name] = (k.var.symbol, sp.sympify(body))
            else:
                fmap[str(k)] = (sp.Symbol("t"), sp.sympify(body))
        e = instantiate_functions(e, fmap)
    subs = {}
    for k, v in point.items():
        sym = _key_to_symbol(k) if not isinstance(k, sp.Symbol) else k
        subs[sym] = sp.Rational(Fraction(v).numerator, Fraction(v).denominator)
    e = normalize(e) if not e.has(sp.Integral, sp.Derivative) else e.doit()
    num, den = sp.fraction(sp.together(e))
    dval = den.xreplace(subs)
    if dval == 0 or (dval.is_number and abs(complex(dval.evalf(PROBE_DPS))) < DEN_TOL and not dval.is_Rational):
        raise SamplingError(f"denominator vanishes at {dict(point)}")
    val = e.xreplace(subs)
    if val.has(sp.zoo, sp.nan, sp.oo):
        raise SamplingError(f"pole at {dict(point)}")
    if val.is_Rational:
        return Fraction(int(val.p), int(val.q))
    c = complex(val.evalf(PROBE_DPS))
    return c.real if c.imag == 0 else c


def is_identically_zero(e, rng: random.Random | None = None, npoints: int = 25) -> Tri:
    e = normalize(e)
    if e == 0:
        return Tri.ZERO
    if not (e.free_symbols or e.atoms(AppliedUndef)):
        # numeric constant: decide by value
        v = complex(e.evalf(PROBE_DPS))
        return Tri.NONZERO if abs(v) > NONZERO_TOL else Tri.UNKNOWN
    rng = rng or random.Random(0)
    res = Prober([e], rng, instantiations=5).run(npoints, stop_above=NONZERO_TOL)
    if not res.points:
        return Tri.UNKNOWN
    return Tri.NONZERO if res.values[0] > NONZERO_TOL else Tri.UNKNOWN


# -------------------------------------------------------------------- Ode


@dataclass(frozen=True)
class Ode:
    """Explicit second order ODE ``y'' = phi(x, y, y')``."""

    phi: sp.Expr
    funcs: tuple = field(default=())

    def __post_init__(self):
        phi = normalize(self.phi)
        if depends_on(phi, YPP):
            raise ValueError("phi must not contain y''")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "funcs", tuple(self.funcs))

    @classmethod
    def parse(cls, text: str, decls: Iterable[FuncSym] = ()) -> "Ode":
        decls = tuple(decls)
        if "=" in text:
            lhs, rhs = text.split("=", 1)
            if lhs.replace(" ", "") != "y''":
                raise ParseError("the ODE must be written as y'' = <expr>", 0)
            text = rhs
        return cls(parse_expr(text, decls), decls)

    def __str__(self) -> str:
        return f"y'' = {render(self.phi)}"
