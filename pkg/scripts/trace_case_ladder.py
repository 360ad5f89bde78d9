"""Print the intermediate quantities of the mu(x, y') case ladder for the worked examples."""
from __future__ import annotations

import sys

from odemu.expr import FuncSym, Ode, render
from odemu.mu_xprime import find_mu_xprime

EXAMPLES = {
    "Kamke 226": ("y'' = (x^2*y*y' + x*y^2)/y'", []),
    "Kamke 136": ("y'' = h(y')/(x-y)", ["h(y')"]),
    "Kamke 66": ("y'' = a*(c+b*x+y)*(y'^2+1)^(3/2)", []),
    "Case E": ("y'' = y'*(x*y'+1)*(exp(y)-2)/(y'*x^2+y'-1)", []),
    "y'' = y^2 + x": ("y'' = y^2 + x", []),
}
FIELDS = ("upsilon", "w", "h_fun", "h_const", "p_prime", "lam", "psi", "calF", "mu_tilde")


def trace(label, text, decls):
    ode = Ode.parse(text, [FuncSym.parse(d) for d in decls])
    res = find_mu_xprime(ode)
    work = res.diagnostics["work"]
    print(f"== {label}: {ode}")
    for name in FIELDS:
        value = getattr(work, name)
        if value is not None:
            print(f"   {name:9s} {render(value) if not isinstance(value, str) else value}")
    for note in work.notes:
        print(f"   note      {note}")
    tail = render(res.mu) if res.found else res.failed_condition
    print(f"   -> {res.status.value} case={res.case_label} {tail}")


def main(argv):
    names = argv or list(EXAMPLES)
    for name in names:
        trace(name, *EXAMPLES[name])


if __name__ == "__main__":
    main(sys.argv[1:])
