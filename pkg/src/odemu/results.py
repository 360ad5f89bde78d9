"""Result records shared by the factor searches and the pipeline."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import sympy as sp


class Status(enum.Enum):
    FOUND = "Found"
    FOUND_UP_TO_LINEAR_ODE = "FoundUpToLinearODE"
    NOT_EXISTS = "NotExists"
    INCONCLUSIVE = "Inconclusive"


class AnsatzKind(enum.Enum):
    XY = "xy"
    XYP = "xyp"
    YYP = "yyp"
    AUTO = "auto"


CASE_LABELS = ("A", "B", "C", "D", "E", "F", "XY_A", "XY_B", "Linear")


@dataclass
class FactorResult:
    status: Status
    ansatz: AnsatzKind | None = None
    mu: sp.Expr | None = None
    case_label: str | None = None
    first_integral: Any = None
    verdict: Any = None
    failed_condition: str | None = None
    extra_factors: list = field(default_factory=list)
    linear_ode: tuple | None = None  # (A, B) of nu'' = A nu' + B nu when only a template was found
    template: sp.Expr | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND

    @classmethod
    def not_exists(cls, why: str, **kw) -> "FactorResult":
        return cls(Status.NOT_EXISTS, failed_condition=why, **kw)

    @classmethod
    def inconclusive(cls, why: str, **kw) -> "FactorResult":
        return cls(Status.INCONCLUSIVE, failed_condition=why, **kw)
