"""The record produced by every check, plus its flat serialisation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

# tolerance regimes; "informational" reports never gate an exit status
STRUCTURAL = "structural"
QUADRATURE = "quadrature"
FD = "fd"
INFORMATIONAL = "informational"


class PreconditionError(ValueError):
    """A check was called outside the hypotheses of the inequality it tests."""


@dataclass
class CheckReport:
    check: str
    n: int
    lhs: float
    rhs: float
    tol: float
    regime: str = STRUCTURAL
    point: Any = None
    m: int | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)
        self.tol = float(self.tol)
        if not all(math.isfinite(v) for v in (self.lhs, self.rhs, self.tol)):
            raise ValueError(f"{self.check}: non-finite report values {self.lhs}, {self.rhs}, {self.tol}")
        if self.point is not None:
            self.point = _plain(self.point)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.margin >= -self.tol

    @property
    def asserting(self) -> bool:
        return self.regime != INFORMATIONAL

    def record(self, seed=None, trial=None) -> dict:
        return {
            "check": self.check,
            "n": self.n,
            "m": self.m,
            "point": self.point,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "tol": self.tol,
            "regime": self.regime,
            "pass": self.passed,
            "seed": seed,
            "trial": trial,
        }


def identity_report(check, n, left, right, tol, *, relative=False, **kw) -> CheckReport:
    """Report for an identity: lhs carries the residual, rhs is zero."""
    resid = abs(left - right)
    if relative:
        resid /= max(1.0, abs(left), abs(right))
    kw.setdefault("params", {}).update(left=float(left), right=float(right))
    return CheckReport(check, n, resid, 0.0, tol, **kw)


def _plain(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (list, tuple)):
        return [_plain(o) for o in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj
