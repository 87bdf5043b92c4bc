"""Small record type for inequality checks, used by reports and the CLI."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Check:
    """Outcome of comparing ``lhs <= rhs`` (or ``lhs == rhs``) with a tolerance.

    ``slack`` is ``rhs + tol - lhs`` for inequalities and ``tol - |lhs - rhs|``
    for equalities; a check passes iff its slack is non-negative.
    """

    name: str
    passed: bool
    lhs: float
    rhs: float
    slack: float
    param: Any = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "pass": bool(self.passed),
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "slack": _num(self.slack),
            "param": self.param,
        }
        if self.extra:
            out["extra"] = {k: _num(v) for k, v in self.extra.items()}
        return out


def _num(x):
    if isinstance(x, complex):
        return [float(x.real), float(x.imag)]
    try:
        x = float(x)
    except (TypeError, ValueError):
        return x
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return x


def check_le(name, lhs, rhs, tol=0.0, param=None, **extra) -> Check:
    lhs, rhs = float(lhs), float(rhs)
    slack = rhs + tol - lhs
    return Check(name, bool(slack >= 0), lhs, rhs, slack, param, extra)


def check_close(name, lhs, rhs, tol, param=None, **extra) -> Check:
    lhs, rhs = float(lhs), float(rhs)
    slack = tol - abs(lhs - rhs)
    return Check(name, bool(slack >= 0), lhs, rhs, slack, param, extra)


def all_passed(checks) -> bool:
    return all(c.passed for c in checks)
