"""Verdict records tying a computed quantity to a stated bound."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isfinite
from numbers import Real
from typing import Any


def to_jsonable(x: Any) -> Any:
    """ints stay ints; Fractions and floats become floats rounded to 17 digits."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, complex):
        return [to_jsonable(x.real), to_jsonable(x.imag)]
    if isinstance(x, (Fraction, float)):
        f = float(x)
        return float(format(f, ".17g")) if isfinite(f) else None
    if hasattr(x, "item"):
        return to_jsonable(x.item())
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    raise TypeError(f"cannot serialize {type(x).__name__}")


@dataclass
class CheckRecord:
    """lhs compared with rhs.

    Asserted records encode explicit inequalities or identities and pass iff
    ``lhs <= rhs`` (exact comparison when both sides are int/Fraction).
    Diagnostic records carry a slack ratio only; their ``passed`` is None.
    """

    name: str
    lhs: Real
    rhs: Real
    asserted: bool = True
    context: dict = field(default_factory=dict)

    @property
    def slack(self) -> float | None:
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else None
        return float(Fraction(self.lhs) / Fraction(self.rhs)) if _exact(self.lhs, self.rhs) else float(self.lhs) / float(self.rhs)

    @property
    def passed(self) -> bool | None:
        if not self.asserted:
            return None
        return bool(self.lhs <= self.rhs)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": to_jsonable(self.lhs),
            "rhs": to_jsonable(self.rhs),
            "slack": to_jsonable(self.slack),
            "asserted": self.asserted,
            "passed": self.passed,
            "context": to_jsonable(self.context),
        }


def _exact(*xs: Real) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in xs)


def tolerance_record(name: str, computed: float, reference: float, rel_tol: float, **context) -> CheckRecord:
    """Asserted record for |computed - reference| <= rel_tol * |reference|.

    A zero reference falls back to an absolute tolerance of rel_tol.
    """
    err = float(abs(computed - reference))
    scale = float(abs(reference)) or 1.0
    ctx = {"computed": computed, "reference": reference, **context}
    return CheckRecord(name, err, rel_tol * scale, True, ctx)


def equality_record(name: str, a: int, b: int, **context) -> CheckRecord:
    """Asserted record for exact integer equality (lhs = |a - b|, rhs = 0)."""
    ctx = {"a": a, "b": b, **context}
    return CheckRecord(name, abs(int(a) - int(b)), 0, True, ctx)
