"""Check records and their JSON-friendly rendering."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else float(x)
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if hasattr(x, "item"):
        return jsonable(x.item())
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


@dataclass
class Check:
    """One verified (or monitored) statement.

    ``holds`` is None for monitored quantities that carry no assertion,
    such as asymptotic ratios.
    """

    name: str
    ref: str
    holds: bool | None
    lhs: Any
    rhs: Any
    ratio: Any = None
    mode: str = "exact"
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "paper_ref": self.ref,
            "holds": self.holds,
            "lhs": jsonable(self.lhs),
            "rhs": jsonable(self.rhs),
            "ratio": jsonable(self.ratio),
            "mode": self.mode,
            "params": jsonable(self.params),
        }

    def __bool__(self) -> bool:
        return self.holds is not False


def all_hold(checks) -> bool:
    return all(c.holds is not False for c in checks)


def safe_ratio(a, b):
    if b == 0:
        return None if a == 0 else math.inf
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Fraction(a) / Fraction(b)
    return float(a) / float(b)
