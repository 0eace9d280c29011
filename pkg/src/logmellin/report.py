"""Check records and JSON-serializable reports."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

__all__ = ["Check", "SmoothnessReport"]


def _clean(value):
    """Convert numpy scalars/arrays and non-finite floats for JSON."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


@dataclass
class Check:
    """One inequality instance: ``lhs <= rhs`` (with a tolerance already folded in)."""

    tag: str
    name: str
    lhs: float
    rhs: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return _clean({"tag": self.tag, "name": self.name, "lhs": self.lhs,
                       "rhs": self.rhs, "passed": self.passed, **self.detail})


@dataclass
class SmoothnessReport:
    """Named results plus a list of inequality checks."""

    title: str
    params: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, tag: str, name: str, lhs: float, rhs: float, rtol: float = 0.0,
            atol: float = 0.0, **detail) -> Check:
        ok = bool(np.isfinite(lhs) and not np.isnan(rhs)
                  and lhs <= rhs * (1 + rtol) + atol)
        chk = Check(tag, name, float(lhs), float(rhs), ok, detail)
        self.checks.append(chk)
        return chk

    def tags(self) -> set:
        return {c.tag for c in self.checks} | set(self.values.get("tags", []))

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict[str, Any]:
        return _clean({
            "title": self.title,
            "passed": self.passed,
            "params": self.params,
            "values": self.values,
            "checks": [c.as_dict() for c in self.checks],
        })

    def to_json(self, **kw) -> str:
        kw.setdefault("indent", 2)
        kw.setdefault("sort_keys", True)
        return json.dumps(self.as_dict(), **kw)
