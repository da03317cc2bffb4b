"""Machine-readable reports emitted by the command-line tool."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    expected: float
    tolerance: float
    kind: str = "equality"  # or "bound": measured <= expected + tolerance

    @property
    def passed(self) -> bool:
        if self.kind == "bound":
            return self.measured <= self.expected + self.tolerance
        return abs(self.measured - self.expected) <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "status": "pass" if self.passed else "fail",
            "measured": self.measured,
            "expected": self.expected,
            "tolerance": self.tolerance,
        }


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    predictions: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    seed: int | None = None
    wall_time_ms: int = 0
    table: list[dict] | None = None

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        d = {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "predictions": self.predictions,
            "checks": [c.as_dict() for c in self.checks],
            "seed": self.seed,
            "wall_time_ms": self.wall_time_ms,
        }
        if self.table is not None:
            d["table"] = self.table
        return d

    def to_json(self) -> str:
        return dumps(self.as_dict())

    def to_csv(self) -> str:
        """The table if there is one, otherwise the checks."""
        if self.table is not None:
            rows = self.table
        else:
            rows = [c.as_dict() for c in self.checks]
        if not rows:
            return ""
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _scalar(v) for k, v in r.items()})
        return buf.getvalue()


def _scalar(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return v


def _plain(obj):
    if isinstance(obj, np.ndarray):
        return [_plain(x) for x in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, floats with 17 significant digits."""
    obj = _plain(obj)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError("reports cannot hold non-finite numbers")
        s = format(obj, ".17g")
        return s if any(c in s for c in ".e") else s + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{json.dumps(k)}: {dumps(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
