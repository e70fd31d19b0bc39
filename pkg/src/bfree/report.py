"""Run configuration and report serialization.

Reports are plain nested dicts rendered as JSON (sorted keys), an aligned
text table, or CSV of the per-stage rows.  Integers beyond 2^53 are written
as decimal strings so that any JSON reader keeps them exact.  Wall-clock
timing lives in its own top-level section and only appears on request.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .bset import DEFAULT_HORIZON, make_bset
from .density import DensityEstimate
from .errors import ConfigError

SAFE_INT = 2**53
FORMATS = ("table", "json", "csv")
HORIZON_ENV = "BFREE_HORIZON"


def default_N() -> int:
    raw = os.environ.get(HORIZON_ENV)
    if raw is None:
        return DEFAULT_HORIZON
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{HORIZON_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{HORIZON_ENV} must be positive")
    return value


@dataclass
class RunConfig:
    bset: dict[str, Any] = field(default_factory=lambda: {"family": "primes", "params": {}})
    N: int = field(default_factory=default_N)
    depth: int = 8
    mode: str | None = None
    lookahead: int = 6
    confirm: int = 3
    chain_threshold: int = 25
    boundary_threshold: float = 1e-3
    haar_ratio: float = 0.01
    format: str = "table"

    def __post_init__(self):
        for name in ("N", "depth", "lookahead", "confirm", "chain_threshold"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigError(f"{name} must be an integer")
            if v < (0 if name == "lookahead" else 1):
                raise ConfigError(f"{name} must be positive")
        for name in ("boundary_threshold", "haar_ratio"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or v <= 0:
                raise ConfigError(f"{name} must be a positive number")
            setattr(self, name, float(v))
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if not isinstance(self.bset, dict) or "family" not in self.bset:
            raise ConfigError("bset must be an object with a 'family' key")
        self.bset = {"family": self.bset["family"], "params": dict(self.bset.get("params") or {})}

    def make_bset(self):
        return make_bset(self.bset)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
        return cls(**data)


def jsonable(obj: Any) -> Any:
    """Convert results into JSON-compatible values, exact where possible."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        v = int(obj)
        return str(v) if abs(v) > SAFE_INT else v
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Fraction):
        return {"exact": f"{obj.numerator}/{obj.denominator}", "approx": float(obj)}
    if isinstance(obj, DensityEstimate):
        out = {"value": float(obj.value), "kind": obj.kind, "exact": obj.kind == "exact"}
        if isinstance(obj.value, Fraction):
            out["fraction"] = f"{obj.value.numerator}/{obj.value.denominator}"
        if obj.kind != "exact":
            out["horizon"] = jsonable(obj.horizon)
        for key in ("count", "method"):
            if getattr(obj, key) is not None:
                out[key] = jsonable(getattr(obj, key))
        if obj.monotone_trace is not None:
            out["trace"] = [[jsonable(k), jsonable(v)] for k, v in obj.monotone_trace]
        return out
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class Report:
    command: str
    config: dict[str, Any]
    result: dict[str, Any]
    provenance: list[str] = field(default_factory=list)
    timing: dict[str, float] | None = None

    def document(self) -> dict[str, Any]:
        doc = {
            "command": self.command,
            "config": jsonable(self.config),
            "result": jsonable(self.result),
            "provenance": list(self.provenance),
        }
        if self.timing is not None:
            doc["timing"] = {k: round(v, 3) for k, v in self.timing.items()}
        return doc


def to_json(report: Report) -> str:
    return json.dumps(report.document(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _cell(v: Any) -> str:
    if isinstance(v, dict) and "exact" in v and "approx" in v:
        return v["exact"]
    if isinstance(v, dict) and "value" in v and "kind" in v:
        return f"{v['value']:.6g}" + ("" if v["exact"] else f" (N={v.get('horizon')})")
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, dict):
        return " ".join(f"{k}={_cell(x)}" for k, x in v.items())
    if isinstance(v, list):
        text = ", ".join(_cell(x) for x in v)
        return "[" + text + "]" if len(text) <= 60 else "[" + text[:57] + "...]"
    return str(v)


def to_table(report: Report) -> str:
    doc = report.document()
    out = io.StringIO()
    out.write(f"# {doc['command']}  B = {doc['config'].get('bset', {}).get('family', '?')}\n")
    rows = doc["result"].get("rows")
    for key in sorted(doc["result"]):
        if key == "rows":
            continue
        val = doc["result"][key]
        if isinstance(val, dict) and not ("value" in val and "kind" in val) and not ("exact" in val and "approx" in val):
            out.write(f"{key}:\n")
            for k2 in sorted(val):
                out.write(f"  {k2}: {_cell(val[k2])}\n")
        else:
            out.write(f"{key}: {_cell(val)}\n")
    if rows:
        cols = list(rows[0])
        cells = [[_cell(r.get(c)) for c in cols] for r in rows]
        widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(cols)]
        out.write("\n" + "  ".join(c.rjust(w) for c, w in zip(cols, widths)) + "\n")
        for r in cells:
            out.write("  ".join(v.rjust(w) for v, w in zip(r, widths)) + "\n")
    for note in doc["provenance"]:
        out.write(f"note: {note}\n")
    if "timing" in doc:
        out.write("timing: " + ", ".join(f"{k}={v}s" for k, v in sorted(doc["timing"].items())) + "\n")
    return out.getvalue()


def to_csv(report: Report) -> str:
    doc = report.document()
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    rows = doc["result"].get("rows")
    if rows:
        cols = list(rows[0])
        writer.writerow(cols)
        for r in rows:
            writer.writerow([json.dumps(r.get(c), sort_keys=True) if isinstance(r.get(c), (list, dict))
                             else r.get(c) for c in cols])
    else:
        writer.writerow(["key", "value"])
        for key in sorted(doc["result"]):
            writer.writerow([key, json.dumps(doc["result"][key], sort_keys=True, ensure_ascii=False)])
    return out.getvalue()


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    return to_table(report)
