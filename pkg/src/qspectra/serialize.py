"""Result envelopes: run manifests, canonical JSON, CSV emission, and the
published JSON schemas for machine consumers.

Canonical JSON is sorted-key with compact separators; identical manifests
(wall time aside) must reproduce byte-identical output.
"""

from __future__ import annotations

import hashlib
import io
import json
import time
from dataclasses import dataclass, field

from . import __version__


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      allow_nan=True)


def params_hash(params: dict) -> str:
    return hashlib.sha256(canonical_json(params).encode()).hexdigest()


@dataclass
class RunManifest:
    command: str
    params: dict
    precision_bits: int
    budgets: dict
    version: str = __version__
    wall_time_s: float | None = None
    input_hashes: dict = field(default_factory=dict)
    _t0: float = field(default_factory=time.perf_counter, repr=False)

    def __post_init__(self):
        self.input_hashes = {"params_sha256": params_hash(self.params)}

    def finish(self):
        self.wall_time_s = round(time.perf_counter() - self._t0, 6)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "precision_bits": self.precision_bits,
            "budgets": self.budgets,
            "version": self.version,
            "wall_time_s": self.wall_time_s,
            "input_hashes": self.input_hashes,
        }


def envelope(manifest: RunManifest, result) -> dict:
    manifest.finish()
    return {"manifest": manifest.to_dict(), "result": result}


def strip_wall_time(doc: dict) -> dict:
    out = json.loads(canonical_json(doc))
    out.get("manifest", {}).pop("wall_time_s", None)
    return out


# ---------------------------------------------------------------------------
# CSV emission


def window_csv(window_dict: dict) -> str:
    """(index, value, gap) rows for plotting."""
    buf = io.StringIO()
    buf.write("index,value,gap\n")
    points = window_dict["points"]
    prev = None
    for i, p in enumerate(points):
        gap = "" if prev is None else repr(p["approx"] - prev)
        buf.write(f"{i},{p['approx']!r},{gap}\n")
        prev = p["approx"]
    return buf.getvalue()


def gaps_csv(report: dict) -> str:
    buf = io.StringIO()
    buf.write("gap,count\n")
    for g, n in report["histogram"]:
        buf.write(f"{g!r},{n}\n")
    return buf.getvalue()


def minpos_csv(result: dict) -> str:
    buf = io.StringIO()
    buf.write("depth,min_value,states,new_states\n")
    for rec in result["trace"]:
        buf.write(f"{rec['depth']},{rec['min_value']!r},{rec['states']},"
                  f"{rec['new_states']}\n")
    return buf.getvalue()


def key_value_csv(result: dict) -> str:
    buf = io.StringIO()
    buf.write("key,value\n")

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else str(k), obj[k])
        elif isinstance(obj, list):
            buf.write(f"{prefix},{json.dumps(obj)!r}\n")
        else:
            buf.write(f"{prefix},{obj!r}\n")

    walk("", result)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# published schemas


BASE_SCHEMA = {
    "type": "object",
    "properties": {
        "poly": {"type": "string"},
        "root": {"type": "number"},
    },
    "required": ["poly", "root"],
}

WINDOW_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "properties": {
        "base": BASE_SCHEMA,
        "m": {"type": "integer", "minimum": 1},
        "kind": {"enum": ["X", "Y", "A"]},
        "degree": {"type": ["integer", "null"]},
        "bound": {"type": "number"},
        "complete": {"type": "boolean"},
        "points": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "vec": {"type": "array", "items": {"type": "integer"}},
                    "approx": {"type": "number"},
                    "digits": {"type": "array", "items": {"type": "integer"}},
                },
                "required": ["approx", "digits"],
            },
        },
        "covering_radius": {"type": "number"},
    },
    "required": ["base", "m", "kind", "degree", "bound", "complete", "points"],
}

MINPOS_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "properties": {
        "base": BASE_SCHEMA,
        "m": {"type": "integer"},
        "trace": {"type": "array"},
        "closed": {"type": "boolean"},
        "budget_exhausted": {"type": "boolean"},
        "min_positive": {"type": ["number", "null"]},
        "verdict": {"type": "string"},
    },
    "required": ["base", "m", "trace", "closed", "budget_exhausted"],
}

DIGITS_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "properties": {
        "preperiod": {"type": "array", "items": {"type": "integer"}},
        "period": {"type": ["array", "null"],
                   "items": {"type": "integer"}},
        "height": {"type": "integer"},
        "first_index": {"type": "integer"},
        "exact_zero_tail": {"type": "boolean"},
    },
    "required": ["preperiod", "period", "height", "first_index"],
}

ENVELOPE_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "properties": {
        "manifest": {
            "type": "object",
            "properties": {
                "command": {"type": "string"},
                "params": {"type": "object"},
                "precision_bits": {"type": "integer"},
                "budgets": {"type": "object"},
                "version": {"type": "string"},
                "wall_time_s": {"type": ["number", "null"]},
                "input_hashes": {"type": "object"},
            },
            "required": ["command", "params", "precision_bits", "budgets",
                         "version", "input_hashes"],
        },
        "result": {},
    },
    "required": ["manifest", "result"],
}
