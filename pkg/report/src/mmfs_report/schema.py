"""Parsing and validation of experiment JSONL records.

A pure consumer: every number rendered downstream traces to a field read
here, nothing is recomputed.  Schema mismatches report the first offending
line so broken runs are easy to locate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

REQUIRED_FIELDS = {
    "kind": str,
    "params": dict,
    "seed": int,
    "trial": int,
    "lhs": (int, float),
    "rhs": (int, float),
    "ratio": (int, float),
    "files": dict,
}


class SchemaError(ValueError):
    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line


@dataclass(frozen=True)
class Record:
    kind: str
    params: dict
    seed: int
    trial: int
    lhs: float
    rhs: float
    ratio: float
    files: dict


def parse_line(raw: str, path, lineno: int) -> Record:
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(path, lineno, f"invalid JSON ({exc.msg})") from None
    if not isinstance(payload, dict):
        raise SchemaError(path, lineno, "record is not an object")
    for field, types in REQUIRED_FIELDS.items():
        if field not in payload:
            raise SchemaError(path, lineno, f"missing field {field!r}")
        if not isinstance(payload[field], types) or isinstance(payload[field], bool):
            raise SchemaError(path, lineno, f"field {field!r} has wrong type")
    return Record(
        kind=payload["kind"],
        params=payload["params"],
        seed=payload["seed"],
        trial=payload["trial"],
        lhs=float(payload["lhs"]),
        rhs=float(payload["rhs"]),
        ratio=float(payload["ratio"]),
        files=payload["files"],
    )


def read_records(path) -> list[Record]:
    records = []
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        records.append(parse_line(raw, path, lineno))
    return records
