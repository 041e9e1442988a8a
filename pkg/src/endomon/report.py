"""Check results and report serialisation (JSON, CSV, markdown)."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = 1


@dataclass
class Check:
    name: str
    passed: bool
    expected: Any = None
    computed: Any = None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.passed)

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": bool(self.passed),
               "expected": self.expected, "computed": self.computed}
        if self.details:
            out["details"] = self.details
        return out

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: expected={_short(self.expected)} computed={_short(self.computed)}"


def _short(v, limit: int = 80) -> str:
    s = json.dumps(v, default=str) if not isinstance(v, str) else v
    return s if len(s) <= limit else s[: limit - 3] + "..."


def all_passed(checks) -> bool:
    return all(c.passed for c in checks)


def to_json(payload: dict) -> str:
    body = {"schema_version": SCHEMA_VERSION}
    body.update(payload)
    return json.dumps(body, indent=2, default=_jsonable) + "\n"


def _jsonable(obj):
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "item"):
        return obj.item()
    return str(obj)


def histogram_csv(histogram: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["length", "count"])
    for length in sorted(histogram):
        w.writerow([length, histogram[length]])
    return buf.getvalue()


def checks_csv(checks) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "passed", "expected", "computed"])
    for c in checks:
        w.writerow([c.name, int(c.passed), json.dumps(c.expected, default=str),
                    json.dumps(c.computed, default=str)])
    return buf.getvalue()


def markdown_table(header, rows) -> str:
    lines = ["| " + " | ".join(map(str, header)) + " |",
             "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(map(str, r)) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def checks_markdown(checks) -> str:
    return markdown_table(
        ["check", "status", "expected", "computed"],
        [[c.name, "pass" if c.passed else "FAIL", _short(c.expected), _short(c.computed)] for c in checks],
    )
