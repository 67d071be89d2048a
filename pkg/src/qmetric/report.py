"""Check results shared by every checker, plus deterministic rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional


@dataclass
class Check:
    name: str
    passed: bool
    witnesses: list = field(default_factory=list)
    note: str = ""
    checked: Optional[int] = None


@dataclass
class CheckReport:
    subject: str
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def add(self, name: str, witnesses: list, note: str = "", checked: Optional[int] = None) -> Check:
        c = Check(name, not witnesses, list(witnesses), note, checked)
        self.checks.append(c)
        return c


def _plain(x):
    """JSON-friendly, order-stable form of witness payloads."""
    if isinstance(x, float):
        return "inf" if x == float("inf") else x
    if isinstance(x, (list, tuple)):
        return [_plain(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (str, int, bool)) or x is None:
        return x
    return str(x)


def render_text(header: dict, reports: list) -> str:
    lines = [f"{k}: {v}" for k, v in header.items()]
    for r in reports:
        lines.append(f"[{r.subject}]")
        for k, v in r.info.items():
            if isinstance(v, (list, tuple)):
                lines.append(f"  {k}:")
                lines.extend(f"    - {x if isinstance(x, str) else json.dumps(_plain(x))}" for x in v)
            else:
                lines.append(f"  {k}: {v if isinstance(v, str) else json.dumps(_plain(v))}")
        for c in r.checks:
            extra = f" ({c.checked} cases)" if c.checked is not None else ""
            lines.append(f"  {'PASS' if c.passed else 'FAIL'} {c.name}{extra}")
            if c.note:
                lines.append(f"    note: {c.note}")
            for w in c.witnesses:
                lines.append(f"    witness: {json.dumps(_plain(w))}")
    failed = sum(len(r.failures()) for r in reports)
    lines.append(f"verdict: {'PASS' if failed == 0 else 'FAIL'} ({failed} failed checks)")
    return "\n".join(lines) + "\n"


def render_json(header: dict, reports: list) -> str:
    doc = dict(header)
    doc["reports"] = [
        {
            "subject": r.subject,
            "info": _plain(r.info),
            "checks": [
                {"name": c.name, "passed": c.passed, "checked": c.checked, "note": c.note,
                 "witnesses": _plain(c.witnesses)}
                for c in r.checks
            ],
        }
        for r in reports
    ]
    doc["passed"] = all(r.passed for r in reports)
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
