"""Check results and reports shared by the validators and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


def jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays (possibly nested) into plain JSON values."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    return value


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None
    detail: str = ""

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        out = {"check": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    flags: dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, passed: bool, witness: Any = None, detail: str = "") -> Check:
        check = Check(name, bool(passed), witness, detail)
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness, c.detail))
        self.notes.extend(n for n in other.notes if n not in self.notes)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def results(self) -> list[dict]:
        return [c.to_json() for c in self.checks]

    def to_text(self) -> str:
        width = max((len(c.name) for c in self.checks), default=10)
        lines = [self.title]
        for c in self.checks:
            line = f"  {c.name:<{width}}  {c.status.upper()}"
            if c.detail:
                line += f"  {c.detail}"
            if not c.passed and c.witness is not None:
                line += f"  witness={jsonable(c.witness)}"
            lines.append(line)
        for k, v in self.flags.items():
            lines.append(f"  [{k}] {v}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)
