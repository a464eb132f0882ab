"""Verification report records and their text format.

A report is an ordered list of :class:`CheckRecord` plus an echo of the run
configuration. The text form is one ``[check]`` block of ``key=value`` lines
per record; numbers are written with 17 significant digits so that two runs
of the same configuration produce byte-identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping


def format_value(value: Any) -> str:
    """Render a value for a key=value line."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.17g}"
    if isinstance(value, (list, tuple)):
        return ";".join(format_value(v) for v in value)
    return str(value).replace("\n", " ")


def format_block(header: str, items: Mapping[str, Any]) -> str:
    lines = [f"[{header}]"]
    lines.extend(f"{key}={format_value(value)}" for key, value in items.items())
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CheckRecord:
    """One verified property: what was measured against which threshold."""

    id: str
    description: str
    statement: str
    measured: float
    threshold: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "description": self.description,
            "statement": self.statement,
            "measured": float(self.measured),
            "threshold": float(self.threshold),
            "passed": self.passed,
            "detail": self.detail,
        }


def check(
    id: str,
    description: str,
    statement: str,
    measured: float,
    threshold: float,
    passed: bool,
    detail: str = "",
) -> CheckRecord:
    """Build a record, coercing numpy scalars to plain Python values."""
    return CheckRecord(id, description, statement, float(measured), float(threshold), bool(passed), detail)


@dataclass
class VerificationReport:
    """Ordered check records with summary counts and a config echo."""

    records: list[CheckRecord] = field(default_factory=list)
    config: dict[str, Any] = field(default_factory=dict)
    version: str = ""
    degenerate: bool = False
    aborted: str = ""

    def extend(self, records: Iterable[CheckRecord]) -> None:
        self.records.extend(records)

    @property
    def passed_count(self) -> int:
        return sum(1 for r in self.records if r.passed)

    @property
    def failed_count(self) -> int:
        return len(self.records) - self.passed_count

    @property
    def passed(self) -> bool:
        return not self.aborted and all(r.passed for r in self.records)

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]

    def get(self, check_id: str) -> CheckRecord:
        for record in self.records:
            if record.id == check_id:
                return record
        raise KeyError(check_id)

    def to_text(self) -> str:
        run: dict[str, Any] = {"tool": "revcurv", "version": self.version}
        run.update({f"config.{k}": v for k, v in sorted(self.config.items())})
        parts = [format_block("run", run)]
        parts.extend(format_block("check", r.to_dict()) for r in self.records)
        summary = {
            "checks": len(self.records),
            "passed": self.passed_count,
            "failed": self.failed_count,
            "degenerate": self.degenerate,
            "aborted": self.aborted or "none",
            "overall": "pass" if self.passed else "fail",
        }
        parts.append(format_block("summary", summary))
        return "\n".join(parts)

    def write(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_text(), encoding="utf-8")
        return path
