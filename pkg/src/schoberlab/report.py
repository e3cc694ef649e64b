"""Structured verification outcomes and their serialization."""

from __future__ import annotations

import csv
import io
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

STATUSES = ("pass", "fail", "undetermined", "expected-failure")


@dataclass
class Report:
    check: str
    status: str = "pass"
    witness: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "expected-failure")

    def to_json(self) -> dict:
        return {"check": self.check, "status": self.status,
                "witness": self.witness, "elapsed_ms": self.elapsed_ms}

    @classmethod
    def from_json(cls, data: dict) -> "Report":
        return cls(data["check"], data["status"], data.get("witness", {}),
                   data.get("elapsed_ms", 0.0))


@contextmanager
def timed(report: Report):
    """Fill ``report.elapsed_ms`` with the wall time of the managed block."""
    start = time.perf_counter()
    try:
        yield report
    finally:
        report.elapsed_ms = round((time.perf_counter() - start) * 1000, 3)


def render_report(reports: list[Report], fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps([r.to_json() for r in reports], indent=2) + "\n"
    if fmt == "tsv":
        buf = io.StringIO()
        w = csv.writer(buf, delimiter="\t", lineterminator="\n")
        w.writerow(["check", "status", "elapsed_ms"])
        for r in reports:
            w.writerow([r.check, r.status, r.elapsed_ms])
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(reports: list[Report], fmt: str = "json", path=None) -> str:
    """Render reports; write to ``path`` when given, and return the text."""
    text = render_report(reports, fmt)
    if path is not None and str(path) != "-":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
