"""The structured result every analysis returns."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

SCHEMA_VERSION = 1

HOLDS = "holds"
FAILS = "fails"
ERROR = "error"
EXHAUSTED = "exhausted"
VERDICTS = (HOLDS, FAILS, ERROR, EXHAUSTED)


def report_schema() -> dict:
    """The JSON schema that ``--json`` output follows."""
    text = resources.files("pabpel").joinpath("schema/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


@dataclass
class AnalysisReport:
    """Verdict of one analysis.

    ``details`` is JSON-ready: relations are lists of pairs, counterexample
    paths alternate states and labels. ``elapsed_ms`` is kept out of the
    serialised forms unless asked for, so that identical runs print
    identical bytes.
    """

    tool: str
    verdict: str
    details: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    elapsed_ms: float | None = None

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "schemaVersion": SCHEMA_VERSION,
            "tool": self.tool,
            "verdict": self.verdict,
            "details": self.details,
            "warnings": list(self.warnings),
        }
        if timing and self.elapsed_ms is not None:
            out["elapsedMs"] = round(self.elapsed_ms, 3)
        return out

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2) + "\n"

    def to_text(self, timing: bool = False) -> str:
        lines = [f"{self.tool}: {self.verdict}"]
        for key in sorted(self.details):
            lines.append(f"  {key}: {_compact(self.details[key])}")
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        if timing and self.elapsed_ms is not None:
            lines.append(f"  elapsed: {self.elapsed_ms:.1f} ms")
        return "\n".join(lines) + "\n"


def _compact(value) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(value, sort_keys=True, separators=(", ", ": "))


def pairs(relation) -> list:
    return [list(p) for p in sorted(relation)]


def result_details(result) -> dict:
    """Details for a :class:`~pabpel.lts.CheckResult`."""
    out = {"statistics": dict(result.stats)}
    if result.witness is not None:
        out["witness"] = pairs(result.witness)
    if result.counterexample is not None:
        out["counterexample"] = result.counterexample.to_dict()
    return out


def lts_statistics(prefix: str, lts) -> dict:
    return {f"{prefix}States": lts.num_states, f"{prefix}Transitions": len(lts.transitions)}
