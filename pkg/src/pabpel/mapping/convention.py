"""Gate naming shared by both translation directions.

* partner operation ``pl.op`` -> ``pl.op.rcv`` / ``.rep`` / ``.inv`` / ``.res``
* fault ``f`` -> ``fault.f``; its handler is selected by ``kill.f``
  (``kill._all`` for catchAll)
* wait / onAlarm number ``N`` -> ``alarm.N``
* switch and while decisions -> ``dec.N``, ``dec.t``, ``dec.f`` (always hidden)
* scope ``s``: ``eoff.s`` ends its event handlers, ``inst.s`` installs its
  compensation handler, ``comp.s``/``cdone.s`` run and finish compensation
  of its children

Partner gates have three components and every other convention gate has
two, so the scheme is injective as long as names are plain identifiers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..bpel.model import Direction, PartnerOp

CATCH_ALL = "_all"

_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_PARTNER_RE = re.compile(rf"({_IDENT})\.({_IDENT})\.(rcv|rep|inv|res)\Z")
_TWO_RE = re.compile(rf"(fault|kill|alarm|dec|eoff|inst|comp|cdone)\.({_IDENT}|\d+)\Z")


def fault_gate(name: str) -> str:
    return f"fault.{name}"


def kill_gate(name: str | None) -> str:
    return f"kill.{CATCH_ALL if name is None else name}"


def alarm_gate(n: int) -> str:
    return f"alarm.{n}"


def scope_gate(kind: str, scope_id: str) -> str:
    return f"{kind}.{scope_id}"


def parse_partner_gate(gate: str) -> PartnerOp | None:
    m = _PARTNER_RE.match(gate)
    if not m:
        return None
    return PartnerOp(m.group(1), m.group(2), Direction(m.group(3)))


def parse_gate(gate: str) -> tuple | None:
    """``("partner", PartnerOp)`` or ``(kind, suffix)`` for convention gates, else None."""
    po = parse_partner_gate(gate)
    if po is not None:
        return ("partner", po)
    m = _TWO_RE.match(gate)
    if m:
        return (m.group(1), m.group(2))
    return None


def gate_kind(gate: str) -> str | None:
    parsed = parse_gate(gate)
    return None if parsed is None else parsed[0]


@dataclass
class GateTable:
    """Which source items each gate of a translation stands for."""

    entries: dict = field(default_factory=dict)  # gate -> set of descriptions

    def add(self, gate: str, what: str) -> str:
        self.entries.setdefault(gate, set()).add(what)
        return gate

    def is_injective(self) -> bool:
        return all(len(items) == 1 for items in self.entries.values())

    def to_dict(self) -> dict:
        return {g: sorted(items)[0] if len(items) == 1 else sorted(items)
                for g, items in sorted(self.entries.items())}


@dataclass
class MappingReport:
    warnings: list = field(default_factory=list)
    gate_table: GateTable = field(default_factory=GateTable)
    unmappable: list = field(default_factory=list)  # of (path, reason)

    def to_dict(self) -> dict:
        return {
            "warnings": list(self.warnings),
            "gateTable": self.gate_table.to_dict(),
            "unmappable": [{"path": p, "reason": r} for p, r in self.unmappable],
        }
