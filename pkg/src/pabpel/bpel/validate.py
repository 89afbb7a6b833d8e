"""Static checks on the BPEL document model."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..pa.syntax import KEYWORDS
from .model import (
    BpelProcess, Compensate, Flow, Invoke, Pick, Receive, Reply, Scope,
    Sequence, Switch, Throw, children,
)

# Process names the translation generates for loops, scopes and handlers.
RESERVED_PROCESS_PREFIXES = ("While_", "Scope_", "Mon_", "Free_", "Events_", "Comp_",
                             "StoreIdle_", "StoreInst_")

_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    path: tuple
    code: str
    message: str

    @property
    def location(self) -> str:
        return "/" + "/".join(str(i) for i in self.path)

    def __str__(self) -> str:
        return f"{self.severity} {self.code} at {self.location}: {self.message}"


def validate(proc: BpelProcess) -> list:
    """All invariant violations; empty iff the process is well formed.

    Paths index into :func:`pabpel.bpel.model.children` from the process body.
    """
    out: list[Diagnostic] = []

    def err(path, code, msg):
        out.append(Diagnostic("error", path, code, msg))

    if not _TOKEN.match(proc.name) or proc.name in KEYWORDS:
        err((), "InvalidName", f"process name {proc.name!r} is not an identifier")
    elif proc.name.startswith(RESERVED_PROCESS_PREFIXES):
        err((), "ReservedName", f"process name {proc.name!r} uses a reserved prefix")

    scope_names: dict = {}

    def check_op(path, po):
        for part in (po.partner_link, po.operation):
            if not _TOKEN.match(part):
                err(path, "InvalidName", f"{part!r} is not a valid partner link or operation name")

    def visit(a, path, in_handler):
        if isinstance(a, (Receive, Reply, Invoke)):
            check_op(path, a.op)
        elif isinstance(a, Throw):
            if not _NAME.match(a.fault):
                err(path, "InvalidName", f"fault name {a.fault!r} is not an identifier")
        elif isinstance(a, Compensate):
            if not in_handler:
                err(path, "CompensateOutsideHandler",
                    "compensate is only allowed inside a fault or compensation handler")
        elif isinstance(a, Sequence):
            if not a.children:
                err(path, "EmptySequence", "sequence needs at least one activity")
        elif isinstance(a, Flow):
            if len(a.children) < 2:
                err(path, "FlowArity", "flow needs at least two activities")
        elif isinstance(a, Switch):
            if not a.cases:
                err(path, "EmptySwitch", "switch needs at least one case")
        elif isinstance(a, Pick):
            if not a.on_message:
                err(path, "EmptyPick", "pick needs at least one onMessage")
            for po, _ in a.on_message:
                check_op(path, po)
        elif isinstance(a, Scope):
            if a.name is not None:
                if not _NAME.match(a.name):
                    err(path, "InvalidName", f"scope name {a.name!r} is not an identifier")
                elif a.name in scope_names:
                    err(path, "DuplicateScopeName", f"scope name {a.name!r} used twice")
                scope_names.setdefault(a.name, path)
            catch_all = [i for i, (f, _) in enumerate(a.fault_handlers) if f is None]
            if len(catch_all) > 1:
                err(path, "DuplicateCatchAll", "at most one catchAll per scope")
            elif catch_all and catch_all[0] != len(a.fault_handlers) - 1:
                err(path, "CatchAllNotLast", "catchAll must be the last fault handler")
            named = [f for f, _ in a.fault_handlers if f is not None]
            for f in sorted(set(named)):
                if not _NAME.match(f):
                    err(path, "InvalidName", f"fault name {f!r} is not an identifier")
                if named.count(f) > 1:
                    err(path, "DuplicateCatch", f"fault {f!r} caught twice")
            for po, _ in a.event_handlers:
                check_op(path, po)
        kids = children(a)
        if isinstance(a, Scope):
            n_body_events = 1 + len(a.event_handlers)
            for i, c in enumerate(kids):
                visit(c, path + (i,), in_handler if i < n_body_events else True)
        else:
            for i, c in enumerate(kids):
                visit(c, path + (i,), in_handler)

    visit(proc.body, (), False)
    return out


def errors(proc: BpelProcess) -> list:
    return [d for d in validate(proc) if d.severity == "error"]
