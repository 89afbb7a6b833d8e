"""Document model for the supported BPEL subset."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


class Direction(str, enum.Enum):
    RECEIVE = "rcv"
    REPLY = "rep"
    INVOKE_REQUEST = "inv"
    INVOKE_RESPONSE = "res"


@dataclass(frozen=True)
class PartnerOp:
    partner_link: str
    operation: str
    direction: Direction = Direction.RECEIVE

    @property
    def gate(self) -> str:
        return f"{self.partner_link}.{self.operation}.{self.direction.value}"

    def as_(self, direction: Direction) -> PartnerOp:
        return PartnerOp(self.partner_link, self.operation, direction)


@dataclass(frozen=True)
class Receive:
    op: PartnerOp


@dataclass(frozen=True)
class Reply:
    op: PartnerOp


@dataclass(frozen=True)
class Invoke:
    op: PartnerOp
    synchronous: bool = False


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Terminate:
    pass


@dataclass(frozen=True)
class Wait:
    pass


@dataclass(frozen=True)
class Throw:
    fault: str


@dataclass(frozen=True)
class Compensate:
    pass


@dataclass(frozen=True)
class Sequence:
    children: tuple


@dataclass(frozen=True)
class Switch:
    cases: tuple
    otherwise: Optional["Activity"] = None


@dataclass(frozen=True)
class While:
    body: "Activity"


@dataclass(frozen=True)
class Pick:
    on_message: tuple  # of (PartnerOp, Activity)
    on_alarm: Optional["Activity"] = None


@dataclass(frozen=True)
class Flow:
    children: tuple


@dataclass(frozen=True)
class Scope:
    body: "Activity"
    fault_handlers: tuple = ()  # of (fault name or None for catchAll, Activity)
    compensation_handler: Optional["Activity"] = None
    event_handlers: tuple = ()  # of (PartnerOp, Activity)
    name: Optional[str] = None

    @property
    def has_handlers(self) -> bool:
        return bool(self.fault_handlers or self.event_handlers
                    or self.compensation_handler is not None)


Activity = Union[Receive, Reply, Invoke, Empty, Terminate, Wait, Throw, Compensate,
                 Sequence, Switch, While, Pick, Flow, Scope]

BASIC = (Receive, Reply, Invoke, Empty, Terminate, Wait, Throw, Compensate)


@dataclass(frozen=True)
class BpelProcess:
    name: str
    body: Activity
    warnings: tuple = field(default=(), compare=False)


def children(a: Activity) -> list:
    """Direct sub-activities in document order.

    For a scope: body, event handlers, fault handlers, then the
    compensation handler. Diagnostic paths index into this list.
    """
    if isinstance(a, (Sequence, Flow)):
        return list(a.children)
    if isinstance(a, Switch):
        return list(a.cases) + ([a.otherwise] if a.otherwise is not None else [])
    if isinstance(a, While):
        return [a.body]
    if isinstance(a, Pick):
        return [act for _, act in a.on_message] + ([a.on_alarm] if a.on_alarm is not None else [])
    if isinstance(a, Scope):
        out = [a.body]
        out += [act for _, act in a.event_handlers]
        out += [act for _, act in a.fault_handlers]
        if a.compensation_handler is not None:
            out.append(a.compensation_handler)
        return out
    return []


def walk(a: Activity, path: tuple = ()) -> Iterator[tuple]:
    """Pre-order ``(path, activity)`` pairs."""
    yield path, a
    for i, c in enumerate(children(a)):
        yield from walk(c, path + (i,))


def partner_ops(proc: BpelProcess) -> list:
    """The static partner table: every partner operation used, in first-use order."""
    seen: dict = {}
    for _, a in walk(proc.body):
        ops = []
        if isinstance(a, Receive):
            ops = [a.op]
        elif isinstance(a, Reply):
            ops = [a.op.as_(Direction.REPLY)]
        elif isinstance(a, Invoke):
            ops = [a.op.as_(Direction.INVOKE_REQUEST)]
            if a.synchronous:
                ops.append(a.op.as_(Direction.INVOKE_RESPONSE))
        elif isinstance(a, Pick):
            ops = [po for po, _ in a.on_message]
        elif isinstance(a, Scope):
            ops = [po for po, _ in a.event_handlers]
        for op in ops:
            seen.setdefault(op, None)
    return list(seen)
