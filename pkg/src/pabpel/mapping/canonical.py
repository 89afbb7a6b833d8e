"""Canonical form used to compare BPEL processes after a round trip.

Rewrites that do not change the translated behaviour:

* nested sequences and nested flows are flattened;
* ``empty`` is dropped from sequences of two or more activities, and a
  one-element sequence becomes its element;
* a switch whose ``otherwise`` is ``empty`` loses the ``otherwise``;
* a one-branch pick without alarm whose branch is ``empty`` becomes a receive;
* a scope without handlers becomes its body.
"""

from __future__ import annotations

import dataclasses

from ..bpel.model import (
    BpelProcess, Empty, Flow, Pick, Receive, Scope, Sequence, Switch, While,
)


def canonical(a):
    if isinstance(a, BpelProcess):
        return dataclasses.replace(a, body=canonical(a.body))
    if isinstance(a, Sequence):
        items = []
        for c in (canonical(c) for c in a.children):
            items.extend(c.children if isinstance(c, Sequence) else [c])
        kept = [c for c in items if not isinstance(c, Empty)]
        if not kept:
            return Empty()
        return kept[0] if len(kept) == 1 else Sequence(tuple(kept))
    if isinstance(a, Flow):
        items = []
        for c in (canonical(c) for c in a.children):
            items.extend(c.children if isinstance(c, Flow) else [c])
        return Flow(tuple(items))
    if isinstance(a, Switch):
        other = canonical(a.otherwise) if a.otherwise is not None else None
        if isinstance(other, Empty):
            other = None
        return Switch(tuple(canonical(c) for c in a.cases), other)
    if isinstance(a, While):
        return While(canonical(a.body))
    if isinstance(a, Pick):
        branches = tuple((po, canonical(c)) for po, c in a.on_message)
        alarm = canonical(a.on_alarm) if a.on_alarm is not None else None
        if len(branches) == 1 and alarm is None and isinstance(branches[0][1], Empty):
            return Receive(branches[0][0])
        return Pick(branches, alarm)
    if isinstance(a, Scope):
        if not a.has_handlers:
            return canonical(a.body)
        return Scope(
            canonical(a.body),
            tuple((f, canonical(h)) for f, h in a.fault_handlers),
            canonical(a.compensation_handler) if a.compensation_handler is not None else None,
            tuple((po, canonical(h)) for po, h in a.event_handlers),
            a.name,
        )
    return a
