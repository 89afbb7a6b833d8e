"""Process algebra -> BPEL, by recognising the schemes ``bpel_to_pa`` generates.

This is not a general decompiler: terms outside the recognised shapes are
reported as unmappable, with their position in the term.
"""

from __future__ import annotations

import re

from ..bpel import model as b
from ..pa.syntax import (
    EXIT, TAU, Behaviour, Choice, Disable, Enable, Exit, Hide, Instantiate,
    Parallel, Prefix, Specification, Stop, rename,
)
from .canonical import canonical
from .convention import CATCH_ALL, MappingReport, parse_gate, scope_gate
from .to_pa import MappingError, bpel_to_pa


class UnmappableConstruct(MappingError):
    """The term contains constructs outside the mappable subset; ``report.unmappable`` lists them."""

    def __init__(self, report: MappingReport):
        self.report = report
        first = report.unmappable[0]
        more = f" (and {len(report.unmappable) - 1} more)" if len(report.unmappable) > 1 else ""
        super().__init__(f"{first[0]}: {first[1]}{more}")


class _Unmappable(Exception):
    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason


_ANON = re.compile(r"_\d+\Z")


def _flatten(e: Behaviour, cls, stop=lambda e: False, sync=None) -> list:
    if isinstance(e, cls) and not stop(e) and (sync is None or e.sync == sync):
        return _flatten(e.left, cls, stop, sync) + _flatten(e.right, cls, stop, sync)
    return [e]


def _only(gates, kind: str) -> bool:
    return all((parse_gate(g) or ("",))[0] == kind for g in gates)


class _Recognizer:
    def __init__(self, spec: Specification):
        self.spec = spec
        self.report = MappingReport()
        self.inlining: list[str] = []

    def fail(self, path: str, reason: str) -> b.Empty:
        self.report.unmappable.append((path, reason))
        return b.Empty()

    def activity(self, e: Behaviour, path: str):
        try:
            return self._activity(e, path)
        except _Unmappable as exc:
            return self.fail(exc.path, exc.reason)

    def _activity(self, e: Behaviour, path: str):
        if isinstance(e, Exit):
            return b.Empty()
        if isinstance(e, Stop):
            return b.Terminate()
        if isinstance(e, Prefix):
            return self.prefix(e, path)
        if isinstance(e, Choice):
            return self.pick(_flatten(e, Choice), path)
        if isinstance(e, Enable):
            if self.scope_with_install(e):
                return self.scope(e.left, path)
            parts = _flatten(e, Enable, stop=self.scope_with_install)
            return b.Sequence(tuple(self.activity(p, f"{path}.{i}") for i, p in enumerate(parts)))
        if isinstance(e, Parallel):
            if e.sync:
                raise _Unmappable(path, "parallel composition with synchronisation "
                                        f"on {sorted(e.sync)} outside a scope scheme")
            parts = _flatten(e, Parallel, sync=frozenset())
            return b.Flow(tuple(self.activity(p, f"{path}.{i}") for i, p in enumerate(parts)))
        if isinstance(e, Hide):
            return self.hide(e, path)
        if isinstance(e, Instantiate):
            return self.instantiate(e, path)
        if isinstance(e, Disable):
            raise _Unmappable(path, "disabling outside the scope fault-monitor scheme")
        raise _Unmappable(path, f"unsupported term {type(e).__name__}")

    # -- basic activities and picks ------------------------------------

    def prefix(self, e: Prefix, path: str):
        if e.action == TAU:
            raise _Unmappable(path, "internal action outside a switch or loop scheme")
        parsed = parse_gate(e.action)
        if parsed is None:
            raise _Unmappable(path, f"gate {e.action!r} is outside the naming convention")
        kind, what = parsed
        rest = e.then
        if kind == "partner":
            d = what.direction
            if d is b.Direction.RECEIVE:
                if rest == EXIT:
                    return b.Receive(what)
                return b.Pick(((what, self.activity(rest, path + ".0")),))
            if d is b.Direction.REPLY:
                return self.then(b.Reply(what), rest, path)
            if d is b.Direction.INVOKE_REQUEST:
                res = what.as_(b.Direction.INVOKE_RESPONSE).gate
                if isinstance(rest, Prefix) and rest.action == res:
                    return self.then(b.Invoke(what, True), rest.then, path)
                return self.then(b.Invoke(what, False), rest, path)
            raise _Unmappable(path, f"response gate {e.action!r} without a preceding request")
        if kind == "fault":
            if isinstance(rest, Stop):
                return b.Throw(what)
            raise _Unmappable(path, f"fault gate {e.action!r} must be followed by stop")
        if kind == "alarm":
            return self.then(b.Wait(), rest, path)
        if kind == "comp":
            done = scope_gate("cdone", what)
            if isinstance(rest, Prefix) and rest.action == done and rest.then == EXIT:
                return b.Compensate()
            raise _Unmappable(path, "compensation gate outside the compensate scheme")
        raise _Unmappable(path, f"gate {e.action!r} is only valid inside a generated scheme")

    def then(self, first, rest: Behaviour, path: str):
        if rest == EXIT:
            return first
        return b.Sequence((first, self.activity(rest, path + ".0")))

    def pick(self, branches: list, path: str):
        messages, alarm = [], None
        for i, br in enumerate(branches):
            bpath = f"{path}.{i}"
            kind = parse_gate(br.action) if isinstance(br, Prefix) and br.action != TAU else None
            if kind and kind[0] == "partner" and kind[1].direction is b.Direction.RECEIVE:
                messages.append((kind[1], self.activity(br.then, bpath + ".0")))
            elif kind and kind[0] == "alarm" and i == len(branches) - 1 and alarm is None:
                alarm = self.activity(br.then, bpath + ".0")
            else:
                raise _Unmappable(bpath, "choice branch is not guarded by a receive gate")
        if not messages:
            raise _Unmappable(path, "choice has no receive-guarded branch")
        return b.Pick(tuple(messages), alarm)

    # -- hidden-choice schemes ------------------------------------------

    def hide(self, e: Hide, path: str):
        if _only(e.gates, "inst"):
            return self.activity(e.body, path + ".0")
        if (e.gates == {"dec.t", "dec.f"} and isinstance(e.body, Instantiate)
                and e.body.process.startswith("While_")):
            return self.loop(e.body, path)
        if _only(e.gates, "dec"):
            arms = _flatten(e.body, Choice)
            guards = [a.action if isinstance(a, Prefix) else None for a in arms]
            if len(arms) >= 2 and set(guards) == set(e.gates) and len(set(guards)) == len(arms):
                acts = [self.activity(a.then, f"{path}.{i}") for i, a in enumerate(arms)]
                return b.Switch(tuple(acts[:-1]), acts[-1])
            raise _Unmappable(path, "hidden decision gates outside the switch scheme")
        raise _Unmappable(path, f"hiding of {sorted(e.gates)} outside a generated scheme")

    def instantiate(self, e: Instantiate, path: str):
        if e.process not in self.spec:
            raise _Unmappable(path, f"unknown process {e.process!r}")
        if e.process.startswith("Scope_"):
            return self.scope(e, path)
        if e.process in self.inlining:
            raise _Unmappable(path, f"recursion through {e.process!r} outside the loop scheme")
        d = self.spec[e.process]
        self.inlining.append(e.process)
        try:
            return self.activity(rename(d.body, dict(zip(d.gates, e.gates))), f"{path}/{e.process}")
        finally:
            self.inlining.pop()

    def loop(self, e: Instantiate, path: str):
        """``hide dec.t,dec.f in W`` with ``W := dec.t; (B >> W) [] dec.f; exit``."""
        d = self.spec[e.process]
        body = d.body
        if (tuple(e.gates) == tuple(d.gates) and isinstance(body, Choice)
                and isinstance(body.left, Prefix) and body.left.action == "dec.t"
                and isinstance(body.left.then, Enable) and body.left.then.right == e
                and body.right == Prefix("dec.f", EXIT)):
            return b.While(self.activity(body.left.then.left, f"{path}/{e.process}"))
        raise _Unmappable(path, f"process {e.process!r} does not follow the loop scheme")

    # -- scopes -----------------------------------------------------------

    def scope_with_install(self, e: Behaviour) -> bool:
        if not (isinstance(e, Enable) and isinstance(e.left, Instantiate)
                and e.left.process.startswith("Scope_")):
            return False
        sid = e.left.process[len("Scope_"):]
        return e.right == Prefix(scope_gate("inst", sid), EXIT)

    def generated(self, name: str, path: str) -> Behaviour:
        if name not in self.spec:
            raise _Unmappable(path, f"missing generated process {name!r}")
        return self.spec[name].body

    def scope(self, inst: Instantiate, path: str):
        sid = inst.process[len("Scope_"):]
        d = self.spec[inst.process]
        if tuple(inst.gates) != tuple(d.gates):
            raise _Unmappable(path, f"scope process {inst.process!r} instantiated with renamed gates")
        spath = f"{path}/{inst.process}"
        body = d.body
        if isinstance(body, Hide) and _only(body.gates, "inst"):
            body = body.body
        comp = {scope_gate("comp", sid), scope_gate("cdone", sid)}
        if isinstance(body, Hide) and comp <= body.gates and isinstance(body.body, Parallel):
            body = body.body.left
        faults = ()
        if (isinstance(body, Hide) and isinstance(body.body, Parallel)
                and isinstance(body.body.left, Disable)
                and isinstance(body.body.right, Instantiate)
                and body.body.right.process == f"Mon_{sid}"):
            monitored = body.body.left
            faults = tuple(self.handlers(_flatten(monitored.right, Choice), spath))
            body = monitored.left
        events = ()
        off = scope_gate("eoff", sid)
        if isinstance(body, Hide) and body.gates == {off} and isinstance(body.body, Parallel):
            par = body.body
            if (isinstance(par.left, Enable) and par.left.right == Prefix(off, EXIT)
                    and isinstance(par.right, Disable)
                    and isinstance(par.right.left, Instantiate)
                    and par.right.left.process == f"Events_{sid}"):
                events = tuple(self.event_handlers(par.right.left, spath))
                body = par.left.left
        main = self.activity(body, spath + ".0")
        handler = None
        if f"Comp_{sid}" in self.spec:
            ch = self.spec[f"Comp_{sid}"].body
            if isinstance(ch, Hide) and comp <= ch.gates and isinstance(ch.body, Parallel):
                ch = ch.body.left
            handler = self.activity(ch, f"{path}/Comp_{sid}")
        name = None if _ANON.match(sid) else sid
        return b.Scope(main, faults, handler, events, name)

    def handlers(self, arms: list, path: str):
        for i, arm in enumerate(arms):
            parsed = parse_gate(arm.action) if isinstance(arm, Prefix) else None
            if not parsed or parsed[0] != "kill":
                raise _Unmappable(f"{path}.h{i}", "fault handler not selected by a kill gate")
            fault = None if parsed[1] == CATCH_ALL else parsed[1]
            yield fault, self.activity(arm.then, f"{path}.h{i}")

    def event_handlers(self, loop: Instantiate, path: str):
        body = self.generated(loop.process, path)
        for i, arm in enumerate(_flatten(body, Choice)):
            epath = f"{path}.e{i}"
            parsed = parse_gate(arm.action) if isinstance(arm, Prefix) else None
            if (not parsed or parsed[0] != "partner"
                    or parsed[1].direction is not b.Direction.RECEIVE
                    or not isinstance(arm.then, Enable) or arm.then.right != loop):
                raise _Unmappable(epath, "event handler outside the event-loop scheme")
            yield parsed[1], self.activity(arm.then.left, epath)


def pa_to_bpel(spec: Specification, entry: str | None = None) -> tuple[b.BpelProcess, MappingReport]:
    """Recover a BPEL process from a specification in the mappable subset.

    Raises :class:`UnmappableConstruct` carrying the report when any subterm
    falls outside the recognised schemes. The result is in canonical form.
    """
    entry = entry if entry is not None else spec.entry
    if entry is None or entry not in spec:
        raise MappingError(f"entry process {entry!r} is not defined")
    rec = _Recognizer(spec)
    body = spec[entry].body
    if isinstance(body, Hide) and _only(body.gates, "inst"):
        body = body.body
    activity = rec.activity(body, entry)
    if rec.report.unmappable:
        raise UnmappableConstruct(rec.report)
    proc = canonical(b.BpelProcess(entry, activity))
    # the table lists the gates of the recovered process as bpel_to_pa names them
    rec.report.gate_table = bpel_to_pa(proc)[1].gate_table
    return proc, rec.report
