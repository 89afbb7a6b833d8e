"""BPEL -> process algebra."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..bpel import model as b
from ..bpel.validate import errors
from ..pa.syntax import (
    EXIT, STOP, Behaviour, Choice, Disable, Enable, Hide, Instantiate,
    Parallel, Prefix, ProcessDef, Specification, choice, enable, free_gates, hide,
    interleave, parallel,
)
from .convention import (
    MappingReport, alarm_gate, fault_gate, kill_gate, scope_gate,
)


class MappingError(Exception):
    pass


class InvalidProcess(MappingError):
    def __init__(self, diagnostics):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))


@dataclass
class _Ctx:
    owner: str | None  # scope whose children a ``compensate`` refers to
    installed: list = field(default_factory=list)  # child scopes with a compensation handler


class _Translator:
    def __init__(self) -> None:
        self.defs: dict[str, ProcessDef] = {}
        self.report = MappingReport()
        self.alarms = 0
        self.loops = 0
        self.anonymous = 0

    def gate(self, g: str, what: str) -> str:
        return self.report.gate_table.add(g, what)

    def define(self, name: str, body: Behaviour, gates=None) -> Instantiate:
        gates = tuple(sorted(free_gates(body) if gates is None else gates))
        assert name not in self.defs, name
        self.defs[name] = ProcessDef(name, gates, body)
        return Instantiate(name, gates)

    def define_recursive(self, name: str, make) -> Instantiate:
        """``make(self_ref)`` builds the body; formal gates exclude the self reference."""
        probe = make(Instantiate(name, ()))
        gates = tuple(sorted(free_gates(probe)))
        ref = Instantiate(name, gates)
        return self.define(name, make(ref), gates)

    def partner(self, po: b.PartnerOp) -> str:
        return self.gate(po.gate, f"{po.direction.value} {po.partner_link}.{po.operation}")

    # -- activities ------------------------------------------------------

    def t(self, a, ctx: _Ctx) -> Behaviour:
        if isinstance(a, b.Receive):
            return Prefix(self.partner(a.op.as_(b.Direction.RECEIVE)), EXIT)
        if isinstance(a, b.Reply):
            return Prefix(self.partner(a.op.as_(b.Direction.REPLY)), EXIT)
        if isinstance(a, b.Invoke):
            req = self.partner(a.op.as_(b.Direction.INVOKE_REQUEST))
            if a.synchronous:
                res = self.partner(a.op.as_(b.Direction.INVOKE_RESPONSE))
                return Prefix(req, Prefix(res, EXIT))
            return Prefix(req, EXIT)
        if isinstance(a, b.Empty):
            return EXIT
        if isinstance(a, b.Terminate):
            return STOP
        if isinstance(a, b.Wait):
            return Prefix(self.alarm(), EXIT)
        if isinstance(a, b.Throw):
            return Prefix(self.gate(fault_gate(a.fault), f"fault {a.fault}"), STOP)
        if isinstance(a, b.Compensate):
            if ctx.owner is None:
                raise MappingError("compensate outside a handler")
            return Prefix(scope_gate("comp", ctx.owner),
                          Prefix(scope_gate("cdone", ctx.owner), EXIT))
        if isinstance(a, b.Sequence):
            return enable(*[self.t(c, ctx) for c in a.children])
        if isinstance(a, b.Flow):
            return interleave(*[self.t(c, ctx) for c in a.children])
        if isinstance(a, b.Switch):
            return self.switch(a, ctx)
        if isinstance(a, b.While):
            return self.loop(a, ctx)
        if isinstance(a, b.Pick):
            branches = [Prefix(self.partner(po), self.t(act, ctx)) for po, act in a.on_message]
            if a.on_alarm is not None:
                alarm = self.alarm()
                branches.append(Prefix(alarm, self.t(a.on_alarm, ctx)))
            return choice(*branches)
        if isinstance(a, b.Scope):
            return self.scope(a, ctx)
        raise TypeError(f"not an activity: {a!r}")

    def alarm(self) -> str:
        self.alarms += 1
        return self.gate(alarm_gate(self.alarms), f"alarm {self.alarms}")

    def switch(self, a: b.Switch, ctx: _Ctx) -> Behaviour:
        arms = [self.t(c, ctx) for c in a.cases]
        arms.append(self.t(a.otherwise, ctx) if a.otherwise is not None else EXIT)
        decisions = [f"dec.{i}" for i in range(1, len(arms) + 1)]
        return Hide(frozenset(decisions),
                    choice(*[Prefix(d, arm) for d, arm in zip(decisions, arms)]))

    def loop(self, a: b.While, ctx: _Ctx) -> Behaviour:
        # The hide sits outside the recursion so each iteration returns to the same state.
        self.loops += 1
        name = f"While_{self.loops}"
        body = self.t(a.body, ctx)
        ref = self.define_recursive(
            name,
            lambda me: Choice(Prefix("dec.t", Enable(body, me)), Prefix("dec.f", EXIT)))
        return Hide(frozenset({"dec.t", "dec.f"}), ref)

    # -- scopes ----------------------------------------------------------

    def scope(self, a: b.Scope, ctx: _Ctx) -> Behaviour:
        if not a.has_handlers:
            return self.t(a.body, ctx)
        if a.name is None:
            self.anonymous += 1
            sid = f"_{self.anonymous}"
        else:
            sid = a.name
        inner = _Ctx(ctx.owner)
        body = self.t(a.body, inner)
        if a.event_handlers:
            body = self.events(sid, a.event_handlers, body, inner)
        handler_uses_store = False
        if a.fault_handlers:
            handlers = []
            for fault, act in a.fault_handlers:
                th = self.t(act, _Ctx(sid))
                handler_uses_store |= scope_gate("comp", sid) in free_gates(th)
                handlers.append((fault, th))
            body = self.fault_monitor(sid, body, handlers)
        if a.compensation_handler is not None:
            th = self.t(a.compensation_handler, _Ctx(sid))
            if scope_gate("comp", sid) in free_gates(th):
                th = self.with_store(sid, th, [self.all_installed(sid, c) for c in inner.installed])
            self.define(f"Comp_{sid}", th)
        if handler_uses_store:
            subs = [self.store_entry(sid, c) for c in inner.installed]
            insts = {scope_gate("inst", c) for c in inner.installed}
            body = self.with_store(sid, body, subs, insts)
        body = hide(sorted(g for g in free_gates(body) if g.startswith("inst.")), body)
        ref = self.define(f"Scope_{sid}", body)
        if a.compensation_handler is None:
            return ref
        ctx.installed.append(sid)
        return Enable(ref, Prefix(scope_gate("inst", sid), EXIT))

    def events(self, sid, handlers, body, ctx) -> Behaviour:
        arms = [(self.partner(po), self.t(act, ctx)) for po, act in handlers]
        loop = self.define_recursive(
            f"Events_{sid}",
            lambda me: choice(*[Prefix(g, Enable(th, me)) for g, th in arms]))
        off = self.gate(scope_gate("eoff", sid), f"end of events {sid}")
        stop_events = Prefix(off, EXIT)
        return Hide(frozenset({off}),
                    Parallel(Enable(body, stop_events), Disable(loop, stop_events),
                             frozenset({off})))

    def fault_monitor(self, sid, body, handlers) -> Behaviour:
        named = [f for f, _ in handlers if f is not None]
        catch_all = any(f is None for f, _ in handlers)
        selector = {fault_gate(f): kill_gate(f) for f in named}
        for f in named:
            self.gate(fault_gate(f), f"fault {f}")
        if catch_all:
            for g in sorted(free_gates(body)):
                if g.startswith("fault.") and g not in selector:
                    selector[g] = kill_gate(None)
        faults = frozenset(selector)
        kills = frozenset(kill_gate(f) for f, _ in handlers)
        others = free_gates(body) - faults
        free = self.define_recursive(
            f"Free_{sid}",
            lambda me: choice(*[Prefix(g, me) for g in sorted(others | faults)], EXIT))
        monitor = self.define_recursive(
            f"Mon_{sid}",
            lambda me: choice(*[Prefix(g, me) for g in sorted(others)],
                              *[Prefix(g, Prefix(selector[g], free)) for g in sorted(faults)],
                              EXIT))
        arm = choice(*[Prefix(kill_gate(f), th) for f, th in handlers])
        return Hide(faults | kills,
                    Parallel(Disable(body, arm), monitor, others | faults | kills))

    def store_entry(self, sid: str, child: str) -> Behaviour:
        """Parent-side record of whether ``child`` has completed and may be compensated."""
        inst, comp, done = (scope_gate(k, x) for k, x in
                            (("inst", child), ("comp", sid), ("cdone", sid)))
        run = Enable(self.comp_ref(child), Prefix(done, EXIT))
        installed = self.define_recursive(
            f"StoreInst_{child}",
            lambda me: choice(Prefix(inst, me), EXIT, Prefix(comp, run)))
        return self.define(f"StoreIdle_{child}",
                           choice(Prefix(inst, installed), EXIT, Prefix(comp, Prefix(done, EXIT))))

    def all_installed(self, sid: str, child: str) -> Behaviour:
        comp, done = scope_gate("comp", sid), scope_gate("cdone", sid)
        return Choice(EXIT, Prefix(comp, Enable(self.comp_ref(child), Prefix(done, EXIT))))

    def comp_ref(self, child: str) -> Instantiate:
        d = self.defs[f"Comp_{child}"]
        return Instantiate(d.name, d.gates)

    def with_store(self, sid, body, subs, extra=frozenset()) -> Behaviour:
        comp, done = scope_gate("comp", sid), scope_gate("cdone", sid)
        base = Choice(EXIT, Prefix(comp, Prefix(done, EXIT)))
        sync = frozenset({comp, done})
        store = parallel([*subs, base], sync)
        gates = sync | frozenset(extra)
        return Hide(gates, Parallel(body, store, gates))


def bpel_to_pa(proc: b.BpelProcess) -> tuple[Specification, MappingReport]:
    """Translate a validated process; the entry process carries the process name."""
    problems = errors(proc)
    if problems:
        raise InvalidProcess(problems)
    tr = _Translator()
    tr.report.warnings.extend(proc.warnings)
    body = tr.t(proc.body, _Ctx(None))
    body = hide(sorted(g for g in free_gates(body) if g.startswith("inst.")), body)
    entry = ProcessDef(proc.name, tuple(sorted(free_gates(body))), body)
    defs = {proc.name: entry, **tr.defs}
    return Specification(defs, proc.name), tr.report
