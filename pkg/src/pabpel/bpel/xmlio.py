"""Reading and writing BPEL4WS 1.1 documents."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from xml.sax.saxutils import quoteattr

from .model import (
    BpelProcess, Compensate, Direction, Empty, Flow, Invoke, PartnerOp, Pick,
    Receive, Reply, Scope, Sequence, Switch, Terminate, Throw, Wait, While,
)

BPEL_NS = "http://schemas.xmlsoap.org/ws/2003/03/business-process/"
ACCEPTED_NS = {
    "",
    BPEL_NS,
    "http://schemas.xmlsoap.org/ws/2004/03/business-process/",
    "http://docs.oasis-open.org/wsbpel/2.0/process/executable",
    "http://docs.oasis-open.org/wsbpel/2.0/process/abstract",
}

# declarations with no behavioural content in the data-less model
_DISCARDED = {"partnerLinks", "partners", "variables", "correlationSets",
              "correlations", "documentation", "messageExchanges", "extensions",
              "import", "toParts", "fromParts"}
_LINKS = {"links", "source", "target", "sources", "targets"}
_ACTIVITIES = {"receive", "reply", "invoke", "empty", "terminate", "exit", "wait",
               "throw", "compensate", "compensateScope", "sequence", "switch", "if",
               "while", "pick", "flow", "scope", "assign"}


class BpelError(Exception):
    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class MalformedXml(BpelError):
    pass


class UnknownElement(BpelError):
    def __init__(self, name: str, location: str):
        self.name = name
        super().__init__(f"element <{name}> is not supported", location)


class MissingAttribute(BpelError):
    def __init__(self, attribute: str, location: str):
        self.attribute = attribute
        super().__init__(f"missing required attribute {attribute!r}", location)


class FlowLinkUnsupported(BpelError):
    def __init__(self, location: str):
        super().__init__("flow links are not supported", location)


class StructureError(BpelError):
    pass


class CompensateOutsideHandler(BpelError):
    def __init__(self, location: str):
        super().__init__("compensate is only allowed inside a fault or compensation handler",
                         location)


def _split(tag: str) -> tuple[str, str]:
    if tag.startswith("{"):
        ns, _, local = tag[1:].partition("}")
        return ns, local
    return "", tag


class _Reader:
    def __init__(self) -> None:
        self.warnings: list[str] = []

    def warn(self, loc: str, msg: str) -> None:
        self.warnings.append(f"{loc}: {msg}")

    def local(self, el: ET.Element, loc: str) -> str:
        ns, name = _split(el.tag)
        if ns not in ACCEPTED_NS:
            raise UnknownElement(el.tag, loc)
        return name

    def attr(self, el: ET.Element, name: str, loc: str) -> str:
        value = el.get(name)
        if value is None or not value.strip():
            raise MissingAttribute(name, loc)
        return value.strip()

    def qname(self, el: ET.Element, name: str, loc: str) -> str:
        value = self.attr(el, name, loc)
        if ":" in value:
            self.warn(loc, f"namespace prefix dropped from {name}={value!r}")
            value = value.split(":", 1)[1]
        return value

    def items(self, el: ET.Element, loc: str):
        """Child elements with their locations, skipping discarded declarations."""
        counts: dict = {}
        for child in el:
            if not isinstance(child.tag, str):
                continue  # comments and processing instructions
            name = self.local(child, loc)
            counts[name] = counts.get(name, 0) + 1
            cloc = f"{loc}/{name}[{counts[name]}]"
            if name in _LINKS:
                raise FlowLinkUnsupported(cloc)
            if name in _DISCARDED:
                self.warn(cloc, f"<{name}> ignored (data-less model)")
                continue
            if name == "condition":
                self.warn(cloc, "condition discarded; branch becomes a nondeterministic choice")
                continue
            yield name, child, cloc

    def one_activity(self, el: ET.Element, loc: str, allowed=()):
        acts = []
        for name, child, cloc in self.items(el, loc):
            if name in _ACTIVITIES:
                acts.append((name, child, cloc))
            elif name not in allowed:
                raise UnknownElement(name, cloc)
        if len(acts) != 1:
            raise StructureError(f"expected exactly one activity, found {len(acts)}", loc)
        return self.activity(*acts[0])

    def partner(self, el, loc, direction) -> PartnerOp:
        return PartnerOp(self.attr(el, "partnerLink", loc), self.attr(el, "operation", loc),
                         direction)

    def activity(self, name: str, el: ET.Element, loc: str):
        if name == "receive":
            self._leaf(el, loc)
            return Receive(self.partner(el, loc, Direction.RECEIVE))
        if name == "reply":
            self._leaf(el, loc)
            return Reply(self.partner(el, loc, Direction.REPLY))
        if name == "invoke":
            self._leaf(el, loc)
            return Invoke(self.partner(el, loc, Direction.INVOKE_REQUEST),
                          synchronous=el.get("outputVariable") is not None)
        if name == "empty":
            self._leaf(el, loc)
            return Empty()
        if name in ("terminate", "exit"):
            self._leaf(el, loc)
            return Terminate()
        if name == "wait":
            self._leaf(el, loc, allowed=("for", "until"))
            for key in ("for", "until"):
                if el.get(key) is not None:
                    self.warn(loc, f"wait {key}= duration discarded")
            return Wait()
        if name == "throw":
            self._leaf(el, loc)
            return Throw(self.qname(el, "faultName", loc))
        if name in ("compensate", "compensateScope"):
            self._leaf(el, loc)
            if el.get("scope") or el.get("target"):
                self.warn(loc, "compensation target ignored; all completed child scopes are compensated")
            return Compensate()
        if name == "assign":
            self.warn(loc, "<assign> treated as <empty/> (data-less model)")
            return Empty()
        if name == "sequence":
            return Sequence(tuple(self.activities(el, loc)))
        if name == "flow":
            return Flow(tuple(self.activities(el, loc)))
        if name == "while":
            if el.get("condition") is not None:
                self.warn(loc, "condition discarded; loop exit becomes a nondeterministic choice")
            return While(self.one_activity(el, loc))
        if name == "switch":
            return self.switch(el, loc)
        if name == "if":
            return self.if_(el, loc)
        if name == "pick":
            return self.pick(el, loc)
        if name == "scope":
            return self.scope(el, loc, self.qname(el, "name", loc) if el.get("name") else None)
        raise UnknownElement(name, loc)

    def _leaf(self, el, loc, allowed=()) -> None:
        for name, _child, cloc in self.items(el, loc):
            if name not in allowed:
                raise UnknownElement(name, cloc)
            self.warn(cloc, f"<{name}> ignored")

    def activities(self, el, loc) -> list:
        out = []
        for name, child, cloc in self.items(el, loc):
            if name not in _ACTIVITIES:
                raise UnknownElement(name, cloc)
            out.append(self.activity(name, child, cloc))
        return out

    def switch(self, el, loc) -> Switch:
        cases, otherwise = [], None
        for name, child, cloc in self.items(el, loc):
            if name == "case":
                if child.get("condition") is not None:
                    self.warn(cloc, "condition discarded; case becomes a nondeterministic choice")
                cases.append(self.one_activity(child, cloc))
            elif name == "otherwise" and otherwise is None:
                otherwise = self.one_activity(child, cloc)
            else:
                raise UnknownElement(name, cloc)
        return Switch(tuple(cases), otherwise)

    def if_(self, el, loc) -> Switch:
        self.warn(loc, "<if> read as <switch>")
        cases, otherwise, then = [], None, []
        for name, child, cloc in self.items(el, loc):
            if name in _ACTIVITIES:
                then.append(self.activity(name, child, cloc))
            elif name == "elseif":
                cases.append(self.one_activity(child, cloc))
            elif name == "else" and otherwise is None:
                otherwise = self.one_activity(child, cloc)
            else:
                raise UnknownElement(name, cloc)
        if len(then) != 1:
            raise StructureError("<if> needs exactly one activity", loc)
        return Switch(tuple(then + cases), otherwise)

    def pick(self, el, loc) -> Pick:
        branches, alarm = [], None
        for name, child, cloc in self.items(el, loc):
            if name == "onMessage":
                po = self.partner(child, cloc, Direction.RECEIVE)
                branches.append((po, self.one_activity(child, cloc)))
            elif name == "onAlarm" and alarm is None:
                alarm = self.one_activity(child, cloc, allowed=("for", "until", "repeatEvery"))
            else:
                raise UnknownElement(name, cloc)
        return Pick(tuple(branches), alarm)

    def scope(self, el, loc, name) -> Scope:
        faults, comp, events, body = [], None, [], []
        for tag, child, cloc in self.items(el, loc):
            if tag == "faultHandlers":
                faults.extend(self.fault_handlers(child, cloc))
            elif tag == "compensationHandler" and comp is None:
                comp = self.one_activity(child, cloc)
            elif tag == "eventHandlers":
                events.extend(self.event_handlers(child, cloc))
            elif tag in _ACTIVITIES:
                body.append(self.activity(tag, child, cloc))
            else:
                raise UnknownElement(tag, cloc)
        if len(body) != 1:
            raise StructureError(f"expected exactly one activity, found {len(body)}", loc)
        return Scope(body[0], tuple(faults), comp, tuple(events), name)

    def fault_handlers(self, el, loc) -> list:
        out = []
        for name, child, cloc in self.items(el, loc):
            if name == "catch":
                out.append((self.qname(child, "faultName", cloc), self.one_activity(child, cloc)))
            elif name == "catchAll":
                out.append((None, self.one_activity(child, cloc)))
            else:
                raise UnknownElement(name, cloc)
        return out

    def event_handlers(self, el, loc) -> list:
        out = []
        for name, child, cloc in self.items(el, loc):
            if name in ("onMessage", "onEvent"):
                po = self.partner(child, cloc, Direction.RECEIVE)
                out.append((po, self.one_activity(child, cloc, allowed=("scope",))))
            else:
                raise UnknownElement(name, cloc)
        return out


def parse_bpel(text: str) -> BpelProcess:
    """Parse a BPEL document into the structural model.

    Conditions, variables, assignments and durations are discarded with a
    warning (see ``BpelProcess.warnings``). Process-level handlers make the
    body an unnamed top-level scope.
    """
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise MalformedXml(str(exc)) from None
    reader = _Reader()
    loc = "/process"
    if reader.local(root, loc) != "process":
        raise UnknownElement(root.tag, "/")
    name = reader.attr(root, "name", loc)
    scope = reader.scope(root, loc, None)
    body = scope if scope.has_handlers else scope.body
    proc = BpelProcess(name, body, tuple(reader.warnings))
    from .validate import validate

    for d in validate(proc):
        if d.code == "CompensateOutsideHandler":
            raise CompensateOutsideHandler(d.location)
    return proc


# -- writer ------------------------------------------------------------------

class _Writer:
    def __init__(self) -> None:
        self.lines: list[str] = []

    def emit(self, depth: int, text: str) -> None:
        self.lines.append("  " * depth + text)

    def element(self, depth, tag, attrs=(), kids=None):
        attr_text = "".join(f" {k}={quoteattr(v)}" for k, v in attrs)
        if not kids:
            self.emit(depth, f"<{tag}{attr_text}/>")
            return
        self.emit(depth, f"<{tag}{attr_text}>")
        for kid in kids:
            kid(depth + 1)
        self.emit(depth, f"</{tag}>")

    def act(self, a):
        return lambda d: self.activity(d, a)

    def activity(self, d: int, a) -> None:
        if isinstance(a, Receive):
            self.element(d, "receive", _po(a.op))
        elif isinstance(a, Reply):
            self.element(d, "reply", _po(a.op))
        elif isinstance(a, Invoke):
            attrs = _po(a.op) + ([("outputVariable", "response")] if a.synchronous else [])
            self.element(d, "invoke", attrs)
        elif isinstance(a, Empty):
            self.element(d, "empty")
        elif isinstance(a, Terminate):
            self.element(d, "terminate")
        elif isinstance(a, Wait):
            self.element(d, "wait", [("for", "'PT0S'")])
        elif isinstance(a, Throw):
            self.element(d, "throw", [("faultName", a.fault)])
        elif isinstance(a, Compensate):
            self.element(d, "compensate")
        elif isinstance(a, Sequence):
            self.element(d, "sequence", kids=[self.act(c) for c in a.children])
        elif isinstance(a, Flow):
            self.element(d, "flow", kids=[self.act(c) for c in a.children])
        elif isinstance(a, While):
            self.element(d, "while", [("condition", "true()")], [self.act(a.body)])
        elif isinstance(a, Switch):
            kids = [lambda dd, c=c: self.element(dd, "case", [("condition", "true()")], [self.act(c)])
                    for c in a.cases]
            if a.otherwise is not None:
                kids.append(lambda dd: self.element(dd, "otherwise", kids=[self.act(a.otherwise)]))
            self.element(d, "switch", kids=kids)
        elif isinstance(a, Pick):
            kids = [lambda dd, po=po, c=c: self.element(dd, "onMessage", _po(po), [self.act(c)])
                    for po, c in a.on_message]
            if a.on_alarm is not None:
                kids.append(lambda dd: self.element(dd, "onAlarm", [("for", "'PT0S'")],
                                                    [self.act(a.on_alarm)]))
            self.element(d, "pick", kids=kids)
        elif isinstance(a, Scope):
            self.element(d, "scope", [("name", a.name)] if a.name else [], self.scope_kids(a))
        else:
            raise TypeError(f"not an activity: {a!r}")

    def scope_kids(self, a: Scope) -> list:
        kids = []
        if a.fault_handlers:
            handlers = [
                (lambda dd, f=f, h=h: self.element(dd, "catch", [("faultName", f)], [self.act(h)]))
                if f is not None else
                (lambda dd, h=h: self.element(dd, "catchAll", kids=[self.act(h)]))
                for f, h in a.fault_handlers
            ]
            kids.append(lambda dd: self.element(dd, "faultHandlers", kids=handlers))
        if a.compensation_handler is not None:
            kids.append(lambda dd: self.element(dd, "compensationHandler",
                                                kids=[self.act(a.compensation_handler)]))
        if a.event_handlers:
            events = [lambda dd, po=po, h=h: self.element(dd, "onMessage", _po(po), [self.act(h)])
                      for po, h in a.event_handlers]
            kids.append(lambda dd: self.element(dd, "eventHandlers", kids=events))
        kids.append(self.act(a.body))
        return kids


def _po(po: PartnerOp) -> list:
    return [("partnerLink", po.partner_link), ("operation", po.operation)]


def serialize_bpel(proc: BpelProcess) -> str:
    """Deterministic BPEL4WS 1.1 text; parses back to an equal process."""
    w = _Writer()
    w.lines.append('<?xml version="1.0" encoding="UTF-8"?>')
    w.lines.append(f"<process name={quoteattr(proc.name)} xmlns={quoteattr(BPEL_NS)}>")
    w.activity(1, proc.body)
    w.lines.append("</process>")
    return "\n".join(w.lines) + "\n"


__all__ = ["parse_bpel", "serialize_bpel", "BpelError", "MalformedXml", "UnknownElement",
           "MissingAttribute", "FlowLinkUnsupported", "StructureError",
           "CompensateOutsideHandler", "BPEL_NS"]
