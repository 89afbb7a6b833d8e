"""Abstract syntax of the data-less process algebra.

Action labels are plain strings. Gates are valid identifiers; the two
reserved labels ``i`` (internal) and ``delta`` (successful termination)
can never be gate names, so strings are unambiguous.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from ..labels import DELTA, TAU, label_key

KEYWORDS = frozenset({"process", "endproc", "stop", "exit", "hide", "in", TAU, DELTA})

_GATE_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*\Z")


class PaError(Exception):
    """Base class for errors raised while loading process-algebra text."""


class ReservedGateError(PaError):
    pass


class ArityError(PaError):
    pass


class UnknownProcessError(PaError):
    pass


class UndeclaredGateError(PaError):
    pass


class UnguardedRecursionError(PaError):
    pass


def is_gate_name(name: str) -> bool:
    return bool(_GATE_RE.match(name)) and name not in KEYWORDS


def check_gate(name: str) -> str:
    if name in (TAU, DELTA):
        raise ReservedGateError(f"{name!r} is reserved and cannot be used as a gate")
    if not is_gate_name(name):
        raise PaError(f"invalid gate name {name!r}")
    return name


class Behaviour:
    """Base of all behaviour expressions.

    Subclasses are frozen dataclasses; equality is structural and the hash
    is computed once per node, which keeps state tables over deep terms cheap.
    """

    __slots__ = ()
    TAG = -1

    def _fields(self) -> tuple:
        return tuple(getattr(self, f.name) for f in dataclasses.fields(self))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(self) is not type(other):
            return NotImplemented if not isinstance(other, Behaviour) else False
        if hash(self) != hash(other):
            return False
        return self._fields() == other._fields()

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.TAG, self._fields()))
            object.__setattr__(self, "_hash", h)
        return h

    def __reduce__(self):
        # The cached hash depends on the interpreter's string hashing; never pickle it.
        return (type(self), self._fields())

    def children(self) -> tuple[Behaviour, ...]:
        return ()


@dataclass(frozen=True, eq=False)
class Stop(Behaviour):
    TAG = 0

    def __repr__(self) -> str:
        return "Stop()"


@dataclass(frozen=True, eq=False)
class Exit(Behaviour):
    TAG = 1

    def __repr__(self) -> str:
        return "Exit()"


@dataclass(frozen=True, eq=False)
class Prefix(Behaviour):
    action: str
    then: Behaviour
    TAG = 2

    def __post_init__(self) -> None:
        if self.action == DELTA:
            raise PaError("termination cannot be used as a prefix action")

    def children(self):
        return (self.then,)


@dataclass(frozen=True, eq=False)
class Choice(Behaviour):
    left: Behaviour
    right: Behaviour
    TAG = 3

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class Parallel(Behaviour):
    left: Behaviour
    right: Behaviour
    sync: frozenset = frozenset()
    TAG = 4

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class Enable(Behaviour):
    left: Behaviour
    right: Behaviour
    TAG = 5

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class Disable(Behaviour):
    left: Behaviour
    right: Behaviour
    TAG = 6

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class Hide(Behaviour):
    gates: frozenset
    body: Behaviour
    TAG = 7

    def __post_init__(self) -> None:
        if not self.gates:
            raise PaError("hide requires at least one gate")

    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=False)
class Instantiate(Behaviour):
    process: str
    gates: tuple = ()
    TAG = 8


STOP = Stop()
EXIT = Exit()


def choice(*branches: Behaviour) -> Behaviour:
    """Right-nested choice over one or more branches."""
    return _right_nest(Choice, branches)


def enable(*parts: Behaviour) -> Behaviour:
    return _right_nest(Enable, parts)


def interleave(*parts: Behaviour) -> Behaviour:
    return _right_nest(Parallel, parts)


def parallel(parts: Iterable[Behaviour], sync: Iterable[str]) -> Behaviour:
    sync = frozenset(sync)
    items = list(parts)
    expr = items[-1]
    for item in reversed(items[:-1]):
        expr = Parallel(item, expr, sync)
    return expr


def prefix(actions: Iterable[str], then: Behaviour) -> Behaviour:
    for a in reversed(list(actions)):
        then = Prefix(a, then)
    return then


def hide(gates: Iterable[str], body: Behaviour) -> Behaviour:
    gates = frozenset(gates)
    return Hide(gates, body) if gates else body


def _right_nest(cls, items):
    items = list(items)
    if not items:
        raise ValueError("at least one operand required")
    expr = items[-1]
    for item in reversed(items[:-1]):
        expr = cls(item, expr)
    return expr


@lru_cache(maxsize=None)
def expr_key(e: Behaviour) -> tuple:
    """Canonical total order on expressions: variant tag first, then fields."""
    if isinstance(e, Prefix):
        return (e.TAG, label_key(e.action), expr_key(e.then))
    if isinstance(e, Parallel):
        return (e.TAG, expr_key(e.left), expr_key(e.right), tuple(sorted(e.sync)))
    if isinstance(e, (Choice, Enable, Disable)):
        return (e.TAG, expr_key(e.left), expr_key(e.right))
    if isinstance(e, Hide):
        return (e.TAG, tuple(sorted(e.gates)), expr_key(e.body))
    if isinstance(e, Instantiate):
        return (e.TAG, e.process, e.gates)
    return (e.TAG,)


def free_gates(e: Behaviour) -> frozenset:
    """Gates occurring free in ``e`` (instantiations contribute their actual gates)."""
    return _free_gates(e)


@lru_cache(maxsize=None)
def _free_gates(e: Behaviour) -> frozenset:
    if isinstance(e, Prefix):
        rest = _free_gates(e.then)
        return rest if e.action == TAU else rest | {e.action}
    if isinstance(e, Hide):
        return _free_gates(e.body) - e.gates
    if isinstance(e, Instantiate):
        return frozenset(e.gates)
    out = frozenset()
    for c in e.children():
        out |= _free_gates(c)
    return out


def walk(e: Behaviour) -> Iterator[Behaviour]:
    """Pre-order traversal."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def fresh_gate(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    n = 1
    while f"{base}_{n}" in avoid:
        n += 1
    return f"{base}_{n}"


def rename(e: Behaviour, mapping: Mapping[str, str]) -> Behaviour:
    """Capture-avoiding substitution of free gates."""
    mapping = {k: v for k, v in mapping.items() if k != v}
    if not mapping:
        return e
    return _rename(e, mapping)


def _rename(e: Behaviour, m: dict) -> Behaviour:
    if isinstance(e, (Stop, Exit)):
        return e
    if isinstance(e, Prefix):
        return Prefix(m.get(e.action, e.action), _rename(e.then, m))
    if isinstance(e, Parallel):
        return Parallel(_rename(e.left, m), _rename(e.right, m),
                        frozenset(m.get(g, g) for g in e.sync))
    if isinstance(e, (Choice, Enable, Disable)):
        return type(e)(_rename(e.left, m), _rename(e.right, m))
    if isinstance(e, Instantiate):
        return Instantiate(e.process, tuple(m.get(g, g) for g in e.gates))
    if isinstance(e, Hide):
        inner = {k: v for k, v in m.items() if k not in e.gates}
        if not inner:
            return e
        body_free = _free_gates(e.body)
        targets = {v for k, v in inner.items() if k in body_free}
        gates = set(e.gates)
        body = e.body
        clash = sorted(gates & targets)
        if clash:
            avoid = body_free | targets | gates | set(inner)
            alpha = {}
            for g in clash:
                new = fresh_gate(g, avoid)
                avoid = avoid | {new}
                alpha[g] = new
            body = _rename(body, alpha)
            gates = (gates - set(alpha)) | set(alpha.values())
        return Hide(frozenset(gates), _rename(body, inner))
    raise TypeError(f"not a behaviour expression: {e!r}")


def rename_processes(e: Behaviour, mapping: Mapping[str, str]) -> Behaviour:
    """Replace process names in instantiations."""
    if isinstance(e, Instantiate):
        return Instantiate(mapping.get(e.process, e.process), e.gates)
    if isinstance(e, Prefix):
        return Prefix(e.action, rename_processes(e.then, mapping))
    if isinstance(e, Parallel):
        return Parallel(rename_processes(e.left, mapping), rename_processes(e.right, mapping), e.sync)
    if isinstance(e, (Choice, Enable, Disable)):
        return type(e)(rename_processes(e.left, mapping), rename_processes(e.right, mapping))
    if isinstance(e, Hide):
        return Hide(e.gates, rename_processes(e.body, mapping))
    return e


@dataclass(frozen=True)
class ProcessDef:
    name: str
    gates: tuple
    body: Behaviour


@dataclass(frozen=True)
class Specification:
    """Process definitions keyed by name, in definition order."""

    definitions: Mapping[str, ProcessDef] = field(default_factory=dict)
    entry: str | None = None

    def __post_init__(self) -> None:
        if self.entry is not None and self.entry not in self.definitions:
            raise UnknownProcessError(f"entry process {self.entry!r} is not defined")

    def __getitem__(self, name: str) -> ProcessDef:
        try:
            return self.definitions[name]
        except KeyError:
            raise UnknownProcessError(f"unknown process {name!r}") from None

    def __contains__(self, name: object) -> bool:
        return name in self.definitions

    def __iter__(self) -> Iterator[ProcessDef]:
        return iter(self.definitions.values())

    def __hash__(self) -> int:
        return hash((tuple(self.definitions.values()), self.entry))

    @classmethod
    def of(cls, *defs: ProcessDef, entry: str | None = None) -> Specification:
        table = {}
        for d in defs:
            if d.name in table:
                raise PaError(f"process {d.name!r} defined twice")
            table[d.name] = d
        if entry is None and defs:
            entry = defs[0].name
        return cls(table, entry)

    def with_definitions(self, *defs: ProcessDef, entry: str | None = None) -> Specification:
        table = dict(self.definitions)
        for d in defs:
            table[d.name] = d
        return Specification(table, entry if entry is not None else self.entry)


def check_specification(spec: Specification) -> None:
    """Raise if ``spec`` violates a well-formedness rule."""
    for d in spec:
        if len(set(d.gates)) != len(d.gates):
            raise PaError(f"process {d.name}: duplicate formal gates")
        for g in d.gates:
            check_gate(g)
        for node in walk(d.body):
            if isinstance(node, Instantiate):
                target = spec[node.process]
                if len(target.gates) != len(node.gates):
                    raise ArityError(
                        f"process {d.name}: {node.process} expects {len(target.gates)} "
                        f"gates, got {len(node.gates)}")
            elif isinstance(node, Prefix) and node.action != TAU:
                check_gate(node.action)
            elif isinstance(node, Hide):
                for g in node.gates:
                    check_gate(g)
        extra = free_gates(d.body) - set(d.gates)
        if extra:
            raise UndeclaredGateError(
                f"process {d.name}: gates {sorted(extra)} are not formal parameters")
