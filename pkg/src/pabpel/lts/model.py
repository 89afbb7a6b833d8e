"""Explicit labelled transition systems and the Aldebaran ``.aut`` format."""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

from ..labels import TAU, label_key


class AutFormatError(ValueError):
    pass


def transition_key(t: tuple) -> tuple:
    return (t[0], label_key(t[1]), t[2])


@dataclass(frozen=True)
class Lts:
    num_states: int
    initial: int
    transitions: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.num_states < 1:
            raise ValueError("an LTS has at least one state")
        if not 0 <= self.initial < self.num_states:
            raise ValueError(f"initial state {self.initial} out of range")
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        for s, _, t in self.transitions:
            if not (0 <= s < self.num_states and 0 <= t < self.num_states):
                raise ValueError(f"transition ({s}, {t}) out of range")

    @cached_property
    def sorted_transitions(self) -> tuple:
        return tuple(sorted(self.transitions, key=transition_key))

    @cached_property
    def successors(self) -> tuple:
        """Per state, the sorted tuple of ``(label, target)`` pairs."""
        out = [[] for _ in range(self.num_states)]
        for s, a, t in self.sorted_transitions:
            out[s].append((a, t))
        return tuple(tuple(x) for x in out)

    @cached_property
    def predecessors(self) -> tuple:
        out = [[] for _ in range(self.num_states)]
        for s, a, t in self.sorted_transitions:
            out[t].append((a, s))
        return tuple(tuple(x) for x in out)

    @cached_property
    def labels(self) -> tuple:
        return tuple(sorted({a for _, a, _ in self.transitions}, key=label_key))

    def enabled(self, state: int) -> frozenset:
        return frozenset(a for a, _ in self.successors[state])

    def post(self, state: int, label: str) -> list:
        return [t for a, t in self.successors[state] if a == label]

    def reachable(self) -> Lts:
        """Restriction to states reachable from the initial state, renumbered in BFS order."""
        order = [self.initial]
        index = {self.initial: 0}
        for s in order:
            for _, t in self.successors[s]:
                if t not in index:
                    index[t] = len(order)
                    order.append(t)
        trans = {(index[s], a, index[t]) for s, a, t in self.transitions if s in index}
        return Lts(len(order), 0, frozenset(trans))

    def relabel(self, mapping) -> Lts:
        return Lts(self.num_states, self.initial,
                   frozenset((s, mapping.get(a, a), t) for s, a, t in self.transitions))

    def shortest_paths(self) -> dict:
        """BFS parent pointers: state -> (previous state, label) or None for the root."""
        parent = {self.initial: None}
        order = [self.initial]
        for s in order:
            for a, t in self.successors[s]:
                if t not in parent:
                    parent[t] = (s, a)
                    order.append(t)
        return parent


def disjoint_union(a: Lts, b: Lts) -> tuple[int, list]:
    """States of ``b`` are shifted by ``a.num_states``; returns (size, successor lists)."""
    off = a.num_states
    succ = [list(x) for x in a.successors]
    succ.extend([(l, t + off) for l, t in row] for row in b.successors)
    return a.num_states + b.num_states, succ


_HEADER = re.compile(r"\s*des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*\Z")
_EDGE = re.compile(r'\s*\(\s*(\d+)\s*,\s*(?:"((?:[^"\\]|\\.)*)"|([^,()"]*?))\s*,\s*(\d+)\s*\)\s*\Z')


def _unquote(label: str) -> str:
    return re.sub(r"\\(.)", r"\1", label)


def read_aut(text: str) -> Lts:
    """Parse ``.aut`` text. Labels ``i`` and ``delta`` are internal and termination."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise AutFormatError("empty input: missing 'des' header")
    m = _HEADER.match(lines[0])
    if not m:
        raise AutFormatError(f"malformed header: {lines[0].strip()!r}")
    initial, count, states = (int(x) for x in m.groups())
    if states < 1:
        raise AutFormatError("an LTS has at least one state")
    if initial >= states:
        raise AutFormatError(f"initial state {initial} out of range")
    transitions = set()
    for lineno, line in enumerate(lines[1:], start=2):
        e = _EDGE.match(line)
        if not e:
            raise AutFormatError(f"line {lineno}: malformed transition {line.strip()!r}")
        src, quoted, bare, dst = e.groups()
        label = _unquote(quoted) if quoted is not None else bare.strip()
        src, dst = int(src), int(dst)
        if src >= states or dst >= states:
            raise AutFormatError(f"line {lineno}: state index out of range")
        transitions.add((src, label, dst))
    if len(lines) - 1 != count:
        raise AutFormatError(f"header announces {count} transitions, found {len(lines) - 1}")
    return Lts(states, initial, frozenset(transitions))


def _quote(label: str) -> str:
    return label.replace("\\", "\\\\").replace('"', '\\"')


def write_aut(lts: Lts) -> str:
    """Serialise with transitions sorted by (source, label, target)."""
    rows = [f"des ({lts.initial}, {len(lts.transitions)}, {lts.num_states})"]
    rows.extend(f'({s}, "{_quote(a)}", {t})' for s, a, t in lts.sorted_transitions)
    return "\n".join(rows) + "\n"


def tau_closure(lts: Lts) -> list:
    """For each state, the sorted list of states reachable by zero or more internal steps."""
    tau_succ = defaultdict(list)
    for s, a, t in lts.transitions:
        if a == TAU:
            tau_succ[s].append(t)
    closure = []
    for s in range(lts.num_states):
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for v in tau_succ.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        closure.append(sorted(seen))
    return closure
