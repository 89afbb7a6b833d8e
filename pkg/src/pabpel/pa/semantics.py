"""Structural operational semantics and explicit state-space generation."""

from __future__ import annotations

from collections import deque

from ..lts.model import Lts
from .syntax import (
    DELTA, TAU, Behaviour, Choice, Disable, Enable, Exit, Hide, Instantiate,
    Parallel, Prefix, Specification, Stop, UnguardedRecursionError, expr_key,
    label_key, rename,
)

DEFAULT_STATE_BOUND = 100_000


class StateBoundExceeded(Exception):
    def __init__(self, bound: int):
        self.bound = bound
        super().__init__(f"state space exceeds the bound of {bound} states")


def _transition_key(t):
    return (label_key(t[0]), expr_key(t[1]))


class Semantics:
    """One-step derivatives of behaviour expressions over a fixed specification.

    Results are memoised per expression, so reuse one instance across a
    state-space exploration.
    """

    def __init__(self, spec: Specification):
        self.spec = spec
        self._cache: dict[Behaviour, tuple] = {}
        self._bodies: dict[Instantiate, Behaviour] = {}
        self._active: set[Instantiate] = set()

    def unfold(self, inst: Instantiate) -> Behaviour:
        body = self._bodies.get(inst)
        if body is None:
            d = self.spec[inst.process]
            body = rename(d.body, dict(zip(d.gates, inst.gates)))
            self._bodies[inst] = body
        return body

    def transitions(self, e: Behaviour) -> tuple:
        """Sorted tuple of ``(label, derivative)`` pairs."""
        out = self._cache.get(e)
        if out is None:
            out = tuple(sorted(set(self._derive(e)), key=_transition_key))
            self._cache[e] = out
        return out

    def _derive(self, e: Behaviour):
        if isinstance(e, Stop):
            return
        if isinstance(e, Exit):
            yield DELTA, Stop()
        elif isinstance(e, Prefix):
            yield e.action, e.then
        elif isinstance(e, Choice):
            yield from self.transitions(e.left)
            yield from self.transitions(e.right)
        elif isinstance(e, Parallel):
            yield from self._parallel(e)
        elif isinstance(e, Enable):
            for a, l2 in self.transitions(e.left):
                if a == DELTA:
                    yield TAU, e.right
                else:
                    yield a, Enable(l2, e.right)
        elif isinstance(e, Disable):
            for a, l2 in self.transitions(e.left):
                if a == DELTA:
                    yield DELTA, l2
                else:
                    yield a, Disable(l2, e.right)
            yield from self.transitions(e.right)
        elif isinstance(e, Hide):
            for a, b2 in self.transitions(e.body):
                yield (TAU if a in e.gates else a), Hide(e.gates, b2)
        elif isinstance(e, Instantiate):
            if e in self._active:
                raise UnguardedRecursionError(f"unguarded recursion through {e.process}")
            self._active.add(e)
            try:
                yield from self.transitions(self.unfold(e))
            finally:
                self._active.discard(e)
        else:
            raise TypeError(f"not a behaviour expression: {e!r}")

    def _parallel(self, e: Parallel):
        left = self.transitions(e.left)
        right = self.transitions(e.right)
        sync = e.sync
        for a, l2 in left:
            if a != DELTA and a not in sync:
                yield a, Parallel(l2, e.right, sync)
        for a, r2 in right:
            if a != DELTA and a not in sync:
                yield a, Parallel(e.left, r2, sync)
        right_by_label: dict[str, list] = {}
        for a, r2 in right:
            if a == DELTA or a in sync:
                right_by_label.setdefault(a, []).append(r2)
        for a, l2 in left:
            if a == DELTA or a in sync:
                for r2 in right_by_label.get(a, ()):
                    yield a, Parallel(l2, r2, sync)


def derive_transitions(expr: Behaviour, spec: Specification) -> list:
    """All one-step ``(label, derivative)`` pairs of ``expr``, canonically ordered."""
    return list(Semantics(spec).transitions(expr))


def build_lts(spec: Specification, entry: str | None = None,
              state_bound: int = DEFAULT_STATE_BOUND, *,
              start: Behaviour | None = None) -> Lts:
    """Breadth-first exploration from ``entry`` (or from an explicit ``start`` term).

    The initial term is the instantiation of the entry process on its own
    formal gates, so recursion back to the entry closes a cycle at state 0.
    """
    if state_bound < 1:
        raise ValueError("state bound must be positive")
    if start is None:
        entry = entry if entry is not None else spec.entry
        if entry is None:
            raise ValueError("no entry process given")
        d = spec[entry]
        start = Instantiate(d.name, d.gates)
    sem = Semantics(spec)
    index = {start: 0}
    queue = deque([start])
    transitions = set()
    while queue:
        expr = queue.popleft()
        src = index[expr]
        for label, target in sem.transitions(expr):
            dst = index.get(target)
            if dst is None:
                if len(index) >= state_bound:
                    raise StateBoundExceeded(state_bound)
                dst = index[target] = len(index)
                queue.append(target)
            transitions.add((src, label, dst))
    return Lts(len(index), 0, frozenset(transitions))
