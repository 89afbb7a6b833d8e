"""Deterministic pretty-printer producing minimal parentheses."""

from __future__ import annotations

from .syntax import (
    Behaviour, Choice, Disable, Enable, Exit, Hide, Instantiate, Parallel,
    Prefix, ProcessDef, Specification, Stop,
)

_LEVEL = {Enable: 1, Disable: 2, Parallel: 3, Choice: 4}
_UNARY = 5


def _gates(gates) -> str:
    return ",".join(gates)


def _operator(e: Behaviour) -> str:
    if isinstance(e, Parallel):
        return f"|[{_gates(sorted(e.sync))}]|" if e.sync else "|||"
    return {Enable: ">>", Disable: "[>", Choice: "[]"}[type(e)]


def format_behaviour(e: Behaviour) -> str:
    return _fmt(e, 0, True)


def _fmt(e: Behaviour, need: int, tail: bool) -> str:
    # ``tail`` is true when nothing follows ``e`` before the enclosing
    # bracket; only then may an open-ended ``hide`` go unparenthesised.
    if isinstance(e, Stop):
        return "stop"
    if isinstance(e, Exit):
        return "exit"
    if isinstance(e, Prefix):
        return f"{e.action}; {_fmt(e.then, _UNARY, tail)}"
    if isinstance(e, Instantiate):
        return f"{e.process}[{_gates(e.gates)}]"
    if isinstance(e, Hide):
        text = f"hide {_gates(sorted(e.gates))} in {_fmt(e.body, 0, True)}"
        return text if tail else f"({text})"
    level = _LEVEL[type(e)]
    if level < need:
        return f"({_fmt(e, 0, True)})"
    left = _fmt(e.left, level + 1, False)
    right = _fmt(e.right, level, tail)
    return f"{left} {_operator(e)} {right}"


def format_process(d: ProcessDef) -> str:
    return f"process {d.name}[{_gates(d.gates)}] := {format_behaviour(d.body)} endproc\n"


def pretty_print(spec: Specification) -> str:
    """Render ``spec`` in ``.pa`` syntax, entry process first."""
    defs = list(spec)
    if spec.entry is not None:
        defs.sort(key=lambda d: d.name != spec.entry)
    return "".join(format_process(d) for d in defs)
