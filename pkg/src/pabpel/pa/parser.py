"""Recursive-descent parser for ``.pa`` specifications.

Precedence, tightest first: prefix, ``[]``, parallel operators, ``[>``,
``>>``. Every binary operator associates to the right and ``hide ... in``
extends as far right as possible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .syntax import (
    DELTA, EXIT, KEYWORDS, STOP, TAU, Behaviour, Choice, Disable, Enable, Hide,
    Instantiate, PaError, Parallel, Prefix, ProcessDef, ReservedGateError,
    Specification, check_specification, free_gates,
)


class PaSyntaxError(PaError):
    def __init__(self, message: str, line: int, column: int, expected: Iterable[str] = ()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{line}:{column}: {message}{detail}")


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "op", or "eof"
    text: str
    line: int
    column: int


_OPS = ["|||", "||", "|[", "[]", "[>", ">>", ":=", ";", ",", "(", ")", "[", "]"]
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, col = 0, 1, 1
    sync_depth = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch == "\n":
            pos, line, col = pos + 1, line + 1, 1
            continue
        if ch.isspace():
            pos, col = pos + 1, col + 1
            continue
        if text.startswith("--", pos):
            while pos < n and text[pos] != "\n":
                pos += 1
            continue
        # "]|" closes a synchronisation list; elsewhere "]" followed by "|" is two tokens.
        if sync_depth and text.startswith("]|", pos):
            tokens.append(Token("op", "]|", line, col))
            sync_depth -= 1
            pos, col = pos + 2, col + 2
            continue
        m = _NAME_RE.match(text, pos)
        if m:
            tokens.append(Token("name", m.group(), line, col))
            pos, col = m.end(), col + len(m.group())
            continue
        for op in _OPS:
            if text.startswith(op, pos):
                tokens.append(Token("op", op, line, col))
                if op == "|[":
                    sync_depth += 1
                pos, col = pos + len(op), col + len(op)
                break
        else:
            raise PaSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


_BEHAVIOUR_START = {"stop", "exit", "hide", "i", "(", "<name>"}
_PAR_OPS = ("|||", "||", "|[")


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def error(self, expected: Iterable[str], message: str | None = None) -> PaSyntaxError:
        tok = self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return PaSyntaxError(message or f"unexpected {found}", tok.line, tok.column, expected)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error({text})
        tok = self.tok
        self.pos += 1
        return tok

    def name(self, what: str = "<name>") -> str:
        tok = self.tok
        if tok.kind != "name" or tok.text in KEYWORDS:
            if tok.kind == "name" and tok.text in (TAU, DELTA):
                raise ReservedGateError(
                    f"{tok.line}:{tok.column}: {tok.text!r} is reserved and cannot be a {what}")
            raise self.error({what})
        self.pos += 1
        return tok.text

    # spec := procdef+
    def specification(self) -> Specification:
        defs = []
        while True:
            defs.append(self.procdef())
            if self.tok.kind == "eof":
                break
            if not self.at("process"):
                raise self.error({"process", "<end of input>"})
        names = [d.name for d in defs]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise PaError(f"process {sorted(dup)[0]!r} defined more than once")
        return Specification({d.name: d for d in defs}, defs[0].name)

    def procdef(self) -> ProcessDef:
        self.expect("process")
        name = self.name("<process name>")
        gates = self.gatelist_brackets()
        self.expect(":=")
        body = self.behaviour()
        self.expect("endproc")
        return ProcessDef(name, gates, body)

    def gatelist_brackets(self) -> tuple:
        if self.at("[]"):
            self.pos += 1
            return ()
        self.expect("[")
        gates: tuple = ()
        if not self.at("]"):
            gates = self.gatelist()
        self.expect("]")
        return gates

    def gatelist(self) -> tuple:
        gates = [self.name("<gate>")]
        while self.at(","):
            self.pos += 1
            gates.append(self.name("<gate>"))
        return tuple(gates)

    def behaviour(self) -> Behaviour:
        left = self.disable()
        if self.at(">>"):
            self.pos += 1
            return Enable(left, self.behaviour())
        return left

    def disable(self) -> Behaviour:
        left = self.parallel()
        if self.at("[>"):
            self.pos += 1
            return Disable(left, self.disable())
        return left

    def parallel(self) -> Behaviour:
        left = self.choice()
        if self.at("|||"):
            self.pos += 1
            return Parallel(left, self.parallel(), frozenset())
        if self.at("||"):
            self.pos += 1
            right = self.parallel()
            return Parallel(left, right, free_gates(left) | free_gates(right))
        if self.at("|["):
            self.pos += 1
            gates: tuple = ()
            if not self.at("]|"):
                gates = self.gatelist()
            self.expect("]|")
            return Parallel(left, self.parallel(), frozenset(gates))
        return left

    def choice(self) -> Behaviour:
        left = self.unary()
        if self.at("[]"):
            self.pos += 1
            return Choice(left, self.choice())
        return left

    def unary(self) -> Behaviour:
        tok = self.tok
        if tok.kind == "name":
            if tok.text == "stop":
                self.pos += 1
                return STOP
            if tok.text == "exit":
                self.pos += 1
                return EXIT
            if tok.text == "hide":
                self.pos += 1
                gates = self.gatelist()
                self.expect("in")
                return Hide(frozenset(gates), self.behaviour())
            if tok.text == TAU:
                self.pos += 1
                self.expect(";")
                return Prefix(TAU, self.unary())
            nxt = self.peek().text
            if nxt == ";":
                gate = self.name("<gate>")
                self.pos += 1
                return Prefix(gate, self.unary())
            if nxt in ("[", "[]"):
                proc = self.name("<process name>")
                return Instantiate(proc, self.gatelist_brackets())
            if tok.text not in KEYWORDS:
                self.pos += 1
                raise self.error({";", "["})
        if self.at("("):
            self.pos += 1
            inner = self.behaviour()
            self.expect(")")
            return inner
        if tok.kind == "name" and tok.text == DELTA:
            self.name("<gate>")
        raise self.error(_BEHAVIOUR_START)


def parse_pa(text: str) -> Specification:
    """Parse and check a specification. The first process is the entry."""
    spec = _Parser(text).specification()
    check_specification(spec)
    return spec


def parse_behaviour(text: str, name: str = "P") -> Specification:
    """Wrap a bare behaviour expression into a one-process specification.

    The formal gates are the free gates of the expression in sorted order.
    Recursive references to ``name`` are allowed.
    """
    parser = _Parser(text)
    body = parser.behaviour()
    if parser.tok.kind != "eof":
        raise parser.error({"<end of input>"})
    gates = tuple(sorted(free_gates(body)))
    spec = Specification({name: ProcessDef(name, gates, body)}, name)
    check_specification(spec)
    return spec
