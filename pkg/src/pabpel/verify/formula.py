"""Alternation-free modal mu-calculus with strong and weak modalities.

Text syntax (``.mcl`` files)::

    f ::= tt | ff | X | f /\\ f | f \\/ f | ~f | (f)
        | <A> f | [A] f | <<A>> f | [[A]] f | mu X . f | nu X . f
    A ::= * | pattern, pattern, ...

Patterns are action labels, optionally with ``*`` wildcards (``fault.*``).
``/\\`` binds tighter than ``\\/``; fixpoints extend as far right as possible.
Negation is removed while parsing, so every :class:`Formula` is in positive
normal form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fnmatch import fnmatchcase


class FormulaError(ValueError):
    pass


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"offset {offset}: {message}")


class UnboundVariable(FormulaError):
    pass


class NotMonotone(FormulaError):
    pass


class AlternationError(FormulaError):
    pass


_PATTERN = re.compile(r"[A-Za-z_*][A-Za-z0-9_.*]*\Z")


@dataclass(frozen=True)
class LabelSet:
    """Either every label (``*``) or a tuple of glob patterns."""

    patterns: tuple

    def __post_init__(self) -> None:
        if not self.patterns:
            raise FormulaError("empty label set")
        for p in self.patterns:
            if not _PATTERN.match(p):
                raise FormulaError(f"invalid label pattern {p!r}")

    @classmethod
    def of(cls, *patterns: str) -> "LabelSet":
        return cls(tuple(sorted(set(patterns))))

    @property
    def is_any(self) -> bool:
        return self.patterns == ("*",)

    def matches(self, label: str) -> bool:
        return any(fnmatchcase(label, p) for p in self.patterns)

    def __str__(self) -> str:
        return ",".join(self.patterns)


ANY = LabelSet(("*",))


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True, eq=True)
class TT(Formula):
    pass


@dataclass(frozen=True, eq=True)
class FF(Formula):
    pass


@dataclass(frozen=True, eq=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=True)
class Diamond(Formula):
    labels: LabelSet
    body: Formula


@dataclass(frozen=True, eq=True)
class Box(Formula):
    labels: LabelSet
    body: Formula


@dataclass(frozen=True, eq=True)
class WeakDiamond(Formula):
    labels: LabelSet
    body: Formula


@dataclass(frozen=True, eq=True)
class WeakBox(Formula):
    labels: LabelSet
    body: Formula


@dataclass(frozen=True, eq=True)
class Var(Formula):
    name: str


@dataclass(frozen=True, eq=True)
class Mu(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, eq=True)
class Nu(Formula):
    var: str
    body: Formula


MODALITIES = (Diamond, Box, WeakDiamond, WeakBox)
_DUAL = {TT: FF, FF: TT, And: Or, Or: And, Diamond: Box, Box: Diamond,
         WeakDiamond: WeakBox, WeakBox: WeakDiamond, Mu: Nu, Nu: Mu}


def dual(f: Formula) -> Formula:
    """The positive normal form of the negation of ``f``."""
    if isinstance(f, (TT, FF)):
        return _DUAL[type(f)]()
    if isinstance(f, (And, Or)):
        return _DUAL[type(f)](dual(f.left), dual(f.right))
    if isinstance(f, MODALITIES):
        return _DUAL[type(f)](f.labels, dual(f.body))
    if isinstance(f, Var):
        return f
    if isinstance(f, (Mu, Nu)):
        return _DUAL[type(f)](f.var, dual(f.body))
    raise TypeError(f"not a formula: {f!r}")


def free_vars(f: Formula) -> frozenset:
    if isinstance(f, Var):
        return frozenset({f.name})
    if isinstance(f, (And, Or)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, MODALITIES):
        return free_vars(f.body)
    if isinstance(f, (Mu, Nu)):
        return free_vars(f.body) - {f.var}
    return frozenset()


def subformulas(f: Formula):
    yield f
    if isinstance(f, (And, Or)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, (*MODALITIES, Mu, Nu)):
        yield from subformulas(f.body)


def depth(f: Formula) -> int:
    if isinstance(f, (And, Or)):
        return 1 + max(depth(f.left), depth(f.right))
    if isinstance(f, (*MODALITIES, Mu, Nu)):
        return 1 + depth(f.body)
    return 0


def check_formula(f: Formula) -> Formula:
    """Reject unbound variables and mu/nu alternation; returns ``f``."""
    unbound = free_vars(f)
    if unbound:
        raise UnboundVariable(f"unbound variable(s): {', '.join(sorted(unbound))}")
    for g in subformulas(f):
        if isinstance(g, (Mu, Nu)):
            other = Nu if isinstance(g, Mu) else Mu
            for h in subformulas(g.body):
                if isinstance(h, other) and g.var in free_vars(h):
                    raise AlternationError(
                        f"{h.var} nested inside {g.var} depends on it with the opposite fixpoint")
    return f


# -- text form ------------------------------------------------------------

_PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3


def format_formula(f: Formula) -> str:
    return _fmt(f, 0)


def _fmt(f: Formula, need: int) -> str:
    if isinstance(f, TT):
        return "tt"
    if isinstance(f, FF):
        return "ff"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Or):
        text, prec = f"{_fmt(f.left, _PREC_AND)} \\/ {_fmt(f.right, _PREC_OR)}", _PREC_OR
    elif isinstance(f, And):
        text, prec = f"{_fmt(f.left, _PREC_UNARY)} /\\ {_fmt(f.right, _PREC_AND)}", _PREC_AND
    elif isinstance(f, MODALITIES):
        left, right = {Diamond: "<>", Box: "[]", WeakDiamond: ("<<", ">>"),
                       WeakBox: ("[[", "]]")}[type(f)]
        return f"{left}{f.labels}{right} {_fmt(f.body, _PREC_UNARY)}"
    else:
        kw = "mu" if isinstance(f, Mu) else "nu"
        text, prec = f"{kw} {f.var} . {_fmt(f.body, 0)}", 0
    return text if prec >= need else f"({text})"


_TOKEN = re.compile(r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<op><<|>>|\[\[|\]\]|/\\|\\/|[<>\[\]().~])
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)

_CLOSE = {"<": ">", "[": "]", "<<": ">>", "[[": "]]"}
_MODAL = {"<": Diamond, "[": Box, "<<": WeakDiamond, "[[": WeakBox}


@dataclass(frozen=True)
class _Not:
    body: object


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        while True:
            m = _TOKEN.match(self.text, self.pos)
            if m and m.lastgroup == "ws":
                self.pos = m.end()
            else:
                return

    def peek(self) -> str | None:
        self.skip()
        if self.pos >= len(self.text):
            return None
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {self.text[self.pos]!r}", self.pos)
        return m.group()

    @staticmethod
    def _show(tok: str | None) -> str:
        return "end of input" if tok is None else repr(tok)

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            want = repr(expected) if expected else "a token"
            raise FormulaSyntaxError(f"expected {want}, found {self._show(tok)}", self.pos)
        self.pos += len(tok)
        return tok

    def formula(self):
        left = self.conj()
        if self.peek() == "\\/":
            self.take()
            return Or(left, self.formula())
        return left

    def conj(self):
        left = self.unary()
        if self.peek() == "/\\":
            self.take()
            return And(left, self.conj())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            return _Not(self.unary())
        if tok == "(":
            self.take()
            inner = self.formula()
            self.take(")")
            return inner
        if tok in _MODAL:
            self.take()
            labels = self.labels(_CLOSE[tok])
            return _MODAL[tok](labels, self.unary())
        if tok in ("mu", "nu"):
            self.take()
            var = self.take()
            if not re.match(r"[A-Za-z_]\w*\Z", var) or var in ("tt", "ff", "mu", "nu"):
                raise FormulaSyntaxError(f"expected a variable, found {self._show(var)}", self.pos)
            self.take(".")
            return (Mu if tok == "mu" else Nu)(var, self.formula())
        if tok == "tt":
            self.take()
            return TT()
        if tok == "ff":
            self.take()
            return FF()
        if tok is not None and re.match(r"[A-Za-z_]", tok):
            self.take()
            return Var(tok)
        raise FormulaSyntaxError(f"expected a formula, found {self._show(tok)}", self.pos)

    def labels(self, close: str) -> LabelSet:
        end = self.text.find(close, self.pos)
        if end < 0:
            raise FormulaSyntaxError(f"missing {close!r}", self.pos)
        raw = [p.strip() for p in self.text[self.pos:end].split(",")]
        start = self.pos
        self.pos = end + len(close)
        try:
            if "*" in raw:
                if len(raw) != 1:
                    raise FormulaError("'*' cannot be combined with other labels")
                return ANY
            return LabelSet.of(*raw)
        except FormulaError as exc:
            raise FormulaSyntaxError(str(exc), start) from None


def _pnf(f, negated: bool, flipped: dict):
    if isinstance(f, _Not):
        return _pnf(f.body, not negated, flipped)
    if isinstance(f, (TT, FF)):
        return _DUAL[type(f)]() if negated else f
    if isinstance(f, (And, Or)):
        cls = _DUAL[type(f)] if negated else type(f)
        return cls(_pnf(f.left, negated, flipped), _pnf(f.right, negated, flipped))
    if isinstance(f, MODALITIES):
        cls = _DUAL[type(f)] if negated else type(f)
        return cls(f.labels, _pnf(f.body, negated, flipped))
    if isinstance(f, Var):
        if f.name not in flipped:
            raise UnboundVariable(f"unbound variable {f.name}")
        if flipped[f.name] != negated:
            raise NotMonotone(f"variable {f.name} occurs under an odd number of negations")
        return f
    if isinstance(f, (Mu, Nu)):
        cls = _DUAL[type(f)] if negated else type(f)
        return cls(f.var, _pnf(f.body, negated, {**flipped, f.var: negated}))
    raise TypeError(f)


def parse_formula(text: str) -> Formula:
    """Parse, push negations inwards and check well-formedness."""
    p = _Parser(text)
    raw = p.formula()
    if p.peek() is not None:
        raise FormulaSyntaxError(f"unexpected {p.peek()!r}", p.pos)
    return check_formula(_pnf(raw, False, {}))
