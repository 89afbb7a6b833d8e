"""Seeded random generators and hypothesis strategies shared by the tests."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from pabpel.lts import Lts
from pabpel.pa import EXIT, STOP, Choice, Disable, Enable, Hide, Parallel, Prefix
from pabpel.verify import (
    ANY, FF, TT, And, Box, Diamond, LabelSet, Mu, Nu, Or, Var, WeakBox, WeakDiamond,
    check_formula, FormulaError,
)

GATES = ("a", "b", "c")


def random_lts(rng: random.Random, max_states=8, labels=("i", "a", "b"), max_trans=16) -> Lts:
    n = rng.randint(1, max_states)
    m = rng.randint(0, min(max_trans, n * n * len(labels)))
    trans = {(rng.randrange(n), rng.choice(labels), rng.randrange(n)) for _ in range(m)}
    return Lts(n, rng.randrange(n), frozenset(trans))


def variant(rng: random.Random, lts: Lts) -> Lts:
    """A relabelled copy with one state split in two: bisimilar to the original."""
    n = lts.num_states
    perm = list(range(n))
    rng.shuffle(perm)
    split = rng.randrange(n)
    trans = set()
    for s, a, t in sorted(lts.transitions):
        for src in ([perm[s], n] if s == split else [perm[s]]):
            dst = perm[t] if t != split or rng.random() < 0.5 else n
            trans.add((src, a, dst))
    return Lts(n + 1, perm[lts.initial], frozenset(trans))


def perturb(rng: random.Random, lts: Lts, labels=("i", "a", "b")) -> Lts:
    trans = set(lts.transitions)
    if trans and rng.random() < 0.5:
        trans.discard(rng.choice(sorted(trans)))
    else:
        n = lts.num_states
        trans.add((rng.randrange(n), rng.choice(labels), rng.randrange(n)))
    return Lts(lts.num_states, lts.initial, frozenset(trans))


def random_pair(rng: random.Random, **kw):
    a = random_lts(rng, **kw)
    kind = rng.randrange(3)
    if kind == 0:
        return a, random_lts(rng, **kw)
    b = variant(rng, a)
    return (a, b) if kind == 1 else (a, perturb(rng, b))


def random_behaviour(rng: random.Random, depth: int, gates=GATES):
    """A recursion-free behaviour expression."""
    if depth == 0:
        return rng.choice([STOP, EXIT, Prefix(rng.choice(gates), EXIT)])
    op = rng.randrange(9)
    sub = lambda: random_behaviour(rng, depth - 1, gates)  # noqa: E731
    if op <= 2:
        return Prefix(rng.choice(gates + ("i",)), sub())
    if op == 3:
        return Choice(sub(), sub())
    if op == 4:
        return Parallel(sub(), sub(), frozenset(rng.sample(gates, rng.randint(0, 2))))
    if op == 5:
        return Enable(sub(), sub())
    if op == 6:
        return Disable(sub(), sub())
    if op == 7:
        return Hide(frozenset({rng.choice(gates)}), sub())
    return rng.choice([STOP, EXIT])


def random_formula(rng: random.Random, depth: int, labels=("i", "a", "b", "delta")):
    """An alternation-free closed formula of at most the given depth."""
    while True:
        f = _formula(rng, depth, [], labels)
        try:
            return check_formula(f)
        except FormulaError:
            continue


def _label_set(rng, labels):
    if rng.random() < 0.25:
        return ANY
    return LabelSet.of(*rng.sample(labels, rng.randint(1, 2)))


def _formula(rng, depth, bound, labels):
    if depth == 0 or rng.random() < 0.15:
        choices = [TT(), FF()] + [Var(v) for v in bound]
        return rng.choice(choices)
    op = rng.randrange(8)
    if op in (0, 1):
        cls = And if op == 0 else Or
        return cls(_formula(rng, depth - 1, bound, labels), _formula(rng, depth - 1, bound, labels))
    if op in (2, 3, 4, 5):
        cls = (Diamond, Box, WeakDiamond, WeakBox)[op - 2]
        return cls(_label_set(rng, labels), _formula(rng, depth - 1, bound, labels))
    var = f"X{len(bound)}"
    cls = Mu if op == 6 else Nu
    return cls(var, _formula(rng, depth - 1, bound + [var], labels))


# -- hypothesis strategies ----------------------------------------------------

@st.composite
def lts_strategy(draw, max_states=6, labels=("i", "a", "b")):
    n = draw(st.integers(1, max_states))
    state = st.integers(0, n - 1)
    trans = draw(st.frozensets(st.tuples(state, st.sampled_from(labels), state), max_size=14))
    return Lts(n, draw(state), trans)


@st.composite
def behaviour_strategy(draw, depth=3):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_behaviour(random.Random(seed), draw(st.integers(0, depth)))


@st.composite
def formula_strategy(draw, depth=4):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_formula(random.Random(seed), draw(st.integers(0, depth)))


# -- BPEL ---------------------------------------------------------------------

def random_process(rng: random.Random, depth: int = 3, name: str = "proc"):
    """A valid BPEL process that stays small enough to explore exhaustively."""
    from pabpel.bpel import BpelProcess
    gen = _BpelGen(rng)
    return BpelProcess(name, gen.activity(depth, in_handler=False))


class _BpelGen:
    LINKS = ("client", "bank")
    OPS = ("go", "put")
    FAULTS = ("f1", "f2")

    def __init__(self, rng):
        self.rng = rng
        self.scopes = 0
        self.flows = 0

    def op(self, direction):
        from pabpel.bpel import PartnerOp
        return PartnerOp(self.rng.choice(self.LINKS), self.rng.choice(self.OPS), direction)

    def basic(self, in_handler):
        from pabpel.bpel import (
            Compensate, Direction, Empty, Invoke, Receive, Reply, Terminate, Throw, Wait,
        )
        r = self.rng
        options = [
            lambda: Receive(self.op(Direction.RECEIVE)),
            lambda: Reply(self.op(Direction.REPLY)),
            lambda: Invoke(self.op(Direction.INVOKE_REQUEST), r.random() < 0.5),
            lambda: Empty(),
            lambda: Throw(r.choice(self.FAULTS)),
            lambda: Wait(),
        ]
        if r.random() < 0.05:
            return Terminate()
        if in_handler and r.random() < 0.2:
            return Compensate()
        return r.choice(options)()

    def activity(self, depth, in_handler):
        from pabpel.bpel import Direction, Flow, Pick, Sequence, Switch, While
        r = self.rng
        if depth == 0 or r.random() < 0.3:
            return self.basic(in_handler)
        sub = lambda: self.activity(depth - 1, in_handler)  # noqa: E731
        kind = r.randrange(7)
        if kind == 0:
            return Sequence(tuple(sub() for _ in range(r.randint(1, 3))))
        if kind == 1:
            return Switch(tuple(sub() for _ in range(r.randint(1, 2))),
                          sub() if r.random() < 0.5 else None)
        if kind == 2:
            return While(sub())
        if kind == 3:
            msgs = tuple((self.op(Direction.RECEIVE), sub()) for _ in range(r.randint(1, 2)))
            return Pick(msgs, sub() if r.random() < 0.4 else None)
        if kind == 4 and self.flows < 1:
            self.flows += 1
            return Flow((self.activity(min(depth - 1, 1), in_handler),
                         self.activity(min(depth - 1, 1), in_handler)))
        return self.scope(depth, in_handler)

    def scope(self, depth, in_handler):
        from pabpel.bpel import Direction, Scope
        r = self.rng
        self.scopes += 1
        name = f"s{self.scopes}" if r.random() < 0.6 else None
        body = self.activity(depth - 1, in_handler)
        faults = []
        for f in self.FAULTS:
            if r.random() < 0.4:
                faults.append((f, self.activity(depth - 1, True)))
        if r.random() < 0.3:
            faults.append((None, self.activity(depth - 1, True)))
        comp = self.activity(depth - 1, True) if r.random() < 0.4 else None
        events = ()
        if r.random() < 0.2:
            events = ((self.op(Direction.RECEIVE), self.basic(in_handler)),)
        return Scope(body, tuple(faults), comp, events, name)
