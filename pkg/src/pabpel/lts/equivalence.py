"""Strong/weak bisimulation, simulation preorder, saturation and minimisation."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..labels import TAU, label_key
from .model import Lts, disjoint_union, tau_closure

SATURATION_BOUND = 1_000_000


class Kind(str, enum.Enum):
    STRONG = "strong"
    WEAK = "weak"


class SaturationBoundExceeded(Exception):
    def __init__(self, bound: int):
        self.bound = bound
        super().__init__(f"saturated LTS exceeds {bound} transitions")


@dataclass(frozen=True)
class Counterexample:
    """Why two states are not related.

    ``path`` alternates state pairs and labels, from the initial pair to the
    distinguishing pair ``(left, right)``. At that pair the state on
    ``side`` ("left" or "right") can perform ``action`` and the other cannot.
    """

    left: int
    right: int
    action: str
    side: str
    path: tuple

    def to_dict(self) -> dict:
        return {
            "left": self.left, "right": self.right, "action": self.action,
            "side": self.side,
            "path": [list(x) if isinstance(x, tuple) else x for x in self.path],
        }


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    witness: frozenset | None = None
    counterexample: Counterexample | None = None
    stats: dict = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return self.holds


# -- partition refinement -------------------------------------------------

def _refine(n: int, succ: list) -> list:
    """Signature refinement to the coarsest stable partition.

    Returns the history of block assignments; entry ``k`` is the partition
    into ``k``-step bisimilarity classes and the last entry is stable.
    Blocks are numbered by first occurrence in state order.
    """
    block = [0] * n
    history = [block]
    count = 1
    while True:
        table: dict = {}
        new = [0] * n
        for s in range(n):
            sig = (block[s], frozenset((a, block[t]) for a, t in succ[s]))
            new[s] = table.setdefault(sig, len(table))
        history.append(new)
        if len(table) == count:
            return history
        count = len(table)
        block = new


def partition(lts: Lts) -> list:
    """Strong bisimilarity classes of one LTS as a block index per state."""
    return _refine(lts.num_states, [list(x) for x in lts.successors])[-1]


def _split_level(history: list, p: int, q: int) -> int:
    for k, blocks in enumerate(history):
        if blocks[p] != blocks[q]:
            return k
    return len(history)


def _pairs_witness(succ, init, same):
    """Pairs reachable from ``init`` by matched moves between related states."""
    seen = {init}
    stack = [init]
    while stack:
        p, q = stack.pop()
        for a, p2 in succ[p]:
            for b, q2 in succ[q]:
                if a == b and same(p2, q2) and (p2, q2) not in seen:
                    seen.add((p2, q2))
                    stack.append((p2, q2))
    return seen


def _descend(start, level, moves_left, moves_right):
    """Follow a winning attacker strategy down to a pair with differing enabled labels.

    ``level(p, q)`` is the round in which the pair was separated (lower is
    more obviously different); the attacker always has a move leading only
    to pairs of strictly lower level.
    """
    path = [start]
    p, q = start
    while True:
        k = level(p, q)
        best = None
        for side, attack, defend in (("left", moves_left(p), moves_right(q)),
                                     ("right", moves_right(q), moves_left(p))):
            for a, x in attack:
                answers = [y for b, y in defend if b == a]
                if not answers:
                    return Counterexample(p, q, a, side, tuple(path))
                pairs = [(x, y) if side == "left" else (y, x) for y in answers]
                levels = [level(*pr) for pr in pairs]
                if max(levels) < k:
                    worst = max(range(len(pairs)), key=lambda i: (levels[i], -i))
                    cand = (levels[worst], label_key(a), pairs[worst], a)
                    if best is None or cand[:2] < best[:2]:
                        best = cand
        if best is None:  # pragma: no cover - guarded by the level invariant
            raise AssertionError("no distinguishing move found")
        _, _, (p, q), a = best
        path.extend([a, (p, q)])


def strong_bisim(a: Lts, b: Lts) -> CheckResult:
    """Decide strong bisimilarity of the initial states by partition refinement."""
    n, succ = disjoint_union(a, b)
    off = a.num_states
    history = _refine(n, succ)
    final = history[-1]
    ia, ib = a.initial, b.initial + off
    stats = {"states": n, "rounds": len(history) - 1, "classes": max(final) + 1}
    if final[ia] == final[ib]:
        pairs = _pairs_witness(succ, (ia, ib), lambda x, y: final[x] == final[y])
        witness = frozenset((p, q - off) for p, q in pairs)
        return CheckResult(True, witness=witness, stats=stats)
    cex = _descend((ia, ib), lambda p, q: _split_level(history, p, q),
                   lambda p: succ[p], lambda q: succ[q])
    return CheckResult(False, counterexample=_shift_cex(cex, off), stats=stats)


def _shift_cex(cex: Counterexample, off: int) -> Counterexample:
    path = tuple((x[0], x[1] - off) if isinstance(x, tuple) else x for x in cex.path)
    return Counterexample(cex.left, cex.right - off, cex.action, cex.side, path)


# -- weak transitions ------------------------------------------------------

def tau_saturate(lts: Lts, bound: int = SATURATION_BOUND) -> Lts:
    """Weak transition relation: ``i*`` for internal, ``i* a i*`` for observable ``a``."""
    closure = tau_closure(lts)
    after: list[dict] = []
    for s in range(lts.num_states):
        moves: dict = {}
        for a, t in lts.successors[s]:
            if a != TAU:
                moves.setdefault(a, set()).update(closure[t])
        after.append(moves)
    out = set()
    for s in range(lts.num_states):
        for u in closure[s]:
            out.add((s, TAU, u))
            for a, targets in after[u].items():
                for t in targets:
                    out.add((s, a, t))
        if len(out) > bound:
            raise SaturationBoundExceeded(bound)
    return Lts(lts.num_states, lts.initial, frozenset(out))


def weak_bisim(a: Lts, b: Lts) -> CheckResult:
    """Observational equivalence: strong bisimilarity of the saturated systems."""
    return strong_bisim(tau_saturate(a), tau_saturate(b))


def bisimilar(a: Lts, b: Lts, kind: Kind = Kind.STRONG) -> CheckResult:
    return weak_bisim(a, b) if Kind(kind) is Kind.WEAK else strong_bisim(a, b)


# -- simulation -------------------------------------------------------------

def simulation_preorder(a: Lts, b: Lts, kind: Kind = Kind.STRONG) -> CheckResult:
    """Does the initial state of ``b`` simulate the initial state of ``a``?

    Computed as the greatest fixpoint of the simulation refinement operator,
    one synchronous round at a time so each removed pair remembers its round.
    """
    if Kind(kind) is Kind.WEAK:
        a, b = tau_saturate(a), tau_saturate(b)
    sa, sb = a.successors, b.successors
    b_by_label = [_by_label(row) for row in sb]
    removed_at: dict = {}
    alive = {(p, q) for p in range(a.num_states) for q in range(b.num_states)}
    rounds = 0
    while True:
        rounds += 1
        drop = []
        for p, q in alive:
            for lab, p2 in sa[p]:
                if not any((p2, q2) in alive for q2 in b_by_label[q].get(lab, ())):
                    drop.append((p, q))
                    break
        if not drop:
            break
        for pr in drop:
            removed_at[pr] = rounds
        alive.difference_update(drop)
    init = (a.initial, b.initial)
    stats = {"states": a.num_states + b.num_states, "rounds": rounds, "related": len(alive)}
    if init in alive:
        witness = _sim_witness(sa, b_by_label, init, alive)
        return CheckResult(True, witness=frozenset(witness), stats=stats)
    cex = _sim_descend(init, removed_at, rounds, sa, b_by_label)
    return CheckResult(False, counterexample=cex, stats=stats)


def _by_label(row) -> dict:
    out: dict = {}
    for lab, t in row:
        out.setdefault(lab, []).append(t)
    return out


def _sim_witness(sa, b_by_label, init, alive):
    seen = {init}
    stack = [init]
    while stack:
        p, q = stack.pop()
        for lab, p2 in sa[p]:
            for q2 in b_by_label[q].get(lab, ()):
                if (p2, q2) in alive:
                    if (p2, q2) not in seen:
                        seen.add((p2, q2))
                        stack.append((p2, q2))
                    break
    return seen


def _sim_descend(init, removed_at, rounds, sa, b_by_label) -> Counterexample:
    def level(pr):
        return removed_at.get(pr, rounds + 1)

    path = [init]
    p, q = init
    while True:
        k = level((p, q))
        best = None
        for lab, p2 in sa[p]:
            answers = b_by_label[q].get(lab, [])
            if not answers:
                return Counterexample(p, q, lab, "left", tuple(path))
            levels = [level((p2, q2)) for q2 in answers]
            if max(levels) < k:
                i = max(range(len(answers)), key=lambda j: (levels[j], -j))
                cand = (levels[i], label_key(lab), (p2, answers[i]), lab)
                if best is None or cand[:2] < best[:2]:
                    best = cand
        if best is None:  # pragma: no cover
            raise AssertionError("no distinguishing move found")
        _, _, (p, q), lab = best
        path.extend([lab, (p, q)])


# -- minimisation -------------------------------------------------------------

def minimize(lts: Lts, kind: Kind = Kind.STRONG) -> Lts:
    """Quotient by strong or weak bisimilarity.

    Classes are numbered by their smallest member. For the weak quotient,
    internal steps inside a class are dropped.
    """
    weak = Kind(kind) is Kind.WEAK
    blocks = partition(tau_saturate(lts) if weak else lts)
    first: dict = {}
    for s, blk in enumerate(blocks):
        first.setdefault(blk, s)
    order = sorted(first, key=first.get)
    number = {blk: i for i, blk in enumerate(order)}
    cls = [number[blk] for blk in blocks]
    trans = set()
    for s, lab, t in lts.transitions:
        if weak and lab == TAU and cls[s] == cls[t]:
            continue
        trans.add((cls[s], lab, cls[t]))
    return Lts(len(order), cls[lts.initial], frozenset(trans))
