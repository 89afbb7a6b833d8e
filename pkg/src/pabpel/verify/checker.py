"""Fixpoint-iteration model checking over explicit LTSs."""

from __future__ import annotations

from typing import NamedTuple

from ..lts.equivalence import tau_saturate
from ..lts.model import Lts
from .formula import (
    FF, TT, And, Box, Diamond, Formula, Mu, Nu, Or, Var, WeakBox,
    WeakDiamond, check_formula,
)


class ModelCheckResult(NamedTuple):
    holds: bool
    states: frozenset


class _Checker:
    def __init__(self, lts: Lts):
        self.lts = lts
        self.all = frozenset(range(lts.num_states))
        self._weak = None
        self._pre: dict = {}

    def weak(self) -> Lts:
        if self._weak is None:
            self._weak = tau_saturate(self.lts)
        return self._weak

    def moves(self, lts: Lts, labels) -> list:
        """Per state, the targets reachable by one step with a matching label."""
        key = (id(lts), labels)
        if key not in self._pre:
            cache = {}
            out = []
            for row in lts.successors:
                targets = []
                for lab, t in row:
                    if lab not in cache:
                        cache[lab] = labels.matches(lab)
                    if cache[lab]:
                        targets.append(t)
                out.append(targets)
            self._pre[key] = out
        return self._pre[key]

    def sat(self, f: Formula, env: dict) -> frozenset:
        if isinstance(f, TT):
            return self.all
        if isinstance(f, FF):
            return frozenset()
        if isinstance(f, Var):
            return env[f.name]
        if isinstance(f, And):
            return self.sat(f.left, env) & self.sat(f.right, env)
        if isinstance(f, Or):
            return self.sat(f.left, env) | self.sat(f.right, env)
        if isinstance(f, (Diamond, Box, WeakDiamond, WeakBox)):
            lts = self.weak() if isinstance(f, (WeakDiamond, WeakBox)) else self.lts
            inner = self.sat(f.body, env)
            moves = self.moves(lts, f.labels)
            if isinstance(f, (Diamond, WeakDiamond)):
                return frozenset(s for s in self.all if any(t in inner for t in moves[s]))
            return frozenset(s for s in self.all if all(t in inner for t in moves[s]))
        if isinstance(f, Mu):
            return self.fixpoint(f, env, frozenset(), grows=True)
        if isinstance(f, Nu):
            return self.fixpoint(f, env, self.all, grows=False)
        raise TypeError(f"not a formula: {f!r}")

    def fixpoint(self, f, env, current: frozenset, grows: bool) -> frozenset:
        while True:
            nxt = self.sat(f.body, {**env, f.var: current})
            if grows and not current <= nxt or not grows and not nxt <= current:
                raise AssertionError(f"fixpoint iteration for {f.var} is not monotone")
            if nxt == current:
                return current
            current = nxt


def satisfying_states(lts: Lts, f: Formula) -> frozenset:
    return _Checker(lts).sat(check_formula(f), {})


def model_check(lts: Lts, f: Formula) -> ModelCheckResult:
    """Does the initial state satisfy ``f``? Also returns every satisfying state."""
    states = satisfying_states(lts, f)
    return ModelCheckResult(lts.initial in states, states)
