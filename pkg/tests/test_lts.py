import random

import pytest
from hypothesis import given

import oracles
from generators import lts_strategy, random_pair, variant
from pabpel.lts import (
    AutFormatError, Kind, Lts, SaturationBoundExceeded, minimize, partition, read_aut,
    simulation_preorder, strong_bisim, tau_saturate, weak_bisim, write_aut,
)
from pabpel.pa import build_lts, parse_behaviour


def lts(text):
    return build_lts(parse_behaviour(text))


class TestAut:
    def test_write(self):
        assert write_aut(lts("a; exit")) == 'des (0, 2, 3)\n(0, "a", 1)\n(1, "delta", 2)\n'

    def test_read_quoted_and_bare(self):
        got = read_aut('des (0, 2, 2)\n(0, "x \\"y\\"", 1)\n(1, i, 0)\n')
        assert got.transitions == {(0, 'x "y"', 1), (1, "i", 0)}

    @pytest.mark.parametrize("text", ["", "des (0, 1, 1)\n", "des (0, 1, 1)\n(0, a, 2)\n",
                                      "des 0 1 1\n(0, a, 0)", "des (3, 0, 2)\n"])
    def test_read_errors(self, text):
        with pytest.raises(AutFormatError):
            read_aut(text)

    @given(lts_strategy())
    def test_round_trip(self, x):
        assert read_aut(write_aut(x)) == x


def _check_cex(a, b, result, weak=False, symmetric=True):
    """The counterexample is a real pair of paths ending in a distinguishing move."""
    if weak:
        a, b = tau_saturate(a), tau_saturate(b)
    cex = result.counterexample
    path = cex.path
    assert path[0] == (a.initial, b.initial) and path[-1] == (cex.left, cex.right)
    for i in range(1, len(path), 2):
        (p, q), lab, (p2, q2) = path[i - 1], path[i], path[i + 1]
        assert (p, lab, p2) in a.transitions and (q, lab, q2) in b.transitions
    mine, other = (a, b) if cex.side == "left" else (b, a)
    me, them = (cex.left, cex.right) if cex.side == "left" else (cex.right, cex.left)
    assert cex.action in mine.enabled(me)
    if symmetric:
        # every answer of the other side leads to an inequivalent pair
        for t in other.post(them, cex.action):
            for s in mine.post(me, cex.action):
                pair = (s, t) if cex.side == "left" else (t, s)
                assert not oracles.strong_bisimilar(
                    Lts(a.num_states, pair[0], a.transitions), Lts(b.num_states, pair[1], b.transitions))
    else:
        assert not any(oracles.simulated_by(Lts(a.num_states, s, a.transitions),
                                            Lts(b.num_states, t, b.transitions))
                       for s in a.post(cex.left, cex.action) for t in b.post(cex.right, cex.action))


class TestEquivalences:
    @given(lts_strategy(), lts_strategy())
    def test_strong_matches_oracle(self, a, b):
        r = strong_bisim(a, b)
        assert r.holds == oracles.strong_bisimilar(a, b)
        if not r.holds:
            _check_cex(a, b, r)

    @given(lts_strategy(), lts_strategy())
    def test_weak_matches_oracle(self, a, b):
        r = weak_bisim(a, b)
        assert r.holds == oracles.weak_bisimilar(a, b)
        if not r.holds:
            _check_cex(a, b, r, weak=True)

    @given(lts_strategy(), lts_strategy())
    def test_simulation_matches_oracle(self, a, b):
        for kind in Kind:
            r = simulation_preorder(a, b, kind)
            assert r.holds == oracles.simulated_by(a, b, kind is Kind.WEAK)
            if not r.holds:
                _check_cex(a, b, r, weak=kind is Kind.WEAK, symmetric=False)

    @given(lts_strategy())
    def test_witness_is_bisimulation(self, a):
        b = variant(random.Random(0), a)
        r = strong_bisim(a, b)
        assert r.holds and (a.initial, b.initial) in r.witness
        for p, q in r.witness:
            for lab, p2 in a.successors[p]:
                assert any((p2, q2) in r.witness for q2 in b.post(q, lab))
            for lab, q2 in b.successors[q]:
                assert any((p2, q2) in r.witness for p2 in a.post(p, lab))

    def test_documented_examples(self):
        assert not strong_bisim(lts("a; b; stop [] a; c; stop"), lts("a; (b; stop [] c; stop)")).holds
        assert weak_bisim(lts("hide t in t; a; exit"), lts("a; exit")).holds
        assert simulation_preorder(lts("a; stop"), lts("a; stop [] b; stop")).holds
        assert not simulation_preorder(lts("a; stop [] b; stop"), lts("a; stop")).holds

    def test_counterexample_label(self):
        r = strong_bisim(lts("a; b; stop [] a; c; stop"), lts("a; (b; stop [] c; stop)"))
        assert r.counterexample.action in ("b", "c")
        assert r.counterexample.path[1] == "a"

    def test_saturation_bound(self):
        with pytest.raises(SaturationBoundExceeded):
            tau_saturate(lts("a; b; c; exit"), bound=3)


class TestMinimize:
    @given(lts_strategy())
    def test_quotient_is_equivalent(self, a):
        for kind, check in ((Kind.STRONG, oracles.strong_bisimilar), (Kind.WEAK, oracles.weak_bisimilar)):
            m = minimize(a, kind)
            assert check(a, m)
            assert m.num_states <= a.num_states

    @given(lts_strategy())
    def test_strong_quotient_is_minimal(self, a):
        m = minimize(a)
        blocks = partition(m)
        assert len(set(blocks)) == m.num_states

    def test_classes_numbered_by_smallest_member(self):
        m = minimize(read_aut('des (0, 3, 4)\n(0, "a", 1)\n(0, "a", 2)\n(2, "b", 3)\n'))
        # states 1 and 3 are both deadlocks
        assert write_aut(m) == 'des (0, 3, 3)\n(0, "a", 1)\n(0, "a", 2)\n(2, "b", 1)\n'
        m = minimize(read_aut('des (0, 2, 3)\n(0, "a", 1)\n(0, "a", 2)\n'))
        assert write_aut(m) == 'des (0, 1, 2)\n(0, "a", 1)\n'


def test_random_pairs_are_mixed():
    rng = random.Random(3)
    verdicts = {oracles.strong_bisimilar(*random_pair(rng)) for _ in range(60)}
    assert verdicts == {True, False}
