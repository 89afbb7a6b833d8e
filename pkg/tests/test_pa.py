import random

import pytest
from hypothesis import given

from generators import behaviour_strategy, random_behaviour
from pabpel.pa import (
    DELTA, EXIT, STOP, TAU, ArityError, Choice, Disable, Enable, Hide, Instantiate,
    Parallel, PaError, PaSyntaxError, Prefix, ProcessDef, ReservedGateError,
    Specification, StateBoundExceeded, UndeclaredGateError, UnguardedRecursionError,
    UnknownProcessError, build_lts, derive_transitions, format_behaviour, free_gates,
    parse_behaviour, parse_pa, pretty_print, rename,
)
from pabpel.pa.syntax import rename_processes


def body(text):
    return parse_behaviour(text)["P"].body


def labels(text):
    lts = build_lts(parse_behaviour(text))
    return sorted((s, a, t) for s, a, t in lts.transitions)


class TestParser:
    def test_prefix_binds_tighter_than_choice(self):
        assert body("a; stop [] b; stop") == Choice(Prefix("a", STOP), Prefix("b", STOP))

    def test_precedence_ladder(self):
        e = body("a; exit [] b; exit ||| c; exit [> d; exit >> e; exit")
        assert isinstance(e, Enable)
        assert isinstance(e.left, Disable)
        assert isinstance(e.left.left, Parallel)
        assert isinstance(e.left.left.left, Choice)

    def test_right_associative(self):
        e = body("a; exit >> b; exit >> c; exit")
        assert isinstance(e.right, Enable) and e.left == Prefix("a", EXIT)

    def test_hide_extends_right(self):
        e = body("hide a in a; exit [] b; exit")
        assert isinstance(e, Hide) and isinstance(e.body, Choice)

    def test_sync_forms(self):
        assert body("a; stop |[a]| a; stop").sync == {"a"}
        assert body("a; stop ||| a; stop").sync == frozenset()
        assert body("a; stop || b; stop").sync == {"a", "b"}

    def test_gate_names_with_dots(self):
        assert body("client.op.rcv; exit") == Prefix("client.op.rcv", EXIT)

    def test_internal_action(self):
        assert body("i; exit") == Prefix(TAU, EXIT)

    def test_specification_with_recursion(self):
        spec = parse_pa("process P[a] := a; P[a] endproc")
        assert spec.entry == "P"
        assert spec["P"].body == Prefix("a", Instantiate("P", ("a",)))

    def test_comments(self):
        spec = parse_pa("-- heading\nprocess P[] := exit -- trailing\nendproc\n")
        assert spec["P"].body == EXIT

    @pytest.mark.parametrize("text", ["a; ", "a; stop [] ", "(a; stop", "hide in a; stop",
                                      "a; stop |[a| b; stop", "stop stop"])
    def test_syntax_errors(self, text):
        with pytest.raises(PaSyntaxError) as info:
            parse_behaviour(text)
        assert info.value.line == 1 and info.value.column >= 1

    def test_error_position(self):
        with pytest.raises(PaSyntaxError) as info:
            parse_pa("process P[] :=\n  a; ; stop endproc")
        assert (info.value.line, info.value.column) == (2, 6)

    def test_reserved_gates(self):
        with pytest.raises(ReservedGateError):
            parse_pa("process P[delta] := delta; stop endproc")
        with pytest.raises(PaError):
            parse_behaviour("hide i in stop")

    def test_arity_and_scoping(self):
        with pytest.raises(ArityError):
            parse_pa("process P[a] := Q[a, a] endproc process Q[x] := x; stop endproc")
        with pytest.raises(UnknownProcessError):
            parse_pa("process P[a] := Q[a] endproc")
        with pytest.raises(UndeclaredGateError):
            parse_pa("process P[a] := b; stop endproc")


class TestPrinter:
    def test_minimal_parentheses(self):
        e = body("(a; exit >> b; exit) [> c; exit")
        assert format_behaviour(e) == "(a; exit >> b; exit) [> c; exit"

    def test_hide_in_left_operand_is_parenthesised(self):
        e = Choice(Hide(frozenset({"a"}), Prefix("a", STOP)), Prefix("b", STOP))
        text = format_behaviour(e)
        assert text == "(hide a in a; stop) [] b; stop"
        assert body(text) == e

    def test_pretty_print_entry_first(self):
        spec = parse_pa("process Q[x] := x; stop endproc process P[a] := Q[a] endproc")
        spec = Specification(spec.definitions, "P")
        assert pretty_print(spec).startswith("process P[a]")

    @given(behaviour_strategy(depth=4))
    def test_print_parse_round_trip(self, e):
        assert body(format_behaviour(e)) == e


class TestSyntax:
    def test_free_gates(self):
        assert free_gates(body("hide a in a; b; stop |[c]| c; stop")) == {"b", "c"}

    def test_rename_avoids_capture(self):
        e = body("hide a in a; b; stop")
        r = rename(e, {"b": "a"})
        assert free_gates(r) == {"a"}
        assert labels_of(r) == ["a", "i"]

    def test_prefix_rejects_delta(self):
        with pytest.raises(PaError):
            Prefix(DELTA, STOP)

    def test_rename_processes(self):
        e = rename_processes(body("a; P[a] ||| hide b in b; P[a]"), {"P": "Q"})
        assert all(n.process == "Q" for n in walk_insts(e))


def labels_of(e):
    spec = Specification({"P": ProcessDef("P", tuple(sorted(free_gates(e))), e)}, "P")
    return sorted({a for _, a, _ in build_lts(spec).transitions})


def walk_insts(e):
    from pabpel.pa.syntax import walk
    return [n for n in walk(e) if isinstance(n, Instantiate)]


class TestSemantics:
    # Expected LTSs below were derived by hand from the inference rules.
    def test_exit(self):
        assert labels("exit") == [(0, DELTA, 1)]

    def test_stop(self):
        assert labels("stop") == []

    def test_enable_turns_termination_internal(self):
        assert labels("a; exit >> b; exit") == [(0, "a", 1), (1, TAU, 2), (2, "b", 3), (3, DELTA, 4)]

    def test_parallel_joint_termination(self):
        assert labels("exit ||| exit") == [(0, DELTA, 1)]

    def test_parallel_sync(self):
        assert labels("a; b; stop |[a]| a; stop") == [(0, "a", 1), (1, "b", 2)]

    def test_interleaving(self):
        assert labels("a; stop ||| b; stop") == [(0, "a", 1), (0, "b", 2), (1, "b", 3), (2, "a", 3)]

    def test_disable(self):
        assert labels("a; exit [> b; exit") == sorted([
            (0, "a", 1), (0, "b", 2), (1, DELTA, 3), (1, "b", 2), (2, DELTA, 3)])

    def test_hide(self):
        assert labels("hide a in a; b; stop") == [(0, TAU, 1), (1, "b", 2)]

    def test_recursion_closes_cycle(self):
        lts = build_lts(parse_pa("process P[a] := a; P[a] endproc"))
        assert lts.num_states == 1 and lts.transitions == {(0, "a", 0)}

    def test_unguarded_recursion(self):
        spec = parse_pa("process P[a] := P[a] [] a; stop endproc")
        with pytest.raises(UnguardedRecursionError):
            build_lts(spec)

    def test_state_bound(self):
        spec = parse_pa("process P[a] := a; (P[a] ||| P[a]) endproc")
        with pytest.raises(StateBoundExceeded) as info:
            build_lts(spec, state_bound=50)
        assert info.value.bound == 50

    def test_derivatives_sorted(self):
        out = derive_transitions(body("b; stop [] i; stop [] a; stop"), Specification())
        assert [a for a, _ in out] == [TAU, "a", "b"]

    def test_build_is_deterministic(self):
        rng = random.Random(7)
        for _ in range(30):
            e = random_behaviour(rng, 3)
            spec = Specification({"P": ProcessDef("P", tuple(sorted(free_gates(e))), e)}, "P")
            assert build_lts(spec) == build_lts(spec)
