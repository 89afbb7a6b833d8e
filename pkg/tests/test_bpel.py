import random

import pytest
from hypothesis import given, strategies as st

from conftest import FIXTURES
from generators import random_process
from pabpel.bpel import (
    BPEL_NS, BpelProcess, CompensateOutsideHandler, Compensate, Direction, Empty,
    FlowLinkUnsupported, Flow, MalformedXml, MissingAttribute, PartnerOp, Pick,
    Receive, Reply, Scope, Sequence, StructureError, Switch, Throw, UnknownElement, Wait,
    errors, parse_bpel, partner_ops, serialize_bpel, validate,
)

NS = f' xmlns="{BPEL_NS}"'


def doc(inner, name="p", ns=NS):
    return f'<process name="{name}"{ns}>{inner}</process>'


def op(pl, o, d=Direction.RECEIVE):
    return PartnerOp(pl, o, d)


class TestReader:
    def test_sequence(self):
        p = parse_bpel(doc('<sequence><receive partnerLink="c" operation="o"/>'
                           '<reply partnerLink="c" operation="o"/></sequence>'))
        assert p.body == Sequence((Receive(op("c", "o")), Reply(op("c", "o", Direction.REPLY))))

    def test_invoke_modes(self):
        p = parse_bpel(doc('<flow><invoke partnerLink="a" operation="x" outputVariable="v"/>'
                           '<invoke partnerLink="b" operation="y"/></flow>'))
        assert [c.synchronous for c in p.body.children] == [True, False]

    def test_namespaces_accepted(self):
        for ns in ("", ' xmlns="http://docs.oasis-open.org/wsbpel/2.0/process/executable"'):
            assert parse_bpel(doc("<empty/>", ns=ns)).body == Empty()

    def test_declarations_and_conditions_discarded_with_warnings(self):
        p = parse_bpel(doc('<variables><variable name="v"/></variables>'
                           '<switch><case condition="x"><empty/></case></switch>'))
        assert p.body == Switch((Empty(),))
        assert any("variables" in w for w in p.warnings)
        assert any("condition" in w for w in p.warnings)

    def test_if_reads_as_switch(self):
        p = parse_bpel(doc('<if><condition>x</condition><empty/>'
                           '<elseif><condition>y</condition><wait for="PT1S"/></elseif>'
                           '<else><throw faultName="f"/></else></if>'))
        assert p.body == Switch((Empty(), Wait()), Throw("f"))

    def test_qualified_fault_name(self):
        p = parse_bpel(doc('<throw faultName="ns:oops"/>'))
        assert p.body == Throw("oops") and p.warnings

    def test_process_level_handlers_become_scope(self):
        p = parse_bpel(doc('<faultHandlers><catchAll><empty/></catchAll></faultHandlers>'
                           '<throw faultName="f"/>'))
        assert p.body == Scope(Throw("f"), ((None, Empty()),))

    def test_scope_parts(self):
        p = parse_bpel(doc(
            '<scope name="s"><eventHandlers><onMessage partnerLink="c" operation="e"><empty/>'
            '</onMessage></eventHandlers><compensationHandler><empty/></compensationHandler>'
            '<faultHandlers><catch faultName="f"><compensate/></catch></faultHandlers>'
            '<empty/></scope>'))
        assert p.body == Scope(Empty(), (("f", Compensate()),), Empty(),
                               ((op("c", "e"), Empty()),), "s")

    @pytest.mark.parametrize("text,exc", [
        ("<process", MalformedXml),
        (doc("<dance/>"), UnknownElement),
        (doc('<receive partnerLink="c"/>'), MissingAttribute),
        (doc("<flow><links/><empty/><empty/></flow>"), FlowLinkUnsupported),
        (doc("<compensate/>"), CompensateOutsideHandler),
        (doc("<empty/><empty/>"), StructureError),
        (doc('<while><empty/><empty/></while>'), StructureError),
        ('<process name="p" xmlns="urn:other"><empty/></process>', UnknownElement),
    ])
    def test_errors(self, text, exc):
        with pytest.raises(exc):
            parse_bpel(text)

    def test_error_location(self):
        with pytest.raises(UnknownElement) as info:
            parse_bpel(doc("<sequence><empty/><dance/></sequence>"))
        assert "/process/sequence[1]/dance[1]" in str(info.value)


class TestValidate:
    @pytest.mark.parametrize("body,code", [
        (Sequence(()), "EmptySequence"),
        (Flow((Empty(),)), "FlowArity"),
        (Switch(()), "EmptySwitch"),
        (Pick(()), "EmptyPick"),
        (Compensate(), "CompensateOutsideHandler"),
        (Sequence((Scope(Empty(), ((None, Empty()),), name="s"),
                   Scope(Empty(), ((None, Empty()),), name="s"))), "DuplicateScopeName"),
        (Scope(Empty(), ((None, Empty()), ("f", Empty()))), "CatchAllNotLast"),
        (Scope(Empty(), ((None, Empty()), (None, Empty()))), "DuplicateCatchAll"),
        (Scope(Empty(), (("f", Empty()), ("f", Empty()))), "DuplicateCatch"),
        (Receive(op("bad name", "o")), "InvalidName"),
    ])
    def test_codes(self, body, code):
        assert code in {d.code for d in errors(BpelProcess("p", body))}

    def test_reserved_process_name(self):
        assert [d.code for d in validate(BpelProcess("While_1", Empty()))] == ["ReservedName"]

    def test_compensate_in_handler_is_fine(self):
        assert not errors(BpelProcess("p", Scope(Empty(), ((None, Compensate()),))))

    def test_fixtures_are_valid(self):
        for path in sorted(FIXTURES.glob("*.bpel")):
            assert not errors(parse_bpel(path.read_text())), path.name


class TestWriter:
    def test_fixture_round_trip(self):
        for path in sorted(FIXTURES.glob("*.bpel")):
            p = parse_bpel(path.read_text())
            text = serialize_bpel(p)
            assert parse_bpel(text) == p
            assert serialize_bpel(parse_bpel(text)) == text

    @given(st.integers(0, 2**32 - 1))
    def test_random_round_trip(self, seed):
        p = random_process(random.Random(seed))
        assert not errors(p)
        assert parse_bpel(serialize_bpel(p)) == p

    def test_partner_ops(self):
        p = parse_bpel((FIXTURES / "invoke_modes.bpel").read_text())
        assert [o.gate for o in partner_ops(p)] == [
            "client.order.rcv", "stock.check.inv", "stock.check.res", "audit.log.inv",
            "client.order.rep"]
