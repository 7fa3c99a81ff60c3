import json

import pytest

from causalcirc.circuit import (
    Circuit,
    LoopWire,
    SrcIn,
    SrcLoop,
    SrcNode,
    UnitDelay,
    VarDelay,
    check_valid,
    compose,
    delay_free_cycle,
    dump_json,
    from_gate,
    identity_circuit,
    in_port_names,
    is_contractive,
    node_out_sig,
    out_port_names,
    tensor,
    to_json,
    trace_loop,
    validate,
)
from causalcirc.comb import denote
from causalcirc.domain import BOOL, BOT, SignatureError, int_range, sig
from causalcirc.gates import const_gate, not_gate, por


def por_circuit() -> Circuit:
    return from_gate(por())


# -- builders -------------------------------------------------------------


def test_from_gate_wraps_ports_one_to_one():
    c = por_circuit()
    assert c.in_ports == sig(BOOL, BOOL)
    assert c.out_ports == sig(BOOL)
    check_valid(c)
    assert denote(c).apply((1, BOT)) == (1,)


def test_identity_circuit():
    c = identity_circuit(sig(BOOL, BOOL))
    assert denote(c).apply((0, 1)) == (0, 1)


def test_compose_pipes_outputs_to_inputs():
    inv = from_gate(not_gate())
    twice = compose(inv, inv)
    f = denote(twice)
    assert f.apply((0,)) == (0,)
    assert f.apply((1,)) == (1,)
    with pytest.raises(SignatureError):
        compose(inv, por_circuit())


def test_tensor_runs_side_by_side():
    c = tensor(from_gate(not_gate()), por_circuit())
    f = denote(c)
    assert f.apply((0, 1, BOT)) == (1, 1)


def test_trace_loop_consumes_the_closed_output():
    c = trace_loop(por_circuit(), 1)
    assert c.in_ports == sig(BOOL)
    assert c.out_ports == sig()
    assert len(c.loops) == 1


def test_trace_loop_feeds_the_fixed_point_forward():
    from causalcirc.gates import dup_gate

    # (a, x) -> (por(a,x), por(a,x)), then close x.
    c = compose(por_circuit(), from_gate(dup_gate(BOOL)))
    t = trace_loop(c, 1)
    f = denote(t)
    assert f.apply((1,)) == (1,)
    assert f.apply((0,)) == (BOT,)
    assert f.apply((BOT,)) == (BOT,)


def test_trace_loop_requires_matching_tails():
    c = tensor(from_gate(not_gate()), from_gate(const_gate(BOOL, 1)))
    # in (bool,), out (bool, bool): tails of length 2 cannot match.
    with pytest.raises(SignatureError):
        trace_loop(c, 2)


def test_port_names_default_and_stick():
    c = por_circuit()
    assert in_port_names(c) == ("a0", "a1")
    assert out_port_names(c) == ("y0",)
    named = Circuit(
        c.in_ports, c.out_ports, c.nodes, c.node_inputs, c.outputs,
        c.loops, in_names=("x", "y"), out_names=("z",),
    )
    assert in_port_names(named) == ("x", "y")


# -- validation -----------------------------------------------------------


def test_validate_catches_arity_and_type_errors():
    g = por()
    bad_arity = Circuit(
        sig(BOOL), sig(BOOL), (g,), ((SrcIn(0),),), (SrcNode(0, 0),), ()
    )
    assert any("input" in d.message for d in validate(bad_arity))

    ir = int_range(0, 3)
    bad_type = Circuit(
        sig(ir, BOOL), sig(BOOL),
        (g,), ((SrcIn(0), SrcIn(1)),), (SrcNode(0, 0),), (),
    )
    assert any("bool" in d.message for d in validate(bad_type))

    bad_index = Circuit(
        sig(BOOL, BOOL), sig(BOOL),
        (g,), ((SrcIn(0), SrcIn(7)),), (SrcNode(0, 0),), (),
    )
    assert validate(bad_index)


def test_validate_rejects_undeclared_cycles():
    # por feeding itself without a LoopWire is a wiring error, not a trace.
    g = por()
    c = Circuit(
        sig(BOOL), sig(BOOL),
        (g,), ((SrcIn(0), SrcNode(0, 0)),), (SrcNode(0, 0),), (),
    )
    diags = validate(c)
    assert any("cycle" in d.message for d in diags)
    with pytest.raises(SignatureError):
        check_valid(c)


def test_declared_loops_are_legal_cycles():
    c = trace_loop(por_circuit(), 1)
    assert validate(c) == []


def test_loop_wire_type_must_match_its_source():
    g = por()
    c = Circuit(
        sig(BOOL), sig(BOOL),
        (g,), ((SrcIn(0), SrcLoop(0)),), (SrcNode(0, 0),),
        (LoopWire(int_range(0, 1), SrcNode(0, 0)),),
    )
    diags = validate(c)
    assert any("feedback wire" in d.where for d in diags)


# -- contractivity --------------------------------------------------------


def test_delay_in_the_loop_makes_it_contractive():
    inv = from_gate(not_gate())
    d = UnitDelay(BOOL, 1)
    c = Circuit(
        sig(), sig(BOOL),
        (not_gate(), d),
        ((SrcLoop(0),), (SrcNode(0, 0),)),
        (SrcNode(1, 0),),
        (LoopWire(BOOL, SrcNode(1, 0)),),
    )
    check_valid(c)
    assert is_contractive(c)
    assert delay_free_cycle(c) is None
    assert not is_contractive(trace_loop(por_circuit(), 1))
    del inv


def test_delay_free_cycle_names_the_path():
    c = trace_loop(por_circuit(), 1)
    cyc = delay_free_cycle(c)
    assert cyc is not None
    assert any("por" in label for label in cyc)


def test_vardelay_s_port_cuts_only_when_min_is_positive():
    ir0 = int_range(0, 1)
    vd0 = VarDelay(BOOL, 0, 1, 0)
    c0 = Circuit(
        sig(), sig(BOOL),
        (vd0, const_gate(ir0, 0)),
        ((SrcLoop(0), SrcNode(1, 0)), ()),
        (SrcNode(0, 0),),
        (LoopWire(BOOL, SrcNode(0, 0)),),
    )
    check_valid(c0)
    assert not is_contractive(c0)

    vd1 = VarDelay(BOOL, 1, 2, 0)
    ir12 = vd1.d_base
    c1 = Circuit(
        sig(), sig(BOOL),
        (vd1, const_gate(ir12, 1)),
        ((SrcLoop(0), SrcNode(1, 0)), ()),
        (SrcNode(0, 0),),
        (LoopWire(BOOL, SrcNode(0, 0)),),
    )
    check_valid(c1)
    assert is_contractive(c1)


def test_vardelay_d_port_never_cuts():
    # Route the delay-control wire through a feedback wire from the
    # vardelay's own output: the depth is read in-tick, so even min >= 1
    # leaves an instantaneous cycle through the d port.
    ir = int_range(1, 1)
    vd = VarDelay(ir, 1, 1, 1)
    c = Circuit(
        sig(), sig(ir),
        (vd,),
        ((SrcLoop(0), SrcLoop(1)),),
        (SrcNode(0, 0),),
        (LoopWire(ir, SrcNode(0, 0)), LoopWire(ir, SrcNode(0, 0))),
    )
    check_valid(c)
    assert not is_contractive(c)
    cyc = delay_free_cycle(c)
    assert cyc is not None


def test_vardelay_validates_its_range():
    with pytest.raises(SignatureError):
        VarDelay(BOOL, 2, 1, 0)
    with pytest.raises(SignatureError):
        VarDelay(BOOL, -1, 1, 0)
    vd = VarDelay(BOOL, 0, 3, BOT)
    assert vd.d_base.values == (0, 1, 2, 3)
    assert node_out_sig(vd) == sig(BOOL)


# -- structural dump ------------------------------------------------------


def test_dump_is_stable_and_reparses_as_json():
    c = trace_loop(por_circuit(), 1)
    a, b = dump_json(c), dump_json(c)
    assert a == b
    doc = json.loads(a)
    assert doc["loops"]
    assert len(doc["nodes"]) == 1


def test_dump_distinguishes_node_order():
    inv = not_gate()
    left = Circuit(
        sig(BOOL, BOOL), sig(BOOL, BOOL),
        (inv, inv),
        ((SrcIn(0),), (SrcIn(1),)),
        (SrcNode(0, 0), SrcNode(1, 0)),
        (),
    )
    right = Circuit(
        sig(BOOL, BOOL), sig(BOOL, BOOL),
        (inv, inv),
        ((SrcIn(1),), (SrcIn(0),)),
        (SrcNode(1, 0), SrcNode(0, 0)),
        (),
    )
    assert to_json(left) != to_json(right)
    f, g = denote(left), denote(right)
    for x in sig(BOOL, BOOL).tuples():
        assert f.apply(x) == g.apply(x)


def test_bot_dumps_as_null():
    d = UnitDelay(BOOL, BOT)
    c = Circuit(
        sig(BOOL), sig(BOOL), (d,), ((SrcIn(0),),), (SrcNode(0, 0),), ()
    )
    doc = json.loads(dump_json(c))
    assert doc["nodes"][0]["init"] is None
