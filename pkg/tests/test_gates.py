import random

import pytest
from hypothesis import given, strategies as st

from causalcirc.domain import (
    BOOL,
    BOT,
    BaseType,
    SignatureError,
    UNIT,
    int_range,
    is_monotone,
    sig,
)
from causalcirc.gates import (
    GateRegistry,
    add_gate,
    and_gate,
    const_gate,
    dup_gate,
    eq_gate,
    identity_gate,
    lt_gate,
    mux_gate,
    nand_gate,
    nor_gate,
    not_gate,
    or_gate,
    pand,
    por,
    sink_gate,
    strict_lift,
    strict_lift_table,
    swap_gate,
    table_gate,
    wiring_gates,
    xor_gate,
)

B = sig(BOOL)


# -- the non-strict pair --------------------------------------------------

POR_TABLE = {
    (BOT, BOT): BOT, (BOT, 0): BOT, (BOT, 1): 1,
    (0, BOT): BOT, (0, 0): 0, (0, 1): 1,
    (1, BOT): 1, (1, 0): 1, (1, 1): 1,
}


def test_por_matches_its_table_entry_for_entry():
    g = por()
    for (x, y), want in POR_TABLE.items():
        assert g.fn.apply((x, y)) == (want,), (x, y)


def test_pand_is_the_dual_of_por():
    g = pand()
    for (x, y), want in POR_TABLE.items():
        flip = {0: 1, 1: 0, BOT: BOT}
        assert g.fn.apply((flip[x], flip[y])) == (flip[want],)


def test_por_recovers_where_strict_or_cannot():
    assert or_gate().fn.apply((1, BOT)) == (BOT,)
    assert por().fn.apply((1, BOT)) == (1,)
    assert por().fn.apply((BOT, 1)) == (1,)


def test_the_non_strict_gates_are_monotone():
    assert is_monotone(por().fn)
    assert is_monotone(pand().fn)


# -- strict lifts ---------------------------------------------------------


def test_strict_lift_bottom_in_bottom_out():
    g = strict_lift("xor2", sig(BOOL, BOOL), B, lambda t: (t[0] ^ t[1],))
    assert g.fn.apply((BOT, 1)) == (BOT,)
    assert g.fn.apply((1, BOT)) == (BOT,)
    assert g.fn.apply((1, 1)) == (0,)
    assert is_monotone(g.fn)


def test_boolean_gates_agree_with_python_on_concrete_rows():
    cases = [
        (not_gate(), lambda a: 1 - a, 1),
        (and_gate(), lambda a, b: a & b, 2),
        (or_gate(), lambda a, b: a | b, 2),
        (xor_gate(), lambda a, b: a ^ b, 2),
        (nand_gate(), lambda a, b: 1 - (a & b), 2),
        (nor_gate(), lambda a, b: 1 - (a | b), 2),
    ]
    for g, ref, n in cases:
        for row in sig(*[BOOL] * n).concrete_tuples():
            assert g.fn.apply(row) == (ref(*row),), g.name


def test_mux_selects_and_is_strict():
    g = mux_gate()
    assert g.fn.apply((1, 0, 1)) == (0,)
    assert g.fn.apply((0, 0, 1)) == (1,)
    assert g.fn.apply((BOT, 0, 0)) == (BOT,)
    # Strict in every input: an undefined unselected branch still poisons
    # the output, unlike por.
    assert g.fn.apply((1, 0, BOT)) == (BOT,)
    assert g.fn.apply((0, BOT, 1)) == (BOT,)


def test_add_wraps_within_the_range():
    t = int_range(0, 3)
    g = add_gate(t)
    assert g.fn.apply((3, 1)) == (0,)
    assert g.fn.apply((2, 3)) == (1,)
    assert g.fn.apply((BOT, 2)) == (BOT,)
    with pytest.raises(SignatureError):
        add_gate(BaseType("t3", ("lo", "mid", "hi")))


def test_eq_and_lt():
    t3 = BaseType("t3", ("lo", "mid", "hi"))
    assert eq_gate(t3).fn.apply(("lo", "lo")) == (1,)
    assert eq_gate(t3).fn.apply(("lo", "hi")) == (0,)
    r = int_range(0, 3)
    assert lt_gate(r).fn.apply((1, 2)) == (1,)
    assert lt_gate(r).fn.apply((2, 2)) == (0,)
    with pytest.raises(SignatureError):
        lt_gate(t3)


# -- wiring ---------------------------------------------------------------


def test_wiring_gates_route_values():
    assert identity_gate(BOOL).fn.apply((1,)) == (1,)
    assert dup_gate(BOOL).fn.apply((BOT,)) == (BOT, BOT)
    assert dup_gate(BOOL).fn.apply((1,)) == (1, 1)
    assert sink_gate(BOOL).fn.apply((1,)) == ()
    assert swap_gate(BOOL, UNIT).fn.apply((1, 0)) == (0, 1)


def test_const_gate():
    g = const_gate(BOOL, 1)
    assert g.fn.apply(()) == (1,)
    gb = const_gate(BOOL, BOT)
    assert gb.fn.apply(()) == (BOT,)
    with pytest.raises(SignatureError):
        const_gate(BOOL, 2)


def test_wiring_gates_map_covers_constants():
    gs = wiring_gates(BOOL)
    assert set(gs) == {"id", "dup", "sink", "swap", "const:0", "const:1"}
    assert gs["const:1"].fn.apply(()) == (1,)


# -- table gates ----------------------------------------------------------


def test_strict_lift_table_checks_coverage():
    rows = {(0,): (1,), (1,): (0,)}
    g = strict_lift_table("inv", B, B, rows)
    assert g.fn.apply((BOT,)) == (BOT,)
    assert g.concrete_table == rows
    with pytest.raises(SignatureError):
        strict_lift_table("partial", B, B, {(0,): (1,)})
    with pytest.raises(SignatureError):
        strict_lift_table("bottomy", B, B, {(0,): (BOT,), (1,): (0,)})


def test_table_gate_rejects_non_monotone_tables():
    rows = dict.fromkeys(B.tuples(), (0,))
    rows[(BOT,)] = (1,)
    with pytest.raises(SignatureError, match="not monotone"):
        table_gate("bad", B, B, rows)


def test_table_gate_requires_all_lifted_rows():
    rows = {(0,): (0,), (1,): (1,)}
    with pytest.raises(SignatureError, match="missing a row"):
        table_gate("partial", B, B, rows)


# -- equality and registry ------------------------------------------------


def test_gate_equality_is_structural():
    assert por() == por()
    assert por() != pand()
    assert const_gate(BOOL, 0) != const_gate(BOOL, 1)
    rows = {(0,): (1,), (1,): (0,)}
    assert strict_lift_table("inv", B, B, rows) == strict_lift_table(
        "inv", B, B, rows
    )


def test_registry_round_trip_and_duplicates():
    reg = GateRegistry()
    reg.register(por())
    reg.register(pand())
    assert reg.get("por") == por()
    assert "por" in reg
    assert {"por", "pand"} <= set(reg.names())
    with pytest.raises(SignatureError):
        reg.register(por())
    with pytest.raises(SignatureError):
        reg.get("missing")


def test_registry_rejects_non_monotone_gates():
    from causalcirc.domain import MonotoneFn
    from causalcirc.gates import GateDef, KIND_TABLE

    bad_fn = MonotoneFn(B, B, lambda t: (1,) if t[0] is BOT else (0,))
    bad = GateDef("bad", bad_fn, KIND_TABLE, builtin=False)
    reg = GateRegistry()
    with pytest.raises(SignatureError):
        reg.register(bad)


@given(st.integers(0, 2**32 - 1))
def test_strict_lifts_of_random_concrete_functions_are_monotone(seed):
    rng = random.Random(seed)
    table = {
        row: (rng.choice((0, 1)),)
        for row in sig(BOOL, BOOL).concrete_tuples()
    }
    g = strict_lift_table("rnd", sig(BOOL, BOOL), B, table)
    assert is_monotone(g.fn)
