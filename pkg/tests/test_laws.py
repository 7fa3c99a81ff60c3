import random

import pytest
from hypothesis import given, strategies as st

from causalcirc.domain import (
    BOOL,
    BOT,
    CapError,
    MonotoneFn,
    UNIT,
    lfp,
    local_lfp,
    sig,
    tuple_leq,
)
from causalcirc.laws import (
    LawConfig,
    check_bekic,
    check_dinaturality,
    check_local_fixpoint,
    check_naturality_param,
    check_sliding,
    check_superposing,
    check_vanishing,
    check_yanking,
    count_monotone,
    enumerate_monotone,
    random_monotone,
    run_laws,
    _trace_mu,
)

import oracles

B = sig(BOOL)
U = sig(UNIT)
BB = sig(BOOL, BOOL)

SMALL = LawConfig(pair_budget=400, samples=25, seed=3)


# -- enumeration ----------------------------------------------------------


def test_known_monotone_counts():
    # Counting monotone maps between small lifted products is a classic
    # lattice exercise; these values pin the enumerator.
    assert count_monotone(U, U) == 3
    assert count_monotone(B, B) == 11
    assert count_monotone(sig(UNIT, UNIT), U) == 6
    assert count_monotone(BB, B) == 197


def test_enumeration_agrees_with_the_brute_filter():
    listed = {
        tuple(sorted(f.table.items(), key=repr))
        for f in enumerate_monotone(B, B)
    }
    brute = set()
    for table in oracles.all_functions(B, B):
        f = MonotoneFn(B, B, table.__getitem__, table=table)
        if oracles.brute_is_monotone(f):
            brute.add(tuple(sorted(table.items(), key=repr)))
    assert listed == brute


def test_enumeration_yields_monotone_functions_in_a_stable_order():
    first = [f.table for f in enumerate_monotone(B, B)]
    second = [f.table for f in enumerate_monotone(B, B)]
    assert first == second
    for f in enumerate_monotone(BB, B):
        pass  # the generator must not blow past its budget silently


def test_enumeration_budget_guard():
    big = sig(*[BOOL] * 3)
    with pytest.raises(CapError):
        for _ in enumerate_monotone(big, big, budget=2000):
            pass


@given(st.integers(0, 2**32 - 1))
def test_random_monotone_samples_are_monotone(seed):
    rng = random.Random(seed)
    dom = rng.choice([U, B, BB])
    cod = rng.choice([U, B])
    f = random_monotone(dom, cod, rng)
    assert oracles.brute_is_monotone(f)
    assert set(f.table) == set(dom.tuples())


# -- the healthy sweep ----------------------------------------------------


def test_all_laws_hold_on_a_small_budget():
    results = run_laws(SMALL)
    assert [r.law for r in results] == [
        "fixpoint",
        "naturality-param",
        "dinaturality",
        "bekic",
        "yanking",
        "vanishing",
        "sliding",
        "superposing",
    ]
    for res in results:
        assert res.passed, res.first_counterexample()
        assert res.cases > 0


def test_sweeps_record_their_mode():
    res = check_bekic(SMALL)
    modes = {cr.mode for cr in res.combos}
    assert "exhaustive" in modes  # the all-unit combo fits the budget
    assert "sampled" in modes  # the all-bool combo does not


def test_sweep_is_deterministic_for_a_seed():
    a = check_dinaturality(SMALL)
    b = check_dinaturality(SMALL)
    assert a == b


# -- mutation: a non-least fixed point ------------------------------------


def mu_greatest(f: MonotoneFn, split: int) -> MonotoneFn:
    """A deliberately wrong mu: the last fixed point in enumeration order."""
    ctx, loop = f.dom[:split], f.dom[split:]

    def solve(a):
        for x in reversed(list(loop.tuples())):
            if f.fn(a + x) == x:
                return x
        raise AssertionError("a monotone loop must have a fixed point")

    return MonotoneFn(ctx, f.cod, solve)


def test_non_least_mu_is_caught_by_the_fixpoint_law():
    res = check_local_fixpoint(LawConfig(mu=mu_greatest, pair_budget=400))
    assert not res.passed
    cx = res.first_counterexample()
    assert cx is not None
    assert cx.combo == "A=unit,X=unit"


def test_non_least_mu_counterexample_is_minimal_in_enumeration_order():
    # Reproduce the sweep by hand: the reported function must be the first
    # one in enumeration order whose fixed points are not unique.
    dom = sig(UNIT, UNIT)
    first_bad = None
    for f in enumerate_monotone(dom, U):
        mg = mu_greatest(f, 1)
        ml = local_lfp(f, 1)
        if any(mg.fn(a) != ml.fn(a) for a in U.tuples()):
            first_bad = f
            break
    assert first_bad is not None
    res = check_local_fixpoint(LawConfig(mu=mu_greatest, pair_budget=400))
    cx = res.first_counterexample()
    assert str(dict(first_bad.table)) in cx.detail


def mu_one_step(f: MonotoneFn, split: int) -> MonotoneFn:
    """Another wrong mu: a single Kleene step from bottom, never iterated."""
    ctx, loop = f.dom[:split], f.dom[split:]
    return MonotoneFn(ctx, f.cod, lambda a: f.fn(a + loop.bottom()))


def test_one_step_mu_slips_past_single_wire_loops():
    # On one lifted flat wire a single step already lands on the least
    # fixed point, so the basic law cannot see this mutant ...
    res = check_local_fixpoint(LawConfig(mu=mu_one_step, pair_budget=400))
    assert res.passed


def test_one_step_mu_is_caught_by_bekic():
    # ... but the simultaneous fixed point in the product domain needs a
    # second step, and the pairing law notices.
    res = check_bekic(LawConfig(mu=mu_one_step, pair_budget=400, samples=25))
    assert not res.passed


# -- mutation: trace wired to the wrong projection ------------------------


def bad_trace_first(f: MonotoneFn, k: int):
    """Trace variant that loops the first k outputs instead of the last."""
    na = len(f.dom) - k
    n_out = len(f.cod) - k
    proj = MonotoneFn(f.dom, f.dom[na:], lambda t: f.fn(t)[:k])
    m = local_lfp(proj, na)
    return MonotoneFn(
        f.dom[:na], f.cod[:n_out], lambda a: f.fn(a + m.fn(a))[:n_out]
    )


def test_wrong_projection_breaks_yanking():
    swap = MonotoneFn(BB, BB, lambda t: (t[1], t[0]))
    good = _trace_mu(swap, 1, local_lfp)
    assert all(good.fn(x) == x for x in B.tuples())
    bad = bad_trace_first(swap, 1)
    assert any(bad.fn(x) != x for x in B.tuples())


# -- the trace laws against the scan oracle -------------------------------


@given(st.integers(0, 2**32 - 1))
def test_trace_mu_equals_the_scan_oracle(seed):
    rng = random.Random(seed)
    f = random_monotone(BB, BB, rng)
    got = _trace_mu(f, 1, local_lfp)
    want = oracles.brute_trace(f, 1)
    for a in B.tuples():
        assert got.fn(a) == want[a]


def test_individual_law_checks_pass_alone():
    for check in (
        check_naturality_param,
        check_yanking,
        check_vanishing,
        check_sliding,
        check_superposing,
    ):
        res = check(SMALL)
        assert res.passed, (res.law, res.first_counterexample())
