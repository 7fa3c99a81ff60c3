"""Equational checks for the parameterized fixed point and the trace it induces.

Each law is swept over every combination of single-wire signatures drawn
from a configurable base list, with the function spaces enumerated
exhaustively when small enough and sampled (seeded, not uniform) otherwise.
The fixed-point operator itself is injectable so the suite can demonstrate
that a broken operator is caught; all laws are checked through whatever
operator the config carries.

Laws covered:

* local fixed point: mu(f)(a) is a fixed point, the least one, and monotone in a;
* naturality in the parameter: reindexing the context commutes with mu;
* dinaturality: a post-map on the looped wire can be slid around the loop;
* simultaneous vs nested fixed points of a pair (Bekic);
* trace axioms derived from mu: yanking, vanishing, sliding, superposing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator

from .domain import (
    BOOL,
    CapError,
    MonotoneFn,
    Signature,
    UNIT,
    find_monotonicity_violation,
    local_lfp,
    sig,
    tuple_leq,
)

Mu = Callable[[MonotoneFn, int], MonotoneFn]


def enumerate_monotone(
    dom: Signature, cod: Signature, budget: int = 10**6
) -> Iterator[MonotoneFn]:
    """All monotone functions dom -> cod, backtracking over a linear extension.

    Domain tuples are visited in lexicographic order with bottom first,
    which refines the pointwise order, so a candidate row only needs to
    dominate rows already placed.  ``budget`` caps the number of candidate
    rows scanned, successful or not; past it a CapError is raised.
    """
    dom_tuples = list(dom.tuples())
    cod_tuples = list(cod.tuples())
    n = len(dom_tuples)
    below = [
        [
            j
            for j in range(i)
            if dom_tuples[j] != dom_tuples[i] and tuple_leq(dom_tuples[j], dom_tuples[i])
        ]
        for i in range(n)
    ]
    scanned = 0
    assign: list = [None] * n
    choice = [0] * n
    i = 0
    while True:
        if i == n:
            table = dict(zip(dom_tuples, assign))
            yield MonotoneFn(dom, cod, table.__getitem__, "", table)
            i -= 1
            continue
        advanced = False
        ci = choice[i]
        bel = below[i]
        while ci < len(cod_tuples):
            scanned += 1
            if scanned > budget:
                raise CapError(
                    f"enumeration budget of {budget} candidate rows exceeded at "
                    f"{dom!r} -> {cod!r}"
                )
            c = cod_tuples[ci]
            ci += 1
            if all(tuple_leq(assign[j], c) for j in bel):
                assign[i] = c
                choice[i] = ci
                i += 1
                if i < n:
                    choice[i] = 0
                advanced = True
                break
        if not advanced:
            choice[i] = 0
            i -= 1
            if i < 0:
                return


def count_monotone(dom: Signature, cod: Signature, budget: int = 10**6) -> int:
    return sum(1 for _ in enumerate_monotone(dom, cod, budget))


def random_monotone(
    dom: Signature, cod: Signature, rng: random.Random, max_restarts: int = 10000
) -> MonotoneFn:
    """One random monotone function; restarts on dead ends, seeded by ``rng``."""
    dom_tuples = list(dom.tuples())
    cod_tuples = list(cod.tuples())
    below = [
        [
            j
            for j in range(i)
            if dom_tuples[j] != dom_tuples[i] and tuple_leq(dom_tuples[j], dom_tuples[i])
        ]
        for i in range(len(dom_tuples))
    ]
    for _ in range(max_restarts):
        assign: list = []
        for i in range(len(dom_tuples)):
            cands = [
                c
                for c in cod_tuples
                if all(tuple_leq(assign[j], c) for j in below[i])
            ]
            if not cands:
                break
            assign.append(rng.choice(cands))
        else:
            table = dict(zip(dom_tuples, assign))
            return MonotoneFn(dom, cod, table.__getitem__, "", table)
    raise CapError(f"no monotone sample for {dom!r} -> {cod!r} after {max_restarts} tries")


@dataclass(frozen=True)
class LawConfig:
    """Sweep parameters; ``mu`` is the fixed-point operator under test."""

    bases: tuple = (UNIT, BOOL)
    budget: int = 10**6
    pair_budget: int = 60_000
    samples: int = 200
    seed: int = 0
    mu: Mu = local_lfp


@dataclass(frozen=True)
class Counterexample:
    law: str
    combo: str
    detail: str

    def __str__(self) -> str:
        return f"{self.law} fails at {self.combo}: {self.detail}"


@dataclass(frozen=True)
class ComboResult:
    combo: str
    mode: str
    cases: int
    counterexample: Counterexample | None = None


@dataclass(frozen=True)
class SweepResult:
    law: str
    combos: tuple[ComboResult, ...]

    @property
    def passed(self) -> bool:
        return all(cr.counterexample is None for cr in self.combos)

    @property
    def cases(self) -> int:
        return sum(cr.cases for cr in self.combos)

    def first_counterexample(self) -> Counterexample | None:
        for cr in self.combos:
            if cr.counterexample is not None:
                return cr.counterexample
        return None


def _rng_for(cfg: LawConfig, law: str, combo: str) -> random.Random:
    return random.Random(f"{cfg.seed}:{law}:{combo}")


def _try_list(dom: Signature, cod: Signature, cfg: LawConfig) -> list | None:
    """Materialize a function space, or None when it exceeds the budgets."""
    out: list = []
    try:
        for f in enumerate_monotone(dom, cod, cfg.budget):
            out.append(f)
            if len(out) > cfg.pair_budget:
                return None
    except CapError:
        return None
    return out


def _table_str(f: MonotoneFn) -> str:
    rows = f.table if f.table is not None else f.tabulate()
    return "{" + ", ".join(f"{k!r}: {v!r}" for k, v in rows.items()) + "}"


def _sweep_fns(
    law: str,
    combo: str,
    dom: Signature,
    cod: Signature,
    cfg: LawConfig,
    check: Callable[[MonotoneFn], str | None],
) -> ComboResult:
    """Apply a per-function check across one function space."""
    fns = _try_list(dom, cod, cfg)
    if fns is None:
        rng = _rng_for(cfg, law, combo)
        fns = [random_monotone(dom, cod, rng) for _ in range(cfg.samples)]
        mode = "sampled"
    else:
        mode = "exhaustive"
    for f in fns:
        detail = check(f)
        if detail is not None:
            return ComboResult(
                combo, mode, len(fns), Counterexample(law, combo, detail)
            )
    return ComboResult(combo, mode, len(fns))


def _sweep_pairs(
    law: str,
    combo: str,
    dom1: Signature,
    cod1: Signature,
    dom2: Signature,
    cod2: Signature,
    cfg: LawConfig,
    check: Callable[[MonotoneFn, MonotoneFn], str | None],
) -> ComboResult:
    """Apply a check across pairs drawn from two function spaces."""
    fns1 = _try_list(dom1, cod1, cfg)
    fns2 = _try_list(dom2, cod2, cfg) if fns1 is not None else None
    if (
        fns1 is not None
        and fns2 is not None
        and len(fns1) * len(fns2) <= cfg.pair_budget
    ):
        cases = 0
        for f in fns1:
            for g in fns2:
                cases += 1
                detail = check(f, g)
                if detail is not None:
                    return ComboResult(
                        combo, "exhaustive", cases, Counterexample(law, combo, detail)
                    )
        return ComboResult(combo, "exhaustive", cases)
    rng = _rng_for(cfg, law, combo)
    for i in range(cfg.samples):
        f = random_monotone(dom1, cod1, rng)
        g = random_monotone(dom2, cod2, rng)
        detail = check(f, g)
        if detail is not None:
            return ComboResult(
                combo, "sampled", i + 1, Counterexample(law, combo, detail)
            )
    return ComboResult(combo, "sampled", cfg.samples)


def check_local_fixpoint(cfg: LawConfig = LawConfig()) -> SweepResult:
    """mu(f)(a) is a fixed point of f(a, -), below every other one, and monotone."""
    law = "fixpoint"
    combos = []
    for a_base in cfg.bases:
        for x_base in cfg.bases:
            combo = f"A={a_base.name},X={x_base.name}"
            a_sig, x_sig = sig(a_base), sig(x_base)

            def check(f: MonotoneFn, a_sig=a_sig, x_sig=x_sig) -> str | None:
                muf = cfg.mu(f, len(a_sig))
                for a in a_sig.tuples():
                    x = muf.fn(a)
                    if f.fn(a + x) != x:
                        return (
                            f"mu value {x!r} at context {a!r} is not fixed "
                            f"for f={_table_str(f)}"
                        )
                    for x2 in x_sig.tuples():
                        if f.fn(a + x2) == x2 and not tuple_leq(x, x2):
                            return (
                                f"mu value {x!r} at context {a!r} is not below "
                                f"fixed point {x2!r} for f={_table_str(f)}"
                            )
                bad = find_monotonicity_violation(muf)
                if bad is not None:
                    return f"mu(f) is not monotone at {bad!r} for f={_table_str(f)}"
                return None

            combos.append(_sweep_fns(law, combo, a_sig + x_sig, x_sig, cfg, check))
    return SweepResult(law, tuple(combos))


def check_naturality_param(cfg: LawConfig = LawConfig()) -> SweepResult:
    """Reindexing the context first equals taking mu first: mu(f . (g x id)) = mu(f) . g."""
    law = "naturality-param"
    combos = []
    for a_base in cfg.bases:
        for x_base in cfg.bases:
            for b_base in cfg.bases:
                combo = f"A={a_base.name},X={x_base.name},B={b_base.name}"
                a_sig, x_sig, b_sig = sig(a_base), sig(x_base), sig(b_base)
                nb = len(b_sig)

                def check(
                    f: MonotoneFn,
                    g: MonotoneFn,
                    a_sig=a_sig,
                    x_sig=x_sig,
                    b_sig=b_sig,
                    nb=nb,
                ) -> str | None:
                    reindexed = MonotoneFn(
                        b_sig + x_sig,
                        x_sig,
                        lambda t: f.fn(g.fn(t[:nb]) + t[nb:]),
                    )
                    lhs = cfg.mu(reindexed, nb)
                    muf = cfg.mu(f, len(a_sig))
                    for b in b_sig.tuples():
                        left = lhs.fn(b)
                        right = muf.fn(g.fn(b))
                        if left != right:
                            return (
                                f"at {b!r}: {left!r} vs {right!r} for "
                                f"f={_table_str(f)}, g={_table_str(g)}"
                            )
                    return None

                combos.append(
                    _sweep_pairs(
                        law, combo, a_sig + x_sig, x_sig, b_sig, a_sig, cfg, check
                    )
                )
    return SweepResult(law, tuple(combos))


def check_dinaturality(cfg: LawConfig = LawConfig()) -> SweepResult:
    """mu of g . f equals g applied to mu of f . (id x g)."""
    law = "dinaturality"
    combos = []
    for a_base in cfg.bases:
        for x_base in cfg.bases:
            for y_base in cfg.bases:
                combo = f"A={a_base.name},X={x_base.name},Y={y_base.name}"
                a_sig, x_sig, y_sig = sig(a_base), sig(x_base), sig(y_base)
                na = len(a_sig)

                def check(
                    f: MonotoneFn,
                    g: MonotoneFn,
                    a_sig=a_sig,
                    x_sig=x_sig,
                    y_sig=y_sig,
                    na=na,
                ) -> str | None:
                    after = MonotoneFn(
                        a_sig + x_sig, x_sig, lambda t: g.fn(f.fn(t))
                    )
                    before = MonotoneFn(
                        a_sig + y_sig,
                        y_sig,
                        lambda t: f.fn(t[:na] + g.fn(t[na:])),
                    )
                    mu_after = cfg.mu(after, na)
                    mu_before = cfg.mu(before, na)
                    for a in a_sig.tuples():
                        left = mu_after.fn(a)
                        right = g.fn(mu_before.fn(a))
                        if left != right:
                            return (
                                f"at {a!r}: {left!r} vs {right!r} for "
                                f"f={_table_str(f)}, g={_table_str(g)}"
                            )
                    return None

                combos.append(
                    _sweep_pairs(
                        law, combo, a_sig + x_sig, y_sig, y_sig, x_sig, cfg, check
                    )
                )
    return SweepResult(law, tuple(combos))


def check_bekic(cfg: LawConfig = LawConfig()) -> SweepResult:
    """A simultaneous fixed point of a pair equals the nested one."""
    law = "bekic"
    combos = []
    for a_base in cfg.bases:
        for x_base in cfg.bases:
            for y_base in cfg.bases:
                combo = f"A={a_base.name},X={x_base.name},Y={y_base.name}"
                a_sig, x_sig, y_sig = sig(a_base), sig(x_base), sig(y_base)
                na, nx = len(a_sig), len(x_sig)

                def check(
                    f: MonotoneFn,
                    g: MonotoneFn,
                    a_sig=a_sig,
                    x_sig=x_sig,
                    y_sig=y_sig,
                    na=na,
                    nx=nx,
                ) -> str | None:
                    both = MonotoneFn(
                        a_sig + x_sig + y_sig,
                        x_sig + y_sig,
                        lambda t: f.fn(t) + g.fn(t),
                    )
                    mu_both = cfg.mu(both, na)
                    mu_g = cfg.mu(g, na + nx)
                    inner = MonotoneFn(
                        a_sig + x_sig,
                        x_sig,
                        lambda t: f.fn(t + mu_g.fn(t)),
                    )
                    mu_inner = cfg.mu(inner, na)
                    for a in a_sig.tuples():
                        x = mu_inner.fn(a)
                        y = mu_g.fn(a + x)
                        left = mu_both.fn(a)
                        if left != x + y:
                            return (
                                f"at {a!r}: simultaneous {left!r} vs nested "
                                f"{(x + y)!r} for f={_table_str(f)}, g={_table_str(g)}"
                            )
                    return None

                dom = a_sig + x_sig + y_sig
                combos.append(
                    _sweep_pairs(law, combo, dom, x_sig, dom, y_sig, cfg, check)
                )
    return SweepResult(law, tuple(combos))


def _trace_mu(f: MonotoneFn, k: int, mu: Mu) -> MonotoneFn:
    """Trace built from the injected fixed-point operator."""
    na = len(f.dom) - k
    n_out = len(f.cod) - k
    proj = MonotoneFn(f.dom, f.dom[na:], lambda t: f.fn(t)[n_out:])
    m = mu(proj, na)
    return MonotoneFn(
        f.dom[:na], f.cod[:n_out], lambda a: f.fn(a + m.fn(a))[:n_out]
    )


def _tables_differ(h1: MonotoneFn, h2: MonotoneFn) -> str | None:
    for t in h1.dom.tuples():
        v1, v2 = h1.fn(t), h2.fn(t)
        if v1 != v2:
            return f"at {t!r}: {v1!r} vs {v2!r}"
    return None


def check_yanking(cfg: LawConfig = LawConfig()) -> SweepResult:
    """Tracing a bare swap is the identity."""
    law = "yanking"
    combos = []
    for x_base in cfg.bases:
        combo = f"X={x_base.name}"
        x_sig = sig(x_base)
        swap = MonotoneFn(x_sig + x_sig, x_sig + x_sig, lambda t: (t[1], t[0]))
        traced = _trace_mu(swap, 1, cfg.mu)
        bad = _tables_differ(traced, MonotoneFn.identity(x_sig))
        cx = None if bad is None else Counterexample(law, combo, bad)
        combos.append(ComboResult(combo, "exhaustive", len(x_base.lifted), cx))
    return SweepResult(law, tuple(combos))


def check_vanishing(cfg: LawConfig = LawConfig()) -> SweepResult:
    """Tracing zero wires changes nothing; tracing two equals tracing one twice."""
    law = "vanishing"
    combos = []
    for a_base in cfg.bases:
        for b_base in cfg.bases:
            combo = f"A={a_base.name},B={b_base.name},k=0"
            a_sig, b_sig = sig(a_base), sig(b_base)

            def check(f: MonotoneFn) -> str | None:
                return _tables_differ(_trace_mu(f, 0, cfg.mu), f)

            combos.append(_sweep_fns(law, combo, a_sig, b_sig, cfg, check))
    for a_base in cfg.bases:
        for x_base in cfg.bases:
            for y_base in cfg.bases:
                combo = f"A={a_base.name},X={x_base.name},Y={y_base.name},nested"
                a_sig = sig(a_base)
                x_sig = sig(x_base)
                y_sig = sig(y_base)

                def check(f: MonotoneFn) -> str | None:
                    both = _trace_mu(f, 2, cfg.mu)
                    inner = _trace_mu(f, 1, cfg.mu)
                    outer = _trace_mu(inner, 1, cfg.mu)
                    return _tables_differ(both, outer)

                combos.append(
                    _sweep_fns(
                        law,
                        combo,
                        a_sig + x_sig + y_sig,
                        a_sig + x_sig + y_sig,
                        cfg,
                        check,
                    )
                )
    return SweepResult(law, tuple(combos))


def check_sliding(cfg: LawConfig = LawConfig()) -> SweepResult:
    """A map on the looped wire slides around the loop: post-g equals pre-g."""
    law = "sliding"
    combos = []
    for a_base in cfg.bases:
        for b_base in cfg.bases:
            for x_base in cfg.bases:
                for y_base in cfg.bases:
                    combo = (
                        f"A={a_base.name},B={b_base.name},"
                        f"X={x_base.name},Y={y_base.name}"
                    )
                    a_sig, b_sig = sig(a_base), sig(b_base)
                    x_sig, y_sig = sig(x_base), sig(y_base)
                    na, nb = len(a_sig), len(b_sig)

                    def check(
                        f: MonotoneFn,
                        g: MonotoneFn,
                        a_sig=a_sig,
                        b_sig=b_sig,
                        x_sig=x_sig,
                        y_sig=y_sig,
                        na=na,
                        nb=nb,
                    ) -> str | None:
                        post = MonotoneFn(
                            a_sig + x_sig,
                            b_sig + x_sig,
                            lambda t: (lambda o: o[:nb] + g.fn(o[nb:]))(f.fn(t)),
                        )
                        pre = MonotoneFn(
                            a_sig + y_sig,
                            b_sig + y_sig,
                            lambda t: f.fn(t[:na] + g.fn(t[na:])),
                        )
                        bad = _tables_differ(
                            _trace_mu(post, 1, cfg.mu), _trace_mu(pre, 1, cfg.mu)
                        )
                        if bad is not None:
                            return (
                                f"{bad} for f={_table_str(f)}, g={_table_str(g)}"
                            )
                        return None

                    combos.append(
                        _sweep_pairs(
                            law,
                            combo,
                            a_sig + x_sig,
                            b_sig + y_sig,
                            y_sig,
                            x_sig,
                            cfg,
                            check,
                        )
                    )
    return SweepResult(law, tuple(combos))


def check_superposing(cfg: LawConfig = LawConfig()) -> SweepResult:
    """An untouched side wire commutes with tracing."""
    law = "superposing"
    combos = []
    for c_base in cfg.bases:
        for a_base in cfg.bases:
            for b_base in cfg.bases:
                for x_base in cfg.bases:
                    combo = (
                        f"C={c_base.name},A={a_base.name},"
                        f"B={b_base.name},X={x_base.name}"
                    )
                    c_sig, a_sig = sig(c_base), sig(a_base)
                    b_sig, x_sig = sig(b_base), sig(x_base)
                    nc = len(c_sig)

                    def check(
                        f: MonotoneFn,
                        c_sig=c_sig,
                        a_sig=a_sig,
                        b_sig=b_sig,
                        x_sig=x_sig,
                        nc=nc,
                    ) -> str | None:
                        widened = MonotoneFn(
                            c_sig + a_sig + x_sig,
                            c_sig + b_sig + x_sig,
                            lambda t: t[:nc] + f.fn(t[nc:]),
                        )
                        lhs = _trace_mu(widened, 1, cfg.mu)
                        traced = _trace_mu(f, 1, cfg.mu)
                        rhs = MonotoneFn(
                            c_sig + a_sig,
                            c_sig + b_sig,
                            lambda t: t[:nc] + traced.fn(t[nc:]),
                        )
                        bad = _tables_differ(lhs, rhs)
                        if bad is not None:
                            return f"{bad} for f={_table_str(f)}"
                        return None

                    combos.append(
                        _sweep_fns(
                            law, combo, a_sig + x_sig, b_sig + x_sig, cfg, check
                        )
                    )
    return SweepResult(law, tuple(combos))


def check_trace_axioms(cfg: LawConfig = LawConfig()) -> list[SweepResult]:
    """The four axioms a loop construct inherits from the fixed point."""
    return [
        check_yanking(cfg),
        check_vanishing(cfg),
        check_sliding(cfg),
        check_superposing(cfg),
    ]


def run_laws(cfg: LawConfig = LawConfig()) -> list[SweepResult]:
    """Every law sweep, in a fixed order."""
    return [
        check_local_fixpoint(cfg),
        check_naturality_param(cfg),
        check_dinaturality(cfg),
        check_bekic(cfg),
        *check_trace_axioms(cfg),
    ]
