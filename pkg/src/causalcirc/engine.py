"""Sequential simulation: one least fixed point per tick, history committed after.

A run consumes a prefix trace (one input tuple per tick) and produces the
output trace of the same length.  Within a tick, delay nodes with committed
history behave as constants, so every combinational cycle that passes one is
broken; a variable delay asked for 0 ticks of delay passes its current input
through and stays inside the tick's fixed point.  Histories are committed
only after the tick settles, which is what makes the semantics causal: the
first n output rows depend only on the first n input rows.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .circuit import Circuit, UnitDelay, VarDelay, check_valid
from .comb import Propagator
from .domain import (
    BOT,
    LValue,
    Signature,
    SignatureError,
    WireTuple,
    tuple_leq,
)


@dataclass(frozen=True)
class PrefixTrace:
    """A finite run of wire tuples, one per tick."""

    signature: Signature
    rows: tuple[WireTuple, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        for r in self.rows:
            self.signature.check(r)

    def __len__(self) -> int:
        return len(self.rows)

    def __getitem__(self, i: int) -> WireTuple:
        return self.rows[i]

    def prefix(self, n: int) -> "PrefixTrace":
        if not 0 <= n <= len(self.rows):
            raise SignatureError(f"no length-{n} prefix of a length-{len(self.rows)} trace")
        return PrefixTrace(self.signature, self.rows[:n])

    def is_bot_free(self) -> bool:
        return all(x is not BOT for r in self.rows for x in r)


def bot_trace(signature: Signature, ticks: int) -> PrefixTrace:
    return PrefixTrace(signature, ((BOT,) * len(signature),) * ticks)


@dataclass(frozen=True)
class SimState:
    """Committed delay histories after some number of ticks.

    ``histories[i]`` is the tuple of settled s-port values of node i, most
    recent last, trimmed to what the node can ever read back (1 for a unit
    delay, d_max for a variable delay); empty for non-delay nodes.
    """

    circuit: Circuit
    histories: tuple[tuple[LValue, ...], ...]
    t: int = 0


@lru_cache(maxsize=256)
def _propagator(c: Circuit) -> Propagator:
    return Propagator(check_valid(c))


def initial_state(c: Circuit) -> SimState:
    _propagator(c)
    return SimState(c, ((),) * len(c.nodes), 0)


def delay_step(
    node: UnitDelay | VarDelay,
    current_s: LValue,
    current_d: LValue,
    history: tuple[LValue, ...],
    t: int,
) -> LValue:
    """Output of a delay node during tick t, given committed history.

    For a unit delay: the init value at tick 0, afterwards the previous
    tick's input; the current input is never consulted.  For a variable
    delay: an undefined d yields an undefined output; d = 0 passes
    ``current_s`` through; d = k >= 1 reads k ticks back, falling back to
    the init value when the run is younger than k.
    """
    if isinstance(node, UnitDelay):
        return node.init if t == 0 else history[-1]
    if current_d is BOT:
        return BOT
    if not isinstance(current_d, int) or not node.d_min <= current_d <= node.d_max:
        raise SignatureError(
            f"delay amount {current_d!r} outside {node.d_min}..{node.d_max}"
        )
    if current_d == 0:
        return current_s
    if current_d > t:
        return node.init
    return history[-current_d]


def step(state: SimState, inputs: WireTuple) -> tuple[SimState, WireTuple]:
    """Run one tick: settle the wire vector, emit outputs, commit history."""
    c = state.circuit
    prop = _propagator(c)
    c.in_ports.check(inputs)
    histories = state.histories
    t = state.t
    nodes = c.nodes

    def delay_out(i: int, args: WireTuple) -> LValue:
        node = nodes[i]
        if isinstance(node, UnitDelay):
            return delay_step(node, args[0], None, histories[i], t)
        return delay_step(node, args[0], args[1], histories[i], t)

    vec = prop.solve(inputs, delay_out)
    outs = prop.outputs(inputs, vec)

    new_hist = list(histories)
    for i in prop.delay_nodes:
        node = nodes[i]
        cap = 1 if isinstance(node, UnitDelay) else node.d_max
        s_now = prop.read(c.node_inputs[i][0], inputs, vec)
        if cap > 0:
            new_hist[i] = (histories[i] + (s_now,))[-cap:]
    return SimState(c, tuple(new_hist), t + 1), outs


def simulate(c: Circuit, inputs: PrefixTrace, ticks: int | None = None) -> PrefixTrace:
    """Run the circuit over an input trace and collect the output trace."""
    if inputs.signature != c.in_ports:
        raise SignatureError(
            f"input trace over {inputs.signature!r} does not fit {c.in_ports!r}"
        )
    if ticks is None:
        ticks = len(inputs)
    if len(inputs) < ticks:
        raise SignatureError(
            f"input trace has {len(inputs)} ticks, {ticks} requested"
        )
    state = initial_state(c)
    rows = []
    for t in range(ticks):
        state, out = step(state, inputs[t])
        rows.append(out)
    return PrefixTrace(c.out_ports, tuple(rows))


def random_trace(
    rng: random.Random, signature: Signature, ticks: int, p_bot: float = 0.0
) -> PrefixTrace:
    """Seeded random trace; ``p_bot`` is the chance a cell is undefined."""
    rows = tuple(
        tuple(
            BOT if rng.random() < p_bot else rng.choice(b.values)
            for b in signature.wires
        )
        for _ in range(ticks)
    )
    return PrefixTrace(signature, rows)


def check_causality(
    c: Circuit,
    inputs: PrefixTrace,
    ticks: int | None = None,
    rng: random.Random | None = None,
) -> bool:
    """Outputs at tick n depend only on inputs up to tick n.

    Re-simulates every prefix of the input trace and demands the full run's
    prefix back.  With an rng, additionally lowers random input cells to
    bottom and checks the output trace only moves down pointwise.
    """
    if ticks is None:
        ticks = len(inputs)
    full = simulate(c, inputs, ticks)
    for n in range(ticks + 1):
        if simulate(c, inputs.prefix(n), n).rows != full.rows[:n]:
            return False
    if rng is not None:
        lowered = PrefixTrace(
            inputs.signature,
            tuple(
                tuple(BOT if rng.random() < 0.3 else x for x in row)
                for row in inputs.rows[:ticks]
            ),
        )
        low_out = simulate(c, lowered, ticks)
        for r1, r2 in zip(low_out.rows, full.rows):
            if not tuple_leq(r1, r2):
                return False
    return True
