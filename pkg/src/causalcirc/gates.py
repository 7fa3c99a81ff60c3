"""Gate catalog: strict lifts of concrete functions, parallel operators, wiring.

A gate is a named monotone function with a little metadata describing how it
was built.  Strict gates return bottom as soon as any input is bottom and are
total on concrete inputs; the parallel operators ``por`` and ``pand`` can
produce a concrete output from a partially bottom input, which is exactly
what lets a feedback loop through them settle on a non-bottom value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .domain import (
    BOOL,
    BOT,
    Atom,
    BaseType,
    CapError,
    DEFAULT_CAP,
    EnumCap,
    LValue,
    MonotoneFn,
    Signature,
    SignatureError,
    WireTuple,
    find_monotonicity_violation,
    is_int_range,
    sig,
    spot_check_monotone,
)

# How the gate's function was obtained; printing and equality depend on it.
KIND_STRICT = "strict-lift"
KIND_TABLE = "primitive-table"
KIND_WIRING = "wiring"


@dataclass(eq=False)
class GateDef:
    """A named, reusable monotone function with printing metadata.

    ``concrete_table`` is the bottom-free graph for strict gates built from
    rows.  Equality is structural: name, kind, signatures, and tables; the
    wrapped callable itself is not compared.
    """

    name: str
    fn: MonotoneFn
    kind: str
    builtin: bool = True
    concrete_table: dict[WireTuple, WireTuple] | None = field(default=None, repr=False)

    @property
    def dom(self) -> Signature:
        return self.fn.dom

    @property
    def cod(self) -> Signature:
        return self.fn.cod

    def __eq__(self, other) -> bool:
        if not isinstance(other, GateDef):
            return NotImplemented
        return (
            self.name == other.name
            and self.kind == other.kind
            and self.dom == other.dom
            and self.cod == other.cod
            and self.fn.table == other.fn.table
            and self.concrete_table == other.concrete_table
        )

    def __hash__(self) -> int:
        return hash((self.name, self.kind, self.dom, self.cod))

    def __repr__(self) -> str:
        return f"GateDef({self.name!r}, {self.dom!r} -> {self.cod!r})"


def strict_lift(
    name: str,
    dom: Signature,
    cod: Signature,
    g: Callable[[WireTuple], WireTuple],
    *,
    builtin: bool = True,
) -> GateDef:
    """Lift a function on concrete tuples to the lifted domain, strictly.

    The result is bottom on every coordinate whenever any input coordinate is
    bottom, and agrees with ``g`` on concrete tuples.  Strictness makes the
    lift monotone for an arbitrary total ``g``.
    """
    bot_out = cod.bottom()

    def lifted(t: WireTuple) -> WireTuple:
        if any(x is BOT for x in t):
            return bot_out
        return g(t)

    return GateDef(name, MonotoneFn(dom, cod, lifted, name), KIND_STRICT, builtin)


def strict_lift_table(
    name: str,
    dom: Signature,
    cod: Signature,
    rows: dict[WireTuple, WireTuple],
    *,
    builtin: bool = False,
) -> GateDef:
    """Strict lift of an explicit concrete table; rows must cover every concrete tuple."""
    rows = dict(rows)
    for t in dom.concrete_tuples():
        if t not in rows:
            raise SignatureError(f"gate {name!r} is missing a row for {t!r}")
    if len(rows) != dom.concrete_count():
        raise SignatureError(f"gate {name!r} has rows outside its domain")
    for t, out in rows.items():
        dom.check(t)
        cod.check(out)
        if any(x is BOT for x in t) or any(y is BOT for y in out):
            raise SignatureError(f"gate {name!r} has a bottom in concrete row {t!r}")
    g = strict_lift(name, dom, cod, rows.__getitem__, builtin=builtin)
    g.concrete_table = rows
    return g


def table_gate(
    name: str,
    dom: Signature,
    cod: Signature,
    rows: dict[WireTuple, WireTuple],
    *,
    builtin: bool = False,
) -> GateDef:
    """Gate from a full lifted table; from_table rejects non-monotone rows."""
    f = MonotoneFn.from_table(dom, cod, rows, name)
    return GateDef(name, f, KIND_TABLE, builtin)


def _por(x: LValue, y: LValue) -> LValue:
    # Concrete 1 wins over an undefined other input; 0 needs both sides.
    if x == 1 or y == 1:
        return 1
    if x == 0 and y == 0:
        return 0
    return BOT


def _pand(x: LValue, y: LValue) -> LValue:
    if x == 0 or y == 0:
        return 0
    if x == 1 and y == 1:
        return 1
    return BOT


def por() -> GateDef:
    """Parallel or: non-strict in either input."""
    f = MonotoneFn(sig(BOOL, BOOL), sig(BOOL), lambda t: (_por(t[0], t[1]),), "por")
    return GateDef("por", f, KIND_TABLE, builtin=True)


def pand() -> GateDef:
    """Parallel and: non-strict dual of por."""
    f = MonotoneFn(sig(BOOL, BOOL), sig(BOOL), lambda t: (_pand(t[0], t[1]),), "pand")
    return GateDef("pand", f, KIND_TABLE, builtin=True)


def not_gate() -> GateDef:
    return strict_lift("not", sig(BOOL), sig(BOOL), lambda t: (1 - t[0],))


def and_gate() -> GateDef:
    return strict_lift("and", sig(BOOL, BOOL), sig(BOOL), lambda t: (t[0] & t[1],))


def or_gate() -> GateDef:
    return strict_lift("or", sig(BOOL, BOOL), sig(BOOL), lambda t: (t[0] | t[1],))


def xor_gate() -> GateDef:
    return strict_lift("xor", sig(BOOL, BOOL), sig(BOOL), lambda t: (t[0] ^ t[1],))


def nand_gate() -> GateDef:
    return strict_lift("nand", sig(BOOL, BOOL), sig(BOOL), lambda t: (1 - (t[0] & t[1]),))


def nor_gate() -> GateDef:
    return strict_lift("nor", sig(BOOL, BOOL), sig(BOOL), lambda t: (1 - (t[0] | t[1]),))


def mux_gate(base: BaseType = BOOL) -> GateDef:
    """Strict select: (sel, a, b) -> a when sel is 1, b when sel is 0."""
    return strict_lift(
        "mux",
        sig(BOOL, base, base),
        sig(base),
        lambda t: (t[1] if t[0] == 1 else t[2],),
    )


def add_gate(base: BaseType) -> GateDef:
    """Wrapping addition on an integer-range base type."""
    if not is_int_range(base):
        raise SignatureError(f"add needs an integer range, got {base.name!r}")
    lo = base.values[0]
    n = len(base.values)
    return strict_lift(
        "add",
        sig(base, base),
        sig(base),
        lambda t: ((t[0] + t[1] - lo) % n + lo,),
    )


def eq_gate(base: BaseType) -> GateDef:
    """Strict equality test, boolean output."""
    return strict_lift(
        "eq", sig(base, base), sig(BOOL), lambda t: (1 if t[0] == t[1] else 0,)
    )


def lt_gate(base: BaseType) -> GateDef:
    if not all(isinstance(a, int) for a in base.values):
        raise SignatureError(f"lt needs integer values, got {base.name!r}")
    return strict_lift(
        "lt", sig(base, base), sig(BOOL), lambda t: (1 if t[0] < t[1] else 0,)
    )


def identity_gate(base: BaseType) -> GateDef:
    return GateDef(
        "id", MonotoneFn(sig(base), sig(base), lambda t: t, "id"), KIND_WIRING
    )


def dup_gate(base: BaseType) -> GateDef:
    """Fanout: one wire in, the same value on two wires out."""
    return GateDef(
        "dup",
        MonotoneFn(sig(base), sig(base, base), lambda t: (t[0], t[0]), "dup"),
        KIND_WIRING,
    )


def sink_gate(base: BaseType) -> GateDef:
    """Discard: one wire in, nothing out."""
    return GateDef(
        "sink", MonotoneFn(sig(base), sig(), lambda t: (), "sink"), KIND_WIRING
    )


def swap_gate(b1: BaseType, b2: BaseType) -> GateDef:
    return GateDef(
        "swap",
        MonotoneFn(sig(b1, b2), sig(b2, b1), lambda t: (t[1], t[0]), "swap"),
        KIND_WIRING,
    )


def const_gate(base: BaseType, value: LValue) -> GateDef:
    """Nullary source of a fixed value; ``value`` may be BOT."""
    if value is not BOT:
        base.check_member(value)
    label = "bot" if value is BOT else value
    f = MonotoneFn(sig(), sig(base), lambda t: (value,), f"const:{label}")
    f.table = {(): (value,)}
    return GateDef("const", f, KIND_WIRING)


def wiring_gates(base: BaseType) -> dict[str, GateDef]:
    """The plumbing gates over one base type, constants included."""
    out = {
        "id": identity_gate(base),
        "dup": dup_gate(base),
        "sink": sink_gate(base),
        "swap": swap_gate(base, base),
    }
    for v in base.values:
        out[f"const:{v}"] = const_gate(base, v)
    return out


class GateRegistry:
    """Name-to-gate map with a monotonicity check at registration.

    Reads are plain dict lookups and safe to share across threads once the
    single-threaded setup phase is over.
    """

    def __init__(self) -> None:
        self._gates: dict[str, GateDef] = {}

    def register(self, gate: GateDef, cap: EnumCap = DEFAULT_CAP) -> GateDef:
        if gate.name in self._gates:
            raise SignatureError(f"gate {gate.name!r} is already registered")
        try:
            bad = find_monotonicity_violation(gate.fn, cap)
        except CapError:
            spot_check_monotone(gate.fn)
            bad = None
        if bad is not None:
            raise SignatureError(f"gate {gate.name!r} is not monotone at {bad!r}")
        self._gates[gate.name] = gate
        return gate

    def get(self, name: str) -> GateDef:
        try:
            return self._gates[name]
        except KeyError:
            raise SignatureError(f"no gate named {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._gates

    def names(self) -> tuple[str, ...]:
        return tuple(sorted(self._gates))
