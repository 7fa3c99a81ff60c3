"""Structural circuit IR: gate nodes, delay nodes, and explicit feedback wires.

A circuit is a bipartite wiring: every node input, feedback wire, and output
port names its source, which is either a circuit input, a node output port,
or a feedback wire.  Feedback wires are the only legal way to close a cycle;
``validate`` rejects any cycle in the node graph that is not routed through
one.  Delay nodes are inert here and only mean something to the sequential
engine; ``comb.denote`` refuses circuits that contain them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import TypeAlias

from .domain import BOT, BaseType, LValue, Signature, SignatureError, int_range
from .gates import GateDef


@dataclass(frozen=True)
class SrcIn:
    """Value of a circuit input port."""

    index: int


@dataclass(frozen=True)
class SrcNode:
    """Value of one output port of a node."""

    node: int
    port: int


@dataclass(frozen=True)
class SrcLoop:
    """Value of a feedback wire."""

    index: int


Source: TypeAlias = "SrcIn | SrcNode | SrcLoop"


@dataclass(frozen=True)
class UnitDelay:
    """One-tick delay: emits ``init`` at tick 0, then last tick's input."""

    base: BaseType
    init: LValue = BOT

    def __post_init__(self) -> None:
        self.base.check_member(self.init)


@dataclass(frozen=True)
class VarDelay:
    """Data-dependent delay: reads its input stream ``d`` ticks back.

    Input ports are (s, d).  A delay of 0 passes the current value through
    and participates in the tick's fixed point; a delay of k >= 1 reads
    committed history and never feeds a combinational cycle.  ``d_base`` is
    the base type of the d port; its values must be exactly d_min..d_max.
    """

    base: BaseType
    d_min: int
    d_max: int
    init: LValue = BOT
    d_base: BaseType | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.d_min <= self.d_max:
            raise SignatureError(
                f"bad delay range {self.d_min}..{self.d_max}; need 0 <= min <= max"
            )
        self.base.check_member(self.init)
        if self.d_base is None:
            object.__setattr__(self, "d_base", int_range(self.d_min, self.d_max))
        if self.d_base.values != tuple(range(self.d_min, self.d_max + 1)):
            raise SignatureError(
                f"d port type {self.d_base.name!r} must have values exactly "
                f"{self.d_min}..{self.d_max}"
            )


Node: TypeAlias = "GateDef | UnitDelay | VarDelay"


def node_in_sig(node: Node) -> Signature:
    if isinstance(node, UnitDelay):
        return Signature((node.base,))
    if isinstance(node, VarDelay):
        return Signature((node.base, node.d_base))
    return node.dom


def node_out_sig(node: Node) -> Signature:
    if isinstance(node, (UnitDelay, VarDelay)):
        return Signature((node.base,))
    return node.cod


def node_label(node: Node) -> str:
    if isinstance(node, UnitDelay):
        return "delay"
    if isinstance(node, VarDelay):
        return "vardelay"
    return node.name


@dataclass(frozen=True)
class LoopWire:
    """A feedback wire: carries ``src`` from this tick's fixed point back around."""

    base: BaseType
    src: Source


@dataclass(frozen=True)
class Circuit:
    in_ports: Signature
    out_ports: Signature
    nodes: tuple[Node, ...] = ()
    node_inputs: tuple[tuple[Source, ...], ...] = ()
    outputs: tuple[Source, ...] = ()
    loops: tuple[LoopWire, ...] = ()
    in_names: tuple[str, ...] | None = None
    out_names: tuple[str, ...] | None = None

    def has_delays(self) -> bool:
        return any(isinstance(n, (UnitDelay, VarDelay)) for n in self.nodes)

    def __hash__(self) -> int:
        # The engine looks circuits up in a cache once per tick; hashing the
        # whole node tree each time dominates small simulations, so the hash
        # is computed once and stashed on the instance.
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(
                (
                    self.in_ports,
                    self.out_ports,
                    self.nodes,
                    self.node_inputs,
                    self.outputs,
                    self.loops,
                    self.in_names,
                    self.out_names,
                )
            )
            object.__setattr__(self, "_hash", h)
        return h


def in_port_names(c: Circuit) -> tuple[str, ...]:
    if c.in_names is not None:
        return c.in_names
    return tuple(f"a{i}" for i in range(len(c.in_ports)))


def out_port_names(c: Circuit) -> tuple[str, ...]:
    if c.out_names is not None:
        return c.out_names
    return tuple(f"y{i}" for i in range(len(c.out_ports)))


def source_type(c: Circuit, src: Source) -> BaseType:
    if isinstance(src, SrcIn):
        return c.in_ports[src.index]
    if isinstance(src, SrcLoop):
        return c.loops[src.index].base
    return node_out_sig(c.nodes[src.node])[src.port]


def _source_ok(c: Circuit, src: Source) -> bool:
    if isinstance(src, SrcIn):
        return 0 <= src.index < len(c.in_ports)
    if isinstance(src, SrcLoop):
        return 0 <= src.index < len(c.loops)
    return (
        0 <= src.node < len(c.nodes)
        and 0 <= src.port < len(node_out_sig(c.nodes[src.node]))
    )


@dataclass(frozen=True)
class Diagnostic:
    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.where}: {self.message}"


def _check_sink(c: Circuit, where: str, src: Source, want: BaseType, out: list) -> None:
    if not _source_ok(c, src):
        out.append(Diagnostic(where, f"source {src!r} does not exist"))
        return
    got = source_type(c, src)
    if got != want:
        out.append(
            Diagnostic(where, f"type mismatch: needs {want.name}, wired to {got.name}")
        )


def _node_cycle(c: Circuit) -> list[int] | None:
    """A cycle in the node graph with feedback wires cut, or None."""
    edges: dict[int, list[int]] = {i: [] for i in range(len(c.nodes))}
    for i, ins in enumerate(c.node_inputs):
        for src in ins:
            if isinstance(src, SrcNode) and _source_ok(c, src):
                edges[i].append(src.node)
    color = {}
    stack_path: list[int] = []

    def visit(v: int) -> list[int] | None:
        color[v] = 1
        stack_path.append(v)
        for w in edges[v]:
            if color.get(w, 0) == 1:
                return stack_path[stack_path.index(w):] + [w]
            if color.get(w, 0) == 0:
                cyc = visit(w)
                if cyc is not None:
                    return cyc
        stack_path.pop()
        color[v] = 2
        return None

    for v in range(len(c.nodes)):
        if color.get(v, 0) == 0:
            cyc = visit(v)
            if cyc is not None:
                return cyc
    return None


def validate(c: Circuit) -> list[Diagnostic]:
    """Structural diagnostics; an empty list means the circuit is well formed."""
    out: list[Diagnostic] = []
    if len(c.node_inputs) != len(c.nodes):
        out.append(
            Diagnostic(
                "circuit",
                f"{len(c.nodes)} nodes but {len(c.node_inputs)} input lists",
            )
        )
        return out
    for i, (node, ins) in enumerate(zip(c.nodes, c.node_inputs)):
        want = node_in_sig(node)
        where = f"node {i} ({node_label(node)})"
        if len(ins) != len(want):
            out.append(
                Diagnostic(where, f"has {len(ins)} inputs, needs {len(want)}")
            )
            continue
        for p, src in enumerate(ins):
            _check_sink(c, f"{where} input {p}", src, want[p], out)
    if len(c.outputs) != len(c.out_ports):
        out.append(
            Diagnostic(
                "circuit",
                f"{len(c.outputs)} output sources for {len(c.out_ports)} ports",
            )
        )
    else:
        for i, src in enumerate(c.outputs):
            _check_sink(c, f"output {i}", src, c.out_ports[i], out)
    for j, lw in enumerate(c.loops):
        _check_sink(c, f"feedback wire {j}", lw.src, lw.base, out)
    if c.in_names is not None and len(c.in_names) != len(c.in_ports):
        out.append(Diagnostic("circuit", "input name list does not match ports"))
    if c.out_names is not None and len(c.out_names) != len(c.out_ports):
        out.append(Diagnostic("circuit", "output name list does not match ports"))
    if not out:
        cyc = _node_cycle(c)
        if cyc is not None:
            names = " -> ".join(f"node {i} ({node_label(c.nodes[i])})" for i in cyc)
            out.append(
                Diagnostic(
                    "circuit",
                    f"cycle not routed through a feedback wire: {names}",
                )
            )
    return out


def check_valid(c: Circuit) -> Circuit:
    diags = validate(c)
    if diags:
        raise SignatureError(
            "invalid circuit: " + "; ".join(str(d) for d in diags)
        )
    return c


# ---------------------------------------------------------------------------
# Builders.  Composition, product, and loop closure renumber node and
# feedback indices; inputs of the later circuit are patched to the outputs
# of the earlier one.


def from_gate(g: GateDef, in_names=None, out_names=None) -> Circuit:
    return Circuit(
        in_ports=g.dom,
        out_ports=g.cod,
        nodes=(g,),
        node_inputs=(tuple(SrcIn(i) for i in range(len(g.dom))),),
        outputs=tuple(SrcNode(0, p) for p in range(len(g.cod))),
        in_names=in_names,
        out_names=out_names,
    )


def identity_circuit(s: Signature) -> Circuit:
    return Circuit(
        in_ports=s,
        out_ports=s,
        outputs=tuple(SrcIn(i) for i in range(len(s))),
    )


def _remap(src: Source, node_off: int, loop_off: int, in_map) -> Source:
    if isinstance(src, SrcIn):
        return in_map(src.index)
    if isinstance(src, SrcNode):
        return SrcNode(src.node + node_off, src.port)
    return SrcLoop(src.index + loop_off)


def compose(c1: Circuit, c2: Circuit) -> Circuit:
    """Feed every output of c1 into the matching input of c2."""
    if c1.out_ports != c2.in_ports:
        raise SignatureError(
            f"cannot compose: {c1.out_ports!r} feeds {c2.in_ports!r}"
        )
    n1, l1 = len(c1.nodes), len(c1.loops)

    def patch(src: Source) -> Source:
        return _remap(src, n1, l1, lambda i: c1.outputs[i])

    return Circuit(
        in_ports=c1.in_ports,
        out_ports=c2.out_ports,
        nodes=c1.nodes + c2.nodes,
        node_inputs=c1.node_inputs
        + tuple(tuple(patch(s) for s in ins) for ins in c2.node_inputs),
        outputs=tuple(patch(s) for s in c2.outputs),
        loops=c1.loops
        + tuple(LoopWire(lw.base, patch(lw.src)) for lw in c2.loops),
        in_names=c1.in_names,
        out_names=c2.out_names,
    )


def tensor(c1: Circuit, c2: Circuit) -> Circuit:
    """Place two circuits side by side, c1's ports first."""
    n1, l1, i1 = len(c1.nodes), len(c1.loops), len(c1.in_ports)

    def patch(src: Source) -> Source:
        return _remap(src, n1, l1, lambda i: SrcIn(i + i1))

    names = None
    if c1.in_names is not None and c2.in_names is not None:
        names = c1.in_names + c2.in_names
    out_names = None
    if c1.out_names is not None and c2.out_names is not None:
        out_names = c1.out_names + c2.out_names
    return Circuit(
        in_ports=c1.in_ports + c2.in_ports,
        out_ports=c1.out_ports + c2.out_ports,
        nodes=c1.nodes + c2.nodes,
        node_inputs=c1.node_inputs
        + tuple(tuple(patch(s) for s in ins) for ins in c2.node_inputs),
        outputs=c1.outputs + tuple(patch(s) for s in c2.outputs),
        loops=c1.loops
        + tuple(LoopWire(lw.base, patch(lw.src)) for lw in c2.loops),
        in_names=names,
        out_names=out_names,
    )


def trace_loop(c: Circuit, k: int) -> Circuit:
    """Close the last k input ports onto the last k output ports as feedback wires."""
    n_in, n_out = len(c.in_ports), len(c.out_ports)
    if not 0 <= k <= min(n_in, n_out):
        raise SignatureError(f"cannot loop {k} wires of a {n_in}-in {n_out}-out circuit")
    keep_in = n_in - k
    keep_out = n_out - k
    if c.in_ports[keep_in:] != c.out_ports[keep_out:]:
        raise SignatureError(
            f"looped ports disagree: {c.in_ports[keep_in:]!r} vs {c.out_ports[keep_out:]!r}"
        )
    l0 = len(c.loops)

    def patch(src: Source) -> Source:
        if isinstance(src, SrcIn) and src.index >= keep_in:
            return SrcLoop(l0 + src.index - keep_in)
        return src

    new_loops = tuple(
        LoopWire(c.in_ports[keep_in + j], patch(c.outputs[keep_out + j]))
        for j in range(k)
    )
    return Circuit(
        in_ports=c.in_ports[:keep_in],
        out_ports=c.out_ports[:keep_out],
        nodes=c.nodes,
        node_inputs=tuple(tuple(patch(s) for s in ins) for ins in c.node_inputs),
        outputs=tuple(patch(s) for s in c.outputs[:keep_out]),
        loops=tuple(LoopWire(lw.base, patch(lw.src)) for lw in c.loops) + new_loops,
        in_names=c.in_names[:keep_in] if c.in_names is not None else None,
        out_names=c.out_names[:keep_out] if c.out_names is not None else None,
    )


# ---------------------------------------------------------------------------
# Contractivity: every cycle must pass a delay that is guaranteed to look
# only at committed history.  A unit delay qualifies; a variable delay
# qualifies through its s port when its minimum delay is at least 1.  The
# d port never qualifies: the chosen delay amount is needed this tick.


def _cuts_cycle(node: Node, port: int) -> bool:
    if isinstance(node, UnitDelay):
        return True
    if isinstance(node, VarDelay):
        return port == 0 and node.d_min >= 1
    return False


def delay_free_cycle(c: Circuit) -> list[str] | None:
    """A cycle avoiding all delaying edges, as vertex labels, or None.

    Vertices are nodes and feedback wires; edges follow wiring except node
    input edges that are cut by a qualifying delay.
    """
    n = len(c.nodes)
    n_vert = n + len(c.loops)

    def src_vert(src: Source) -> int | None:
        if isinstance(src, SrcNode):
            return src.node
        if isinstance(src, SrcLoop):
            return n + src.index
        return None

    edges: dict[int, list[int]] = {v: [] for v in range(n_vert)}
    for i, (node, ins) in enumerate(zip(c.nodes, c.node_inputs)):
        for p, src in enumerate(ins):
            if _cuts_cycle(node, p):
                continue
            v = src_vert(src)
            if v is not None:
                edges[i].append(v)
    for j, lw in enumerate(c.loops):
        v = src_vert(lw.src)
        if v is not None:
            edges[n + j].append(v)

    def label(v: int) -> str:
        if v < n:
            return f"node {v} ({node_label(c.nodes[v])})"
        return f"feedback wire {v - n}"

    color: dict[int, int] = {}
    path: list[int] = []

    def visit(v: int) -> list[int] | None:
        color[v] = 1
        path.append(v)
        for w in edges[v]:
            if color.get(w, 0) == 1:
                return path[path.index(w):] + [w]
            if color.get(w, 0) == 0:
                cyc = visit(w)
                if cyc is not None:
                    return cyc
        path.pop()
        color[v] = 2
        return None

    for v in range(n_vert):
        if color.get(v, 0) == 0:
            cyc = visit(v)
            if cyc is not None:
                return [label(v) for v in cyc]
    return None


def is_contractive(c: Circuit) -> bool:
    """True when every cycle passes a delay edge that reads committed history."""
    return delay_free_cycle(c) is None


# ---------------------------------------------------------------------------
# Stable structural dump, for diffing and for showing two circuits distinct.


def _src_json(src: Source):
    if isinstance(src, SrcIn):
        return {"in": src.index}
    if isinstance(src, SrcLoop):
        return {"loop": src.index}
    return {"node": src.node, "port": src.port}


def _value_json(x: LValue):
    return None if x is BOT else x


def _node_json(node: Node) -> dict:
    if isinstance(node, UnitDelay):
        return {"op": "delay", "type": node.base.name, "init": _value_json(node.init)}
    if isinstance(node, VarDelay):
        return {
            "op": "vardelay",
            "type": node.base.name,
            "d_min": node.d_min,
            "d_max": node.d_max,
            "d_type": node.d_base.name,
            "init": _value_json(node.init),
        }
    out: dict = {"op": node.name, "kind": node.kind}
    if node.fn.table is not None:
        out["table"] = sorted(
            (
                [list(map(_value_json, k)), list(map(_value_json, v))]
                for k, v in node.fn.table.items()
            ),
            key=json.dumps,
        )
    if node.concrete_table is not None:
        out["rows"] = sorted(
            ([list(k), list(v)] for k, v in node.concrete_table.items()),
            key=json.dumps,
        )
    return out


def to_json(c: Circuit) -> dict:
    """Deterministic structural dump; equal circuits dump equal dicts."""
    types: dict[str, tuple] = {}
    for b in list(c.in_ports) + list(c.out_ports):
        types[b.name] = b.values
    for lw in c.loops:
        types[lw.base.name] = lw.base.values
    for node in c.nodes:
        for b in list(node_in_sig(node)) + list(node_out_sig(node)):
            types[b.name] = b.values
    return {
        "types": {k: list(v) for k, v in sorted(types.items())},
        "in": [
            {"name": nm, "type": b.name}
            for nm, b in zip(in_port_names(c), c.in_ports)
        ],
        "out": [
            {"name": nm, "type": b.name}
            for nm, b in zip(out_port_names(c), c.out_ports)
        ],
        "nodes": [
            dict(_node_json(node), inputs=[_src_json(s) for s in ins])
            for node, ins in zip(c.nodes, c.node_inputs)
        ],
        "loops": [
            {"type": lw.base.name, "src": _src_json(lw.src)} for lw in c.loops
        ],
        "outputs": [_src_json(s) for s in c.outputs],
    }


def dump_json(c: Circuit) -> str:
    return json.dumps(to_json(c), indent=2, sort_keys=False)
