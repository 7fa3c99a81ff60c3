"""Command line front end.

Subcommands: check (parse and validate), sim (run a netlist over a stream),
laws (equational sweeps), equiv (compare two netlists), totality (bounded
totality check).  Exit codes: 0 success, 1 a checked property failed and a
witness was printed, 2 usage, parse, or format errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analysis, laws
from .circuit import (
    UnitDelay,
    VarDelay,
    delay_free_cycle,
    dump_json,
    in_port_names,
    is_contractive,
    out_port_names,
)
from .domain import BOT, CapError, DivergenceError, SignatureError
from .engine import PrefixTrace, simulate
from .netlist import NetlistError, parse_netlist, print_netlist
from .streams import StreamFormatError, read_stream, write_stream


class _Usage(Exception):
    pass


def _load_circuit(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise _Usage(f"cannot read {path}: {e.strerror or e}") from None
    try:
        return parse_netlist(text)
    except NetlistError as e:
        raise _Usage(f"{path}:\n{e}") from None


def _read_input_trace(args, c) -> PrefixTrace:
    ticks = args.ticks
    if len(c.in_ports) == 0:
        return PrefixTrace(c.in_ports, ((),) * ticks)
    if args.input is None:
        if args.pad_bot:
            return PrefixTrace(
                c.in_ports, ((BOT,) * len(c.in_ports),) * ticks
            )
        raise _Usage(
            "the circuit has input ports; provide --in FILE or --pad-bot"
        )
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise _Usage(f"cannot read {args.input}: {e.strerror or e}") from None
    try:
        tr = read_stream(text, c.in_ports, in_port_names(c))
    except StreamFormatError as e:
        raise _Usage(f"{args.input}: {e}") from None
    if len(tr) < ticks:
        if not args.pad_bot:
            raise _Usage(
                f"stream has {len(tr)} ticks, {ticks} requested; "
                "use --pad-bot to extend with undefined rows"
            )
        pad = ((BOT,) * len(c.in_ports),) * (ticks - len(tr))
        tr = PrefixTrace(c.in_ports, tr.rows + pad)
    return tr


def cmd_check(args) -> int:
    c = _load_circuit(args.file)
    if args.json:
        print(dump_json(c))
        return 0
    n_delays = sum(1 for n in c.nodes if isinstance(n, (UnitDelay, VarDelay)))
    print(f"ok: {len(c.in_ports)} in, {len(c.out_ports)} out, "
          f"{len(c.nodes)} nodes ({n_delays} delays), {len(c.loops)} feedback wires")
    cyc = delay_free_cycle(c)
    if cyc is None:
        print("contractive: every cycle crosses a history-reading delay")
    else:
        print("not contractive: " + " -> ".join(cyc))
    if analysis.totality_guarantee(c):
        print("totality guaranteed: concrete inputs stay concrete")
    return 0


def cmd_sim(args) -> int:
    c = _load_circuit(args.file)
    tr = _read_input_trace(args, c)
    try:
        out = simulate(c, tr, args.ticks)
    except DivergenceError as e:
        raise _Usage(str(e)) from None
    text = write_stream(out, out_port_names(c))
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_canon(args) -> int:
    c = _load_circuit(args.file)
    sys.stdout.write(print_netlist(c))
    return 0


def cmd_laws(args) -> int:
    cfg = laws.LawConfig(
        budget=args.budget,
        pair_budget=args.cap,
        samples=args.samples,
        seed=args.seed,
    )
    results = laws.run_laws(cfg)
    failed = None
    if args.json:
        out = []
        for res in results:
            out.append(
                {
                    "law": res.law,
                    "passed": res.passed,
                    "cases": res.cases,
                    "combos": [
                        {
                            "combo": cr.combo,
                            "mode": cr.mode,
                            "cases": cr.cases,
                            "counterexample": (
                                None
                                if cr.counterexample is None
                                else str(cr.counterexample)
                            ),
                        }
                        for cr in res.combos
                    ],
                }
            )
        print(json.dumps(out, indent=2))
        failed = next((r for r in results if not r.passed), None)
        return 0 if failed is None else 1
    for res in results:
        mark = "ok" if res.passed else "FAIL"
        modes = sorted({cr.mode for cr in res.combos})
        print(
            f"{res.law:<18} {len(res.combos):>3} combos "
            f"{res.cases:>8} cases  [{', '.join(modes)}]  {mark}"
        )
        if not res.passed and failed is None:
            failed = res.first_counterexample()
    if failed is not None:
        print(f"counterexample: {failed}")
        return 1
    print("all laws hold")
    return 0


def cmd_equiv(args) -> int:
    c1 = _load_circuit(args.file1)
    c2 = _load_circuit(args.file2)
    strategy = "random" if args.samples is not None else "exhaustive"
    try:
        rep = analysis.check_equiv(
            c1,
            c2,
            args.horizon,
            strategy=strategy,
            samples=args.samples or 1000,
            seed=args.seed,
        )
    except CapError as e:
        raise _Usage(f"{e}; pass --samples N") from None
    if args.json:
        print(json.dumps(rep.to_json(), indent=2))
        return 0 if rep.equivalent else 1
    if rep.equivalent:
        print(
            f"Equivalent up to horizon {rep.horizon} "
            f"({rep.cases} traces, {rep.strategy})"
        )
        return 0
    w = rep.witness
    print(f"NotEquivalent: outputs differ at tick {w.tick}, port {w.port}:")
    print(f"  left  {rep.left}")
    print(f"  right {rep.right}")
    if len(c1.in_ports):
        print("input trace:")
        sys.stdout.write(write_stream(w.inputs, in_port_names(c1)))
    return 1


def cmd_totality(args) -> int:
    c = _load_circuit(args.file)
    strategy = "random" if args.samples is not None else "exhaustive"
    try:
        rep = analysis.check_totality(
            c,
            args.horizon,
            strategy=strategy,
            samples=args.samples or 1000,
            seed=args.seed,
        )
    except CapError as e:
        raise _Usage(f"{e}; pass --samples N") from None
    if args.json:
        out = rep.to_json()
        out["guaranteed"] = analysis.totality_guarantee(c)
        print(json.dumps(out, indent=2))
        return 0 if rep.total else 1
    if rep.total:
        print(
            f"Total up to horizon {rep.horizon} "
            f"({rep.cases} traces, {rep.strategy})"
        )
        if analysis.totality_guarantee(c):
            print("also guaranteed statically")
        return 0
    w = rep.witness
    print(f"NotTotal: undefined output at tick {w.tick}, port {w.port}")
    if len(c.in_ports):
        print("input trace:")
        sys.stdout.write(write_stream(w.inputs, in_port_names(c)))
    if not is_contractive(c):
        print("note: the circuit is not contractive")
    return 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="causalcirc",
        description="Simulate and check circuits with explicit feedback.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse, validate, and describe a netlist")
    p.add_argument("file")
    p.add_argument("--json", action="store_true", help="print the IR dump")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("sim", help="simulate a netlist over a stream file")
    p.add_argument("file")
    p.add_argument("--ticks", type=int, required=True)
    p.add_argument("--in", dest="input", metavar="FILE", help="input stream")
    p.add_argument("--out", metavar="FILE", help="write outputs here")
    p.add_argument(
        "--pad-bot",
        action="store_true",
        help="extend missing input rows with undefined cells",
    )
    p.set_defaults(fn=cmd_sim)

    p = sub.add_parser("canon", help="print a netlist in canonical form")
    p.add_argument("file")
    p.set_defaults(fn=cmd_canon)

    p = sub.add_parser("laws", help="sweep the fixed-point and trace laws")
    p.add_argument("--budget", type=int, default=10**6,
                   help="enumeration scan budget per function space")
    p.add_argument("--cap", type=int, default=60_000,
                   help="exhaustive pair cap; larger combos are sampled")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_laws)

    p = sub.add_parser("equiv", help="compare two netlists over all traces")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--horizon", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true",
                   help="enumerate every input trace (the default)")
    g.add_argument("--samples", type=int, help="random strategy with N traces")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_equiv)

    p = sub.add_parser("totality", help="check bottom-free inputs stay bottom-free")
    p.add_argument("file")
    p.add_argument("--horizon", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true",
                   help="enumerate every input trace (the default)")
    g.add_argument("--samples", type=int, help="random strategy with N traces")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_totality)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except _Usage as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (SignatureError, StreamFormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())
