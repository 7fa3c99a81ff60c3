"""Tabular stream files: a header of port names, then one row per tick.

Cells are separated by commas; an underscore marks an undefined cell.
Whitespace around cells is ignored and blank lines are skipped, so files
can be straight CSV or padded by hand.  Values are parsed against the wire
type: integer text for integer atoms, bare words for named atoms.
"""

from __future__ import annotations

from .domain import BOT, BaseType, LValue, Signature, SignatureError
from .engine import PrefixTrace


class StreamFormatError(ValueError):
    """A stream file does not fit the expected ports or value types."""


def format_cell(v: LValue) -> str:
    return "_" if v is BOT else str(v)


def parse_cell(text: str, base: BaseType, where: str) -> LValue:
    text = text.strip()
    if text == "_":
        return BOT
    if text == "":
        raise StreamFormatError(f"{where}: empty cell")
    try:
        as_int = int(text)
    except ValueError:
        as_int = None
    if as_int is not None and as_int in base.values:
        return as_int
    if text in base.values:
        return text
    raise StreamFormatError(
        f"{where}: {text!r} is not a value of type {base.name!r}"
    )


def write_stream(trace: PrefixTrace, names: tuple[str, ...]) -> str:
    """Render a trace with the given column names."""
    if len(names) != len(trace.signature):
        raise SignatureError(
            f"{len(names)} column names for {len(trace.signature)} wires"
        )
    lines = [",".join(names)]
    for row in trace.rows:
        lines.append(",".join(format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def read_stream(
    text: str, signature: Signature, names: tuple[str, ...]
) -> PrefixTrace:
    """Parse a stream file; the header must name exactly these columns in order."""
    lines = [ln for ln in text.splitlines() if ln.strip() != ""]
    if not lines:
        raise StreamFormatError("stream file is empty; a header row is required")
    header = tuple(cell.strip() for cell in lines[0].split(","))
    if header != tuple(names):
        raise StreamFormatError(
            f"header names {', '.join(header)} do not match ports "
            f"{', '.join(names)}"
        )
    rows = []
    for k, ln in enumerate(lines[1:], start=2):
        cells = [cell.strip() for cell in ln.split(",")]
        if len(cells) != len(signature):
            raise StreamFormatError(
                f"line {k}: {len(cells)} cells for {len(signature)} ports"
            )
        rows.append(
            tuple(
                parse_cell(cell, base, f"line {k}, column {names[i]}")
                for i, (cell, base) in enumerate(zip(cells, signature.wires))
            )
        )
    return PrefixTrace(signature, tuple(rows))
