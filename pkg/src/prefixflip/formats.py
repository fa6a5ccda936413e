"""Instance files, move notation and result documents.

Instance format::

    # optional comment lines
    signed                 <- or "unsigned"
    2 3                    <- dims (1 to 3 integers)
    c f e                  <- cells; rank 3 uses n blocks of m lines,
    b D A                     separated by a blank line

Tokens are nonzero integers (negative = Down) or, when every id fits in
A..Z, single letters (lower case = Down). Output always uses integers.
"""

from __future__ import annotations

import json
import math
import re
from typing import Any, Iterable, Optional, Sequence

from .model import AXIS_NAMES, Mode, Move, MultiArray, Token

FORMAT_VERSION = 1

_MOVE_RE = re.compile(r"([HVDF])([1-9][0-9]*)")


class FormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None,
                 token: Optional[int] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if token is not None:
            where.append(f"token {token}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.column = column
        self.token = token


def _words(text: str) -> list[tuple[int, str]]:
    """(column, word) pairs, 1-based columns."""
    return [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", text)]


def _parse_token(word: str, lineno: int, col: int) -> tuple[str, int]:
    if len(word) == 1 and word.isalpha() and word.isascii():
        value = ord(word.upper()) - ord("A") + 1
        return "letter", value if word.isupper() else -value
    try:
        value = int(word)
    except ValueError:
        raise FormatError(f"bad token {word!r}", lineno, col) from None
    if value == 0:
        raise FormatError("token 0 is not allowed", lineno, col)
    return "number", value


def parse_instance(text: str) -> MultiArray:
    lines = [(i + 1, ln.rstrip("\r")) for i, ln in enumerate(text.split("\n"))]
    lines = [(no, ln) for no, ln in lines if not ln.lstrip().startswith("#")]
    header = [(no, ln) for no, ln in lines if ln.strip()]
    if len(header) < 2:
        raise FormatError("expected a mode line and a dims line", lines[-1][0] if lines else 1)

    mode_no, mode_line = header[0]
    try:
        mode = Mode.parse(mode_line.strip())
    except ValueError as exc:
        raise FormatError(str(exc), mode_no, 1) from None

    dims_no, dims_line = header[1]
    dims = []
    for col, word in _words(dims_line):
        if not word.isdigit() or int(word) < 1:
            raise FormatError(f"bad dimension {word!r}", dims_no, col)
        dims.append(int(word))
    if not 1 <= len(dims) <= 3:
        raise FormatError(f"expected 1 to 3 dimensions, got {len(dims)}", dims_no, 1)

    body = [(no, ln) for no, ln in lines if no > dims_no]
    while body and not body[-1][1].strip():
        body.pop()
    while body and not body[0][1].strip():
        body.pop(0)

    if len(dims) == 3:
        blocks: list[list[tuple[int, str]]] = [[]]
        for no, ln in body:
            if ln.strip():
                blocks[-1].append((no, ln))
            elif blocks[-1]:
                blocks.append([])
        if len(blocks) != dims[0]:
            where = body[-1][0] if body else dims_no
            raise FormatError(f"expected {dims[0]} blocks, got {len(blocks)}", where)
        rows = []
        for block in blocks:
            if len(block) != dims[1]:
                raise FormatError(f"expected {dims[1]} lines in block, got {len(block)}", block[0][0])
            rows += block
        row_len = dims[2]
    else:
        rows = [(no, ln) for no, ln in body if ln.strip()]
        expected_rows = 1 if len(dims) == 1 else dims[0]
        if len(rows) != expected_rows:
            where = rows[-1][0] if rows else dims_no
            raise FormatError(f"expected {expected_rows} rows of cells, got {len(rows)}", where)
        row_len = dims[-1]

    size = math.prod(dims)
    style = None
    values = []
    seen: dict[int, tuple[int, int]] = {}
    for no, ln in rows:
        words = _words(ln)
        if len(words) != row_len:
            raise FormatError(f"expected {row_len} tokens, got {len(words)}", no, 1)
        for col, word in words:
            kind, value = _parse_token(word, no, col)
            if style is None:
                style = kind
            elif kind != style:
                raise FormatError("mixed letter and numeric tokens", no, col)
            if kind == "letter" and size > 26:
                raise FormatError("letter tokens need at most 26 cells", no, col)
            if abs(value) > size:
                raise FormatError(f"id {abs(value)} out of range 1..{size}", no, col)
            if abs(value) in seen:
                first = seen[abs(value)]
                raise FormatError(
                    f"duplicate id {abs(value)} (first at line {first[0]}, column {first[1]})", no, col
                )
            if value < 0 and mode is Mode.UNSIGNED:
                raise FormatError("Down token in an unsigned instance", no, col)
            seen[abs(value)] = (no, col)
            values.append(value)
    return MultiArray(tuple(dims), tuple(Token.from_value(v) for v in values), mode)


def write_instance(ma: MultiArray) -> str:
    out = [ma.mode.value, " ".join(str(d) for d in ma.dims)]
    values = ma.values()
    width = ma.dims[-1]
    rows = [" ".join(str(v) for v in values[i:i + width]) for i in range(0, len(values), width)]
    if ma.rank == 3:
        per_block = ma.dims[1]
        for b in range(ma.dims[0]):
            if b:
                out.append("")
            out += rows[b * per_block:(b + 1) * per_block]
    else:
        out += rows
    return "\n".join(out) + "\n"


def parse_moves(text: str) -> tuple[Move, ...]:
    moves = []
    for i, word in enumerate(text.split()):
        m = _MOVE_RE.fullmatch(word)
        if m is None:
            raise FormatError(f"malformed move {word!r}", token=i)
        letter = "H" if m.group(1) == "F" else m.group(1)
        moves.append(Move(AXIS_NAMES.index(letter), int(m.group(2))))
    return tuple(moves)


def write_moves(moves: Iterable[Move]) -> str:
    return " ".join(str(mv) for mv in moves)


# -- result documents ------------------------------------------------------------

#: Every machine document carries exactly these keys (null when not applicable).
RESULT_FIELDS = (
    "format_version",
    "kind",
    "dims",
    "mode",
    "status",
    "method",
    "valid",
    "solved",
    "invalid_index",
    "moves",
    "length",
    "optimal",
    "verdict",
    "parity",
    "reason",
    "orbit_size",
    "eccentricity",
    "histogram",
    "complete",
    "rows",
    "instance",
    "nodes_expanded",
    "elapsed_ms",
    "seed",
)


def result_document(kind: str, **fields: Any) -> dict:
    unknown = set(fields) - set(RESULT_FIELDS)
    if unknown:
        raise KeyError(f"unknown result fields: {sorted(unknown)}")
    doc = dict.fromkeys(RESULT_FIELDS)
    doc.update(fields)
    doc["format_version"] = FORMAT_VERSION
    doc["kind"] = kind
    return doc


def document_for(result: Any, *, deterministic: bool = False, **extra: Any) -> dict:
    """Build the machine document for a solver or analysis result object."""
    # local imports: analysis depends on this module for its own output
    from .analysis import OrbitReport, Reachability, TheoremRow
    from .solvers import Solution, Verification

    if isinstance(result, Solution):
        fields = dict(
            status="solved",
            method=result.method,
            solved=True,
            valid=True,
            moves=write_moves(result.moves),
            length=result.length,
            optimal=result.optimal,
            nodes_expanded=result.nodes_expanded,
            elapsed_ms=None if deterministic else round(result.elapsed * 1000, 3),
        )
        return result_document("solution", **{**fields, **extra})
    if isinstance(result, Verification):
        fields = dict(
            status="solved" if result.solved else ("invalid" if not result.valid else "unsolved"),
            valid=result.valid,
            solved=result.solved,
            invalid_index=result.invalid_index,
            reason=result.error or None,
            instance=write_instance(result.final),
        )
        return result_document("verification", **{**fields, **extra})
    if isinstance(result, Reachability):
        fields = dict(
            status=result.verdict.value,
            verdict=result.verdict.value,
            parity=str(result.parity) if result.parity is not None else None,
            reason=result.reason,
        )
        return result_document("reachability", **{**fields, **extra})
    if isinstance(result, OrbitReport):
        fields = dict(
            status="complete" if result.complete else "incomplete",
            dims=list(result.dims),
            mode=result.mode.value,
            orbit_size=result.orbit_size,
            eccentricity=result.eccentricity,
            histogram=[list(pair) for pair in result.histogram],
            complete=result.complete,
            nodes_expanded=result.orbit_size,
            elapsed_ms=None if deterministic else round(result.elapsed * 1000, 3),
        )
        return result_document("orbit", **{**fields, **extra})
    if isinstance(result, Sequence) and all(isinstance(r, TheoremRow) for r in result):
        rows = [
            dict(dims=list(r.dims), verdict=r.verdict.value, orbit_size=r.orbit_size,
                 expected=r.expected, status=r.status)
            for r in result
        ]
        ok = all(r.status != "FAIL" for r in result)
        return result_document("theorem-check", status="PASS" if ok else "FAIL", rows=rows, **extra)
    raise TypeError(f"no document layout for {type(result).__name__}")


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=False, separators=(", ", ": ")) + "\n"


def loads(text: str) -> dict:
    doc = json.loads(text)
    if set(doc) != set(RESULT_FIELDS):
        raise FormatError(f"document keys differ from the result schema: {sorted(set(doc) ^ set(RESULT_FIELDS))}")
    if doc["format_version"] != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {doc['format_version']}")
    return doc


def _text_lines(doc: dict) -> list[str]:
    kind = doc["kind"]
    if kind == "solution":
        lines = [
            f"method: {doc['method']}",
            f"optimal: {str(doc['optimal']).lower()}",
            f"length: {doc['length']}",
            f"moves: {doc['moves'] or '(none)'}",
            f"nodes_expanded: {doc['nodes_expanded']}",
        ]
    elif kind == "verification":
        lines = [f"valid: {str(doc['valid']).lower()}", f"solved: {str(doc['solved']).lower()}"]
        if doc["invalid_index"] is not None:
            lines.append(f"invalid_index: {doc['invalid_index']}")
        if doc["reason"]:
            lines.append(f"error: {doc['reason']}")
        lines.append("final:")
        lines += ["  " + ln for ln in doc["instance"].rstrip("\n").split("\n")]
    elif kind == "reachability":
        lines = [f"verdict: {doc['verdict']}"]
        if doc["parity"] is not None:
            lines.append(f"parity: {doc['parity']}")
        lines.append(f"reason: {doc['reason']}")
    elif kind == "orbit":
        lines = [
            f"dims: {' '.join(map(str, doc['dims']))}",
            f"mode: {doc['mode']}",
            f"orbit_size: {doc['orbit_size']}",
            f"eccentricity: {doc['eccentricity']}",
            f"complete: {str(doc['complete']).lower()}",
            "histogram:",
        ]
        lines += [f"  {d} {c}" for d, c in doc["histogram"]]
    elif kind == "theorem-check":
        lines = []
        for r in doc["rows"]:
            size = "-" if r["orbit_size"] is None else r["orbit_size"]
            lines.append(f"{r['status']} {r['dims'][0]}x{r['dims'][1]} {r['verdict']} orbit={size} expected={r['expected']}")
        lines.append(f"overall: {doc['status']}")
    elif kind == "instance":
        return doc["instance"].rstrip("\n").split("\n")
    else:
        lines = [f"{k}: {v}" for k, v in doc.items() if v is not None]
    if doc.get("elapsed_ms") is not None:
        lines.append(f"elapsed_ms: {doc['elapsed_ms']}")
    return lines


def emit_result(result: Any, fmt: str = "text", *, deterministic: bool = False, **extra: Any) -> str:
    """Render a solver or analysis result as text or as a machine (JSON) document."""
    doc = result if isinstance(result, dict) else document_for(result, deterministic=deterministic, **extra)
    if fmt == "machine":
        return dumps(doc)
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    return "\n".join(_text_lines(doc)) + "\n"
