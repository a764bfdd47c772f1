"""Parsers and formatters for the on-disk formats.

Matrix file: first line the size n, then n lines of n space-separated 0/1
entries.  Witness file: a "source" section and a "target" section, each an
inline matrix, followed by "stage coder" / "stage table" sections whose
lines are "<in> <out>" word pairs ("-" is the empty word).  The inverse
chain is always derived, never read.
"""

from __future__ import annotations

from .errors import ParseError, StageMismatch
from .full_group import validate_table
from .orbit_equiv import CoderStage, CoeWitness, Stage, TableStage, validate_witness
from .sft_core import SftSpec, format_word, parse_word, validate_matrix

# word-pair and function formats re-exported for the CLI
from .full_group import format_table_text, parse_table_text  # noqa: F401
from .step_functions import format_function_text, parse_function_text  # noqa: F401


def parse_matrix_text(text: str) -> SftSpec:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("matrix file is empty")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise ParseError("first line must be the matrix size") from exc
    if len(lines) != n + 1:
        raise ParseError(f"expected {n} matrix rows, found {len(lines) - 1}")
    grid = []
    for ln in lines[1:]:
        try:
            row = [int(p) for p in ln.split()]
        except ValueError as exc:
            raise ParseError(f"malformed matrix row {ln!r}") from exc
        if len(row) != n:
            raise ParseError(f"row {ln!r} does not have {n} entries")
        grid.append(row)
    return validate_matrix(grid)


def format_matrix_text(spec: SftSpec) -> str:
    lines = [str(spec.n)]
    for row in spec.a:
        lines.append(" ".join(str(e) for e in row))
    return "\n".join(lines) + "\n"


def _read_matrix_block(lines: list[str], pos: int) -> tuple[SftSpec, int]:
    try:
        n = int(lines[pos])
    except (IndexError, ValueError) as exc:
        raise ParseError("expected a matrix size line") from exc
    block = lines[pos: pos + n + 1]
    if len(block) != n + 1:
        raise ParseError("matrix block is truncated")
    return parse_matrix_text("\n".join(block)), pos + n + 1


def parse_witness_text(text: str) -> CoeWitness:
    """Parse a witness file.

    The file grammar cannot carry matrices for spaces strictly between two
    coder stages, so at most one coder stage is accepted here; the library
    API itself has no such limit.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "source":
        raise ParseError("witness file must start with a 'source' section")
    source, pos = _read_matrix_block(lines, 1)
    if pos >= len(lines) or lines[pos] != "target":
        raise ParseError("witness file must continue with a 'target' section")
    target, pos = _read_matrix_block(lines, pos + 1)

    sections: list[tuple[str, list[str]]] = []
    while pos < len(lines):
        header = lines[pos]
        if header not in ("stage coder", "stage table"):
            raise ParseError(f"unexpected line {header!r}")
        pos += 1
        body: list[str] = []
        while pos < len(lines) and lines[pos] not in ("stage coder", "stage table"):
            body.append(lines[pos])
            pos += 1
        sections.append((header, body))

    coder_count = sum(1 for kind, _ in sections if kind == "stage coder")
    if coder_count > 1:
        raise StageMismatch("witness files support at most one coder stage")
    if coder_count == 0 and source != target:
        raise StageMismatch("all-table witness files need source = target")

    stages: list[Stage] = []
    current = source
    for kind, body in sections:
        if kind == "stage table":
            pairs = _word_pairs(body, current, current)
            stages.append(TableStage(table=validate_table(current, pairs)))
        else:
            pairs = _word_pairs(body, current, target)
            stages.append(CoderStage(source=current, target=target,
                                     pairs=tuple(pairs)))
            current = target
    return validate_witness(source, target, stages)


def _word_pairs(body: list[str], left: SftSpec, right: SftSpec):
    pairs = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"malformed stage line {ln!r}")
        pairs.append((parse_word(parts[0], left), parse_word(parts[1], right)))
    if not pairs:
        raise ParseError("empty stage section")
    return pairs


def format_witness_text(h: CoeWitness) -> str:
    out = ["source", format_matrix_text(h.source).rstrip("\n"),
           "target", format_matrix_text(h.target).rstrip("\n")]
    for stage in h.chain:
        if isinstance(stage, TableStage):
            out.append("stage table")
            n = stage.table.spec.n
            for s, d in stage.table.pairs:
                out.append(f"{format_word(s, n)} {format_word(d, n)}")
        else:
            out.append("stage coder")
            for i, o in stage.pairs:
                out.append(f"{format_word(i, stage.source.n)} "
                           f"{format_word(o, stage.target.n)}")
    return "\n".join(out) + "\n"
