"""Result-log text format, scoring, and final-frame image output.

The log layout is rigid: a version line, scalar header fields, four integer
sequences each followed by mean/var, a relation line, the elapsed clock and
the kilobytes summary. write_log and parse_log round-trip records exactly;
the parser additionally tolerates arbitrary whitespace and line wrapping
inside the value lists.
"""

from __future__ import annotations

import dataclasses
import re
import statistics
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
from PIL import Image

from brainb.engine import EventLedger

VERSION_LINE = "NEMESPOR BrainB Test 6.0.3-reimpl"
# Logs written by the original tool carry this version; the parser takes both.
LEGACY_VERSION_LINE = "NEMESPOR BrainB Test 6.0.3"

_FIELD_WIDTH = 10
_WRAP_WIDTH = 54


class Relation(Enum):
    LESS = "<"
    NOT_LESS = ">="


class LogParseError(ValueError):
    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True, slots=True)
class LogRecord:
    """One finished measurement, exactly as the log file states it.

    Means are integers, var/kilobytes carry the displayed (6 significant
    digit) values, so a parsed record equals the record it was written from.
    warnings collects parse-time consistency complaints and never takes part
    in equality.
    """

    version: str
    time_ticks: int
    bps_final: int
    noc: int
    nop: int
    lost: tuple[int, ...]
    found: tuple[int, ...]
    lost2found: tuple[int, ...]
    found2lost: tuple[int, ...]
    mean_lost: int
    mean_found: int
    mean_l2f: int
    mean_f2l: int
    disp_lost: float
    disp_found: float
    disp_l2f: float
    disp_f2l: float
    relation: Relation
    time_string: str
    kilobytes: float
    warnings: tuple[str, ...] = field(default=(), compare=False)


def integer_mean(seq: tuple[int, ...] | list[int]) -> int:
    """Arithmetic mean truncated toward zero; 0 for an empty sequence."""
    n = len(seq)
    if n == 0:
        return 0
    total = sum(seq)
    q = abs(total) // n
    return q if total >= 0 else -q


def dispersion(seq: tuple[int, ...] | list[int]) -> float:
    """Sample standard deviation (n - 1 denominator); 0.0 below two values."""
    if len(seq) < 2:
        return 0.0
    return float(statistics.stdev(seq))


def final_kilobytes(l2f: tuple[int, ...] | list[int], f2l: tuple[int, ...] | list[int]) -> float:
    m1 = integer_mean(l2f)
    m2 = integer_mean(f2l)
    return ((float(m1) + float(m2)) / 2.0) / 8.0 / 1024.0


def clock_string(ticks: int, ticks_per_second: int) -> str:
    """Elapsed clock as minutes:seconds with no zero padding ("10:0")."""
    total_s = ticks // ticks_per_second
    return f"{total_s // 60}:{total_s % 60}"


def _display(value: float) -> float:
    return float(f"{value:.6g}")


def build_record(
    ledger: EventLedger,
    *,
    time_ticks: int,
    bps_final: int,
    noc: int,
    nop: int,
    ticks_per_second: int,
    version: str = VERSION_LINE,
) -> LogRecord:
    """Assemble a consistent record from a finished session's ledger."""
    l2f = tuple(ledger.lost2found)
    f2l = tuple(ledger.found2lost)
    mean_l2f = integer_mean(l2f)
    mean_f2l = integer_mean(f2l)
    return LogRecord(
        version=version,
        time_ticks=time_ticks,
        bps_final=bps_final,
        noc=noc,
        nop=nop,
        lost=tuple(ledger.lost),
        found=tuple(ledger.found),
        lost2found=l2f,
        found2lost=f2l,
        mean_lost=integer_mean(ledger.lost),
        mean_found=integer_mean(ledger.found),
        mean_l2f=mean_l2f,
        mean_f2l=mean_f2l,
        disp_lost=_display(dispersion(ledger.lost)),
        disp_found=_display(dispersion(ledger.found)),
        disp_l2f=_display(dispersion(l2f)),
        disp_f2l=_display(dispersion(f2l)),
        relation=Relation.LESS if mean_l2f < mean_f2l else Relation.NOT_LESS,
        time_string=clock_string(time_ticks, ticks_per_second),
        kilobytes=_display(final_kilobytes(l2f, f2l)),
    )


def record_problems(record: LogRecord) -> list[str]:
    """Internal-consistency complaints; empty for a well-formed record."""
    problems: list[str] = []
    for name, seq, mean, disp in (
        ("lost", record.lost, record.mean_lost, record.disp_lost),
        ("found", record.found, record.mean_found, record.disp_found),
        ("lost2found", record.lost2found, record.mean_l2f, record.disp_l2f),
        ("found2lost", record.found2lost, record.mean_f2l, record.disp_f2l),
    ):
        want_mean = integer_mean(seq)
        if mean != want_mean:
            problems.append(f"mean({name}) is {mean}, sequence gives {want_mean}")
        want_disp = f"{dispersion(seq):.6g}"
        if f"{disp:.6g}" != want_disp:
            problems.append(f"var({name}) is {disp:.6g}, sequence gives {want_disp}")
    want_rel = Relation.LESS if record.mean_l2f < record.mean_f2l else Relation.NOT_LESS
    if record.relation is not want_rel:
        problems.append("relation line contradicts the means")
    want_kb = f"{final_kilobytes(record.lost2found, record.found2lost):.6g}"
    if f"{record.kilobytes:.6g}" != want_kb:
        problems.append(f"kilobytes is {record.kilobytes:.6g}, means give {want_kb}")
    return problems


def _scalar_line(name: str, value: object) -> str:
    return f"{name:<{_FIELD_WIDTH}}: {value}"


def _wrap_values(first_prefix: str, values: tuple[int, ...]) -> list[str]:
    """Greedy wrap: a line never grows past _WRAP_WIDTH columns (counting a
    separator after each value), continuation lines start flush left."""
    lines = [first_prefix]
    width = len(first_prefix)
    for v in values:
        token = str(v)
        if width + len(token) + 1 > _WRAP_WIDTH and width > 0:
            lines[-1] = lines[-1].rstrip()
            lines.append("")
            width = 0
        lines[-1] += token + " "
        width += len(token) + 1
    lines[-1] = lines[-1].rstrip()
    return lines


def _sequence_block(name: str, values: tuple[int, ...], inline: bool) -> list[str]:
    prefix = f"{name:<{_FIELD_WIDTH}}: "
    if inline:
        return _wrap_values(prefix, values)
    return [prefix.rstrip()] + (_wrap_values("", values) if values else [])


def write_log(record: LogRecord) -> str:
    problems = record_problems(record)
    if problems:
        raise ValueError("inconsistent record: " + "; ".join(problems))
    lines: list[str] = [record.version]
    lines.append(_scalar_line("time", record.time_ticks))
    lines.append(_scalar_line("bps", record.bps_final))
    lines.append(_scalar_line("noc", record.noc))
    lines.append(_scalar_line("nop", record.nop))
    for name, seq, mean, disp, inline in (
        ("lost", record.lost, record.mean_lost, record.disp_lost, False),
        ("found", record.found, record.mean_found, record.disp_found, False),
        ("lost2found", record.lost2found, record.mean_l2f, record.disp_l2f, True),
        ("found2lost", record.found2lost, record.mean_f2l, record.disp_f2l, True),
    ):
        lines.extend(_sequence_block(name, seq, inline))
        lines.append(_scalar_line("mean", mean))
        lines.append(_scalar_line("var", f"{disp:.6g}"))
    lines.append(f"mean(lost2found) {record.relation.value} mean(found2lost)")
    lines.append(_scalar_line("time", record.time_string))
    lines.append(f"U R about {record.kilobytes:.6g} Kilobytes")
    return "\n".join(lines) + "\n"


_SCALAR_RE = re.compile(r"^\s*([A-Za-z][A-Za-z0-9]*)\s*:\s?(.*)$")
_VALUES_RE = re.compile(r"^\s*\d[\d\s]*$")
_RELATION_RE = re.compile(r"^mean\(lost2found\)\s*(<|>=)\s*mean\(found2lost\)\s*$")
_FINAL_RE = re.compile(r"^U R about\s+(\S+)\s+Kilobytes\s*$")
_TIME_RE = re.compile(r"^(\d+):(\d{1,2})$")


class _Cursor:
    """Line cursor over the log text; line_no is 1-based for messages."""

    def __init__(self, text: str) -> None:
        self.lines = text.splitlines()
        self.pos = 0

    @property
    def line_no(self) -> int:
        return self.pos + 1

    def peek(self) -> str | None:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def take(self, what: str) -> str:
        line = self.peek()
        if line is None:
            raise LogParseError(self.line_no, f"file ends before {what}")
        self.pos += 1
        return line


def _parse_int(text: str, line_no: int, what: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise LogParseError(line_no, f"{what} is not an integer: {text.strip()!r}") from None


def _parse_float(text: str, line_no: int, what: str) -> float:
    try:
        return float(text.strip())
    except ValueError:
        raise LogParseError(line_no, f"{what} is not a number: {text.strip()!r}") from None


def _take_field(cur: _Cursor, name: str) -> tuple[str, int]:
    line_no = cur.line_no
    line = cur.take(f"field {name!r}")
    m = _SCALAR_RE.match(line)
    if not m or m.group(1) != name:
        raise LogParseError(line_no, f"expected field {name!r}, got {line.strip()!r}")
    return m.group(2), line_no


def _take_sequence(cur: _Cursor, name: str) -> tuple[int, ...]:
    rest, line_no = _take_field(cur, name)
    values: list[int] = []

    def eat(chunk: str, at: int) -> None:
        for tok in chunk.split():
            values.append(_parse_int(tok, at, f"{name} value"))

    if rest.strip():
        eat(rest, line_no)
    while True:
        line = cur.peek()
        if line is None or not _VALUES_RE.match(line):
            break
        at = cur.line_no
        eat(cur.take("values"), at)
    return tuple(values)


def parse_log(text: str) -> LogRecord:
    """Parse one log file; raises LogParseError with the offending line.

    Printed means, vars, relation and kilobytes are kept as stated; values
    that disagree with the sequences are reported in record.warnings rather
    than corrected.
    """
    cur = _Cursor(text)
    version = cur.take("version line").strip()
    if version not in (VERSION_LINE, LEGACY_VERSION_LINE):
        raise LogParseError(1, f"unknown version line: {version!r}")

    rest, at = _take_field(cur, "time")
    time_ticks = _parse_int(rest, at, "time")
    rest, at = _take_field(cur, "bps")
    bps_final = _parse_int(rest, at, "bps")
    rest, at = _take_field(cur, "noc")
    noc = _parse_int(rest, at, "noc")
    rest, at = _take_field(cur, "nop")
    nop = _parse_int(rest, at, "nop")

    seqs: dict[str, tuple[int, ...]] = {}
    means: dict[str, int] = {}
    disps: dict[str, float] = {}
    for name in ("lost", "found", "lost2found", "found2lost"):
        seqs[name] = _take_sequence(cur, name)
        rest, at = _take_field(cur, "mean")
        means[name] = _parse_int(rest, at, f"mean({name})")
        rest, at = _take_field(cur, "var")
        disps[name] = _parse_float(rest, at, f"var({name})")

    line_no = cur.line_no
    line = cur.take("relation line")
    m = _RELATION_RE.match(line.strip())
    if not m:
        raise LogParseError(line_no, f"expected relation line, got {line.strip()!r}")
    relation = Relation.LESS if m.group(1) == "<" else Relation.NOT_LESS

    rest, at = _take_field(cur, "time")
    time_string = rest.strip()
    if not _TIME_RE.match(time_string):
        raise LogParseError(at, f"bad clock value: {time_string!r}")

    line_no = cur.line_no
    line = cur.take("final line")
    m = _FINAL_RE.match(line.strip())
    if not m:
        raise LogParseError(line_no, f"expected final kilobytes line, got {line.strip()!r}")
    kilobytes = _parse_float(m.group(1), line_no, "kilobytes")

    record = LogRecord(
        version=version,
        time_ticks=time_ticks,
        bps_final=bps_final,
        noc=noc,
        nop=nop,
        lost=seqs["lost"],
        found=seqs["found"],
        lost2found=seqs["lost2found"],
        found2lost=seqs["found2lost"],
        mean_lost=means["lost"],
        mean_found=means["found"],
        mean_l2f=means["lost2found"],
        mean_f2l=means["found2lost"],
        disp_lost=disps["lost"],
        disp_found=disps["found"],
        disp_l2f=disps["lost2found"],
        disp_f2l=disps["found2lost"],
        relation=relation,
        time_string=time_string,
        kilobytes=kilobytes,
        warnings=(),
    )
    problems = record_problems(record)
    if problems:
        return dataclasses.replace(record, warnings=tuple(problems))
    return record


def write_log_file(record: LogRecord, path: str | Path) -> None:
    Path(path).write_text(write_log(record), encoding="utf-8")


def parse_log_file(path: str | Path) -> LogRecord:
    return parse_log(Path(path).read_text(encoding="utf-8"))


def write_final_frame(bitmap, palette: tuple[tuple[int, int, int], ...], path: str | Path) -> None:
    """Save a palette bitmap as an indexed PNG."""
    data: np.ndarray = bitmap.data
    top = int(data.max()) if data.size else 0
    if top >= len(palette):
        raise ValueError(f"palette index {top} outside palette of {len(palette)}")
    img = Image.fromarray(data, mode="P")
    flat: list[int] = []
    for rgb in palette:
        flat.extend(rgb)
    img.putpalette(flat)
    img.save(Path(path), format="PNG")
