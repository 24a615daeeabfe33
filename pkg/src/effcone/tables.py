"""Line-oriented orbit-table format.

A table file looks like::

    variety X124
    kind generators
    symmetry 3-6
    0 0 -1 0 0 0
    1 0 -1 0 0 0
    ...

``symmetry lo-hi`` gives the 1-based inclusive range of positions that may be
permuted (the exceptional block); a trailing ``hswap`` also allows swapping
the first two coordinates.  Blank lines and ``#`` comments are ignored.
Rows are stored exactly as printed: generators as class coefficients and
inequalities as ``(alpha_1, alpha_2, beta_1, ...)`` meaning
``alpha . d >= beta . m``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .exactcone import IntVector, primitive

KINDS = ("generators", "inequalities")
_SYMMETRY = re.compile(r"^(\d+)-(\d+)$")


class TableFormatError(ValueError):
    """A table file violates the schema."""


@dataclass(frozen=True)
class OrbitRow:
    row: IntVector
    permutable: tuple[int, int]  # 0-based half-open range of the E-block
    h_swap: bool = False

    def __post_init__(self) -> None:
        lo, hi = self.permutable
        if not (0 < lo <= hi <= len(self.row)):
            raise TableFormatError(f"permutable range {self.permutable} invalid for {self.row}")
        if self.h_swap and lo < 2:
            raise TableFormatError("h_swap needs two degree coordinates outside the E-block")


def expand_orbit(orbit: OrbitRow) -> list[IntVector]:
    """All distinct images of the row under the symmetry, sorted."""
    lo, hi = orbit.permutable
    row = orbit.row
    out = set()
    for perm in set(itertools.permutations(row[lo:hi])):
        v = row[:lo] + perm + row[hi:]
        out.add(v)
        if orbit.h_swap:
            out.add((v[1], v[0]) + v[2:])
    return sorted(out)


@dataclass(frozen=True)
class ReferenceTable:
    variety: str
    kind: str
    rows: tuple[OrbitRow, ...]

    @property
    def width(self) -> int:
        return len(self.rows[0].row) if self.rows else 0

    def expanded(self) -> list[IntVector]:
        out = set()
        for r in self.rows:
            out.update(primitive(v) for v in expand_orbit(r))
        return sorted(out)


def parse_table(text: str, source: str = "<string>") -> ReferenceTable:
    header: dict[str, list[str]] = {}
    rows: list[tuple[int, IntVector]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] in ("variety", "kind", "symmetry"):
            if rows:
                raise TableFormatError(f"{source}:{lineno}: header line after rows")
            if fields[0] in header:
                raise TableFormatError(f"{source}:{lineno}: repeated {fields[0]!r} header")
            header[fields[0]] = fields[1:]
            continue
        try:
            rows.append((lineno, tuple(int(x) for x in fields)))
        except ValueError:
            raise TableFormatError(f"{source}:{lineno}: non-integer entry in {line!r}") from None

    for key in ("variety", "kind", "symmetry"):
        if key not in header:
            raise TableFormatError(f"{source}: missing {key!r} header")
    if len(header["variety"]) != 1:
        raise TableFormatError(f"{source}: variety header takes one id")
    variety = header["variety"][0]
    if len(header["kind"]) != 1 or header["kind"][0] not in KINDS:
        raise TableFormatError(f"{source}: kind must be one of {KINDS}, got {header['kind']}")
    kind = header["kind"][0]
    sym = header["symmetry"]
    m = _SYMMETRY.match(sym[0]) if sym else None
    if m is None or len(sym) > 2 or (len(sym) == 2 and sym[1] != "hswap"):
        raise TableFormatError(f"{source}: unknown symmetry spec {' '.join(sym)!r}")
    lo, hi = int(m.group(1)) - 1, int(m.group(2))
    h_swap = len(sym) == 2
    if not rows:
        raise TableFormatError(f"{source}: no rows")

    width = len(rows[0][1])
    if not (0 < lo <= hi <= width):
        raise TableFormatError(f"{source}: symmetry range {sym[0]} does not fit rows of length {width}")
    orbit_rows = []
    seen: dict[frozenset, int] = {}
    for lineno, r in rows:
        if len(r) != width:
            raise TableFormatError(f"{source}:{lineno}: expected {width} entries, got {len(r)}")
        if not any(r):
            raise TableFormatError(f"{source}:{lineno}: zero row")
        orbit = OrbitRow(r, (lo, hi), h_swap)
        key = frozenset(primitive(v) for v in expand_orbit(orbit))
        if key in seen:
            raise TableFormatError(f"{source}:{lineno}: duplicate of the orbit on line {seen[key]}")
        seen[key] = lineno
        orbit_rows.append(orbit)
    return ReferenceTable(variety, kind, tuple(orbit_rows))


def load_tables(path: str | Path) -> dict[tuple[str, str], ReferenceTable]:
    """Parse every ``*.tbl`` file under ``path`` (or a single file)."""
    p = Path(path)
    files: Iterable[Path] = sorted(p.glob("*.tbl")) if p.is_dir() else [p]
    out: dict[tuple[str, str], ReferenceTable] = {}
    origin: dict[tuple[str, str], str] = {}
    for f in files:
        table = parse_table(f.read_text(encoding="utf-8"), str(f))
        key = (table.variety, table.kind)
        if key in out:
            raise TableFormatError(f"{f}: duplicate table {key}, first seen in {origin[key]}")
        out[key] = table
        origin[key] = str(f)
    return out


def format_table(table: ReferenceTable) -> str:
    """Inverse of :func:`parse_table` (canonical spacing)."""
    first = table.rows[0]
    lo, hi = first.permutable
    sym = f"{lo + 1}-{hi}" + (" hswap" if first.h_swap else "")
    lines = [f"variety {table.variety}", f"kind {table.kind}", f"symmetry {sym}"]
    lines += [" ".join(str(x) for x in r.row) for r in table.rows]
    return "\n".join(lines) + "\n"
