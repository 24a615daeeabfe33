"""Normaliz ``.in`` files: emission for external cross-checks and a minimal reader.

Rows are written in the (d, m) frame, where both generators and inequalities
are plain integer vectors and ``w . x >= 0`` is the ordinary dot product, which
is what Normaliz expects.  Only the ``inequalities`` and ``cone`` blocks are
supported; Normaliz output files are deliberately not parsed.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .catalog import get_recipe, get_variety
from .exactcone import IntVector
from .pipeline import assemble_inequalities, cone_method_stages

BLOCK_KINDS = ("inequalities", "cone")
STAGES = {"ineqs": "inequalities", "gens": "cone"}


class NormalizFormatError(ValueError):
    pass


@dataclass(frozen=True)
class NormalizInput:
    amb_space: int
    kind: str
    rows: tuple[IntVector, ...]

    def __post_init__(self) -> None:
        if self.amb_space < 1:
            raise NormalizFormatError("amb_space must be positive")
        if self.kind not in BLOCK_KINDS:
            raise NormalizFormatError(f"unsupported block {self.kind!r}")
        for r in self.rows:
            if len(r) != self.amb_space:
                raise NormalizFormatError(f"row {list(r)} has length {len(r)}, expected {self.amb_space}")


def format_normaliz(data: NormalizInput) -> str:
    lines = [f"amb_space {data.amb_space}", f"{data.kind} {len(data.rows)}"]
    lines += [" ".join(str(x) for x in r) for r in data.rows]
    return "\n".join(lines) + "\n"


def parse_normaliz(text: str) -> NormalizInput:
    """Read the subset of the format written by :func:`format_normaliz`.

    Whitespace (including line breaks inside rows) is not significant.
    """
    tokens = text.split()
    try:
        if tokens[0] != "amb_space":
            raise NormalizFormatError("file must start with 'amb_space <d>'")
        dim = int(tokens[1])
        kind = tokens[2]
        if kind not in BLOCK_KINDS:
            raise NormalizFormatError(f"unsupported block {kind!r}")
        count = int(tokens[3])
        values = [int(t) for t in tokens[4:]]
    except IndexError:
        raise NormalizFormatError("truncated header") from None
    except ValueError as exc:
        if isinstance(exc, NormalizFormatError):
            raise
        raise NormalizFormatError(f"non-integer entry: {exc}") from None
    if len(values) != dim * count:
        raise NormalizFormatError(f"expected {count} rows of length {dim}, found {len(values)} entries")
    rows = tuple(tuple(values[i * dim:(i + 1) * dim]) for i in range(count))
    return NormalizInput(dim, kind, rows)


def read_normaliz(path: str | Path) -> NormalizInput:
    return parse_normaliz(Path(path).read_text(encoding="utf-8"))


def normaliz_input(variety: str, stage: str) -> NormalizInput:
    """``ineqs``: the assembled inequalities; ``gens``: intermediate rays plus fixed classes."""
    if stage not in STAGES:
        raise ValueError(f"stage must be one of {sorted(STAGES)}, got {stage!r}")
    spec = get_variety(variety)
    recipe = get_recipe(spec.id)
    if stage == "ineqs":
        rows = assemble_inequalities(recipe)
    else:
        st = cone_method_stages(recipe)
        rows = sorted(set(st.intermediate.rays) | set(st.fixed))
    return NormalizInput(spec.lattice.rank, STAGES[stage], tuple(rows))


def emit_normaliz(variety: str, stage: str, out_dir: str | Path) -> Path:
    data = normaliz_input(variety, stage)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{get_variety(variety).id}-{stage}.in"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_normaliz(data))
    return path
