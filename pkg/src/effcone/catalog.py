"""Catalogue of varieties, their published tables and their cone-method recipes.

Table rows are stored as printed (see :mod:`effcone.tables`); :func:`get_table`
converts them once into the (d, m) frame used everywhere else.  In that frame
a generator ``a_1 H_1 + a_2 H_2 + sum b_i E_i`` becomes ``(a_1, a_2, -b_1, ...)``
and a printed inequality row ``(alpha, beta)`` becomes ``(alpha, -beta)``, so
that effectivity reads ``w . x >= 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable

from .exactcone import IntVector, primitive
from .lattice import AmbientLattice, p1p2_line_blowup, p3_line_blowup, product_blowup
from .tables import OrbitRow, ReferenceTable, expand_orbit, load_tables
from .transfer import (
    LinearMap,
    SmallModification,
    forget_line,
    forget_point,
    include_point,
    restriction_to_M,
    restriction_X13_to_V,
    restriction_Y_to_Q,
    restriction_Z_to_S,
)

__all__ = [
    "OrbitRow",
    "ReferenceTable",
    "PipelineRecipe",
    "RuleInput",
    "TableInput",
    "UnknownVariety",
    "VARIETIES",
    "VarietySpec",
    "AUXILIARY_TABLES",
    "expand_orbit",
    "get_recipe",
    "get_table",
    "get_variety",
    "reference_tables",
]


class UnknownVariety(KeyError):
    pass


class NoRecipe(ValueError):
    """The variety is a base case of the method."""


@dataclass(frozen=True)
class TableInput:
    """Inequalities of a catalogued table, pulled back along ``chain``.

    ``chain`` maps classes of the recipe's variety to the table's variety;
    maps are given as factories so that the catalogue stays cheap to import.
    """

    table: str
    chain: tuple[Callable[[], LinearMap], ...] = ()
    label: str = ""


@dataclass(frozen=True)
class RuleInput:
    """Effectivity inequalities of a base-locus rule stated on ``lattice``, pulled back along ``chain``."""

    rule: str
    lattice: Callable[[], AmbientLattice] | None = None
    chain: tuple[Callable[[], LinearMap], ...] = ()


@dataclass(frozen=True)
class PipelineRecipe:
    variety: str
    pullback_sources: tuple[str, ...] = ()
    base_locus_rules: tuple[RuleInput, ...] = ()
    restriction_sources: tuple[TableInput, ...] = ()
    fixed_rules: tuple[str, ...] = ()
    extra_fixed: tuple[tuple[str, IntVector], ...] = ()

    @property
    def dependencies(self) -> tuple[str, ...]:
        deps = list(self.pullback_sources) + [t.table for t in self.restriction_sources]
        return tuple(dict.fromkeys(deps))


@dataclass(frozen=True)
class VarietySpec:
    id: str
    title: str
    lattice: AmbientLattice
    fixed_families: tuple[str, ...]
    recipe: PipelineRecipe | None = None
    restriction_maps: tuple[str, ...] = field(default=())


def _x12(s: int) -> AmbientLattice:
    return product_blowup(1, 2, s)


def _x13(s: int) -> AmbientLattice:
    return product_blowup(1, 3, s)


_X12_RULES = ("E", "H1-E", "H2-EE")
_X13_RULES = ("E", "H1-E", "PiX13")
_Y_RULES = ("E", "EL", "PiY", "PiLY")


def _x12_recipe(s: int) -> PipelineRecipe:
    rules = _X12_RULES + (("S11", "S02", "S14") if s == 6 else ())
    restr = ()
    if s == 6:
        restr = (TableInput("X116", (restriction_to_M,), "restriction to M"),)
    return PipelineRecipe(
        f"X12{s}",
        pullback_sources=(f"X12{s - 1}",),
        base_locus_rules=tuple(RuleInput(r) for r in rules),
        restriction_sources=restr,
        fixed_rules=rules,
    )


def _x13_recipe(s: int) -> PipelineRecipe:
    return PipelineRecipe(
        f"X13{s}",
        pullback_sources=(f"X13{s - 1}",),
        base_locus_rules=tuple(RuleInput(r) for r in _X13_RULES),
        restriction_sources=(TableInput(f"YL{s}", (lambda s=s: restriction_X13_to_V(s),), "restriction to V"),),
        fixed_rules=_X13_RULES,
    )


def _yl5_recipe() -> PipelineRecipe:
    y5 = p3_line_blowup(5)
    return PipelineRecipe(
        "YL5",
        base_locus_rules=tuple(RuleInput(r) for r in _Y_RULES),
        restriction_sources=(
            TableInput("X035", (lambda: forget_line(y5),), "blowdown of E_L"),
            TableInput(
                "X115",
                (
                    lambda: include_point(y5, 1),
                    lambda: SmallModification(5).push_map(),
                    lambda: restriction_Z_to_S(5),
                ),
                "restriction to S through phi",
            ),
        ),
        fixed_rules=_Y_RULES,
    )


def _yl6_recipe() -> PipelineRecipe:
    y6 = p3_line_blowup(6)
    z5 = p1p2_line_blowup(5)
    phi = lambda: SmallModification(5).push_map()  # noqa: E731
    rules = _Y_RULES + ("FY",)
    # 2H - E_L - sum E_i: the quadric Q~ restricted to in the last input.
    q_class = (2, 1) + (1,) * 6
    return PipelineRecipe(
        "YL6",
        pullback_sources=("YL5",),
        base_locus_rules=tuple(RuleInput(r) for r in rules)
        + (RuleInput("GZ", lambda: z5, (phi,)),),
        restriction_sources=(
            TableInput("X125", (phi, lambda: forget_line(z5)), "Z_{L,5} blowdown through phi"),
            TableInput("X116", (lambda: restriction_Y_to_Q(6),), "restriction to Q"),
            TableInput("X036", (lambda: forget_line(y6),), "blowdown of E_L"),
        ),
        fixed_rules=rules,
        extra_fixed=(("Q", q_class),),
    )


def _spec(id_: str, title: str, lat: AmbientLattice, rules: tuple[str, ...],
          recipe: PipelineRecipe | None = None, maps: tuple[str, ...] = ()) -> VarietySpec:
    return VarietySpec(id_, title, lat, rules, recipe, maps)


VARIETIES: dict[str, VarietySpec] = {
    v.id: v
    for v in [
        _spec("X115", "X_{1,1,5}", product_blowup(1, 1, 5), ("E", "H1-E")),
        _spec("X116", "X_{1,1,6}", product_blowup(1, 1, 6), ("E", "H1-E")),
        _spec("X121", "X_{1,2,1}", _x12(1), ("E", "H1-E")),
        _spec("X122", "X_{1,2,2}", _x12(2), _X12_RULES),
        _spec("X123", "X_{1,2,3}", _x12(3), _X12_RULES, _x12_recipe(3)),
        _spec("X124", "X_{1,2,4}", _x12(4), _X12_RULES, _x12_recipe(4)),
        _spec("X125", "X_{1,2,5}", _x12(5), _X12_RULES + ("S11", "S02"), _x12_recipe(5)),
        _spec("X126", "X_{1,2,6}", _x12(6), _X12_RULES + ("S11", "S02", "S14"), _x12_recipe(6), ("M_h1",)),
        _spec("X035", "X_{0,3,5}", product_blowup(0, 3, 5), ("E",)),
        _spec("X036", "X_{0,3,6}", product_blowup(0, 3, 6), ("E",)),
        _spec("YL5", "Y_{L,5}", p3_line_blowup(5), _Y_RULES, _yl5_recipe(), ("S_5", "phi_push_5")),
        _spec("YL6", "Y_{L,6}", p3_line_blowup(6), _Y_RULES + ("FY",), _yl6_recipe(), ("Q_6", "phi_push_5")),
        _spec("ZL4", "Z_{L,4}", p1p2_line_blowup(4), ("E", "EL", "GZ")),
        _spec("X134", "X_{1,3,4}", _x13(4), _X13_RULES),
        _spec("X135", "X_{1,3,5}", _x13(5), _X13_RULES, _x13_recipe(5), ("V_5",)),
        _spec("X136", "X_{1,3,6}", _x13(6), _X13_RULES, _x13_recipe(6), ("V_6",)),
    ]
}

# Tables printed inside proofs rather than as theorem statements.
AUXILIARY_TABLES: dict[str, str] = {
    "X123-intermediate": "X123",
    "X126-restriction-M": "X126",
}


def _normalize_id(variety: str) -> str:
    key = variety.strip()
    for known in list(VARIETIES) + list(AUXILIARY_TABLES):
        if key.lower() == known.lower():
            return known
    raise UnknownVariety(f"unknown variety {variety!r}; known: {', '.join(VARIETIES)}")


def get_variety(variety: str) -> VarietySpec:
    return VARIETIES[_normalize_id(variety)]


def lattice_of(table_id: str) -> AmbientLattice:
    tid = _normalize_id(table_id)
    return VARIETIES[AUXILIARY_TABLES.get(tid, tid)].lattice


def data_dir() -> Path:
    return Path(str(resources.files("effcone") / "data"))


@lru_cache(maxsize=1)
def reference_tables() -> dict[tuple[str, str], ReferenceTable]:
    tables = load_tables(data_dir())
    for (vid, _kind), t in tables.items():
        lat = lattice_of(vid)
        if t.width != lat.rank:
            raise ValueError(f"table {vid} has rows of length {t.width}, lattice rank is {lat.rank}")
    return tables


def get_table(variety: str, kind: str, frame: str = "dm") -> list[IntVector]:
    """Expanded, primitive, deduplicated rows; ``frame`` is ``dm`` or ``printed``."""
    vid = _normalize_id(variety)
    if kind not in ("generators", "inequalities"):
        raise ValueError(f"kind must be generators or inequalities, got {kind!r}")
    try:
        table = reference_tables()[(vid, kind)]
    except KeyError:
        raise UnknownVariety(f"no {kind} table for {vid}") from None
    rows = table.expanded()
    if frame == "printed":
        return rows
    if frame != "dm":
        raise ValueError(f"frame must be dm or printed, got {frame!r}")
    lat = lattice_of(vid)
    return sorted(primitive(lat.to_frame(r)) for r in rows)


def get_recipe(variety: str) -> PipelineRecipe:
    spec = get_variety(variety)
    if spec.recipe is None:
        raise NoRecipe(f"{spec.id} is a base case with no recipe")
    return spec.recipe


def recipe_varieties() -> list[str]:
    return [v for v, s in VARIETIES.items() if s.recipe is not None]


def point_forgetting_maps(lat: AmbientLattice) -> list[LinearMap]:
    return [forget_point(lat, i) for i in range(1, lat.s + 1)]
