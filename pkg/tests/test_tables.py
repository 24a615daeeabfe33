from __future__ import annotations

import pytest

from effcone.catalog import (
    AUXILIARY_TABLES,
    VARIETIES,
    NoRecipe,
    UnknownVariety,
    data_dir,
    get_recipe,
    get_table,
    get_variety,
    reference_tables,
)
from effcone.tables import OrbitRow, TableFormatError, expand_orbit, format_table, load_tables, parse_table

GOOD = """\
variety X122
kind generators
symmetry 3-4   # the two points
0 0 -1 0
1 0 -1 0
0 1 -1 -1
"""


def test_parse_and_expand():
    t = parse_table(GOOD)
    assert (t.variety, t.kind, t.width) == ("X122", "generators", 4)
    assert len(t.rows) == 3
    assert t.expanded() == sorted(
        [(0, 0, -1, 0), (0, 0, 0, -1), (1, 0, -1, 0), (1, 0, 0, -1), (0, 1, -1, -1)]
    )


def test_format_round_trip():
    t = parse_table(GOOD)
    assert parse_table(format_table(t)) == t


def test_hswap_expansion():
    rows = expand_orbit(OrbitRow((1, 2, 3, 4), (2, 4), True))
    assert rows == sorted({(1, 2, 3, 4), (1, 2, 4, 3), (2, 1, 3, 4), (2, 1, 4, 3)})


def test_wrong_arity_names_the_line():
    with pytest.raises(TableFormatError, match=r":7: expected 4 entries"):
        parse_table(GOOD + "1 1 1\n")


def test_duplicate_orbit_is_rejected():
    with pytest.raises(TableFormatError, match="duplicate"):
        parse_table(GOOD + "1 0 0 -1\n")


@pytest.mark.parametrize(
    "text,msg",
    [
        (GOOD.replace("symmetry 3-4", "symmetry three"), "unknown symmetry"),
        (GOOD.replace("symmetry 3-4", "symmetry 3-4 swap"), "unknown symmetry"),
        (GOOD.replace("symmetry 3-4", "symmetry 3-9"), "does not fit"),
        (GOOD.replace("kind generators", "kind rays"), "kind must be"),
        (GOOD.replace("variety X122\n", ""), "missing 'variety'"),
        (GOOD + "0 0 0 0\n", "zero row"),
        (GOOD + "1 x 0 0\n", "non-integer"),
        (GOOD + "kind inequalities\n", "header line after rows"),
        ("variety A\nkind generators\nsymmetry 1-1\n", "no rows"),
    ],
)
def test_schema_errors(text, msg):
    with pytest.raises(TableFormatError, match=msg):
        parse_table(text)


def test_duplicate_table_across_files(tmp_path):
    (tmp_path / "a.tbl").write_text(GOOD)
    (tmp_path / "b.tbl").write_text(GOOD.replace("0 1 -1 -1", "0 1 -1 0"))
    with pytest.raises(TableFormatError, match="duplicate table"):
        load_tables(tmp_path)


def test_bundled_tables_load():
    tables = reference_tables()
    main = {v for v, _ in tables if v not in AUXILIARY_TABLES}
    assert main == set(VARIETIES)
    assert all((v, k) in tables for v in VARIETIES for k in ("generators", "inequalities"))
    assert len(list(data_dir().glob("*.tbl"))) == len(tables) == 2 * len(VARIETIES) + 3


def test_auxiliary_table_sizes():
    tables = reference_tables()
    assert len(tables[("X123-intermediate", "generators")].rows) == 6
    assert len(tables[("X123-intermediate", "inequalities")].rows) == 8
    assert len(tables[("X126-restriction-M", "inequalities")].rows) == 11


def test_frames():
    printed = get_table("X122", "generators", frame="printed")
    dm = get_table("X122", "generators")
    assert (0, 1, -1, -1) in printed and (0, 1, 1, 1) in dm
    ineq = get_table("X122", "inequalities", frame="printed")
    lat = get_variety("X122").lattice
    assert sorted(lat.to_frame(r) for r in ineq) == get_table("X122", "inequalities")


def test_printed_generators_satisfy_printed_inequalities_where_exact():
    for vid in ("X115", "X116", "X123", "X124", "X125", "X135", "X136", "YL5", "YL6"):
        gens, ineqs = get_table(vid, "generators"), get_table(vid, "inequalities")
        assert all(sum(a * b for a, b in zip(w, g)) >= 0 for w in ineqs for g in gens), vid


def test_lookup_errors():
    assert get_variety("yl5").id == "YL5"
    with pytest.raises(UnknownVariety):
        get_variety("X999")
    with pytest.raises(NoRecipe):
        get_recipe("X121")
    with pytest.raises(ValueError):
        get_table("X121", "rays")
    with pytest.raises(ValueError):
        get_table("X121", "generators", frame="weird")


def test_recipe_dependencies_precede():
    order = list(VARIETIES)
    for vid, spec in VARIETIES.items():
        if spec.recipe is None:
            continue
        for dep in spec.recipe.dependencies:
            assert dep in VARIETIES
            assert dep != vid
    assert get_recipe("X126").dependencies == ("X125", "X116")
    assert order.index("YL5") < order.index("YL6")
