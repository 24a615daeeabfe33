from __future__ import annotations

import json
import subprocess
import sys

import pytest

from effcone import pipeline, report
from effcone.catalog import NoRecipe, get_variety
from effcone.cli import main
from effcone.exactcone import extreme_rays, normalize_set
from effcone.normaliz import (
    NormalizFormatError,
    NormalizInput,
    emit_normaliz,
    format_normaliz,
    normaliz_input,
    parse_normaliz,
    read_normaliz,
)


def test_format_is_canonical():
    data = NormalizInput(3, "inequalities", ((1, 0, 0), (0, -1, 2)))
    assert format_normaliz(data) == "amb_space 3\ninequalities 2\n1 0 0\n0 -1 2\n"
    assert format_normaliz(NormalizInput(2, "inequalities", ())) == "amb_space 2\ninequalities 0\n"


def test_parse_is_whitespace_tolerant():
    data = parse_normaliz("amb_space 2\n  cone   2\n1 0\n0\n 1\n")
    assert data == NormalizInput(2, "cone", ((1, 0), (0, 1)))


@pytest.mark.parametrize(
    "text",
    ["cone 1\n1 0\n", "amb_space 2\nrays 1\n1 0\n", "amb_space 2\ncone 2\n1 0\n", "amb_space 2\ncone 1\n1 x\n", "amb_space"],
)
def test_parse_errors(text):
    with pytest.raises(NormalizFormatError):
        parse_normaliz(text)


@pytest.mark.parametrize("vid", ["X123", "X126", "YL5"])
@pytest.mark.parametrize("stage", ["ineqs", "gens"])
def test_emit_round_trip(tmp_path, vid, stage):
    path = emit_normaliz(vid, stage, tmp_path)
    assert path.name == f"{vid}-{stage}.in"
    assert read_normaliz(path) == normaliz_input(vid, stage)
    assert path.read_bytes().endswith(b"\n") and b"\r" not in path.read_bytes()


def test_emitted_x123_inequalities_cut_out_the_intermediate_cone(tmp_path):
    data = read_normaliz(emit_normaliz("X123", "ineqs", tmp_path))
    lat = get_variety("X123").lattice
    rays = extreme_rays(data.rows, data.amb_space).rays
    assert len(pipeline.orbits(rays, lat)) == 6


def test_emitted_x126_generators_contain_fixed_classes(tmp_path):
    data = read_normaliz(emit_normaliz("X126", "gens", tmp_path))
    assert data.kind == "cone"
    st = pipeline.cone_method_stages(pipeline.get_recipe("X126"))
    assert set(st.fixed) <= set(data.rows)


def test_emit_without_recipe_fails(tmp_path):
    with pytest.raises(NoRecipe):
        emit_normaliz("X121", "ineqs", tmp_path)


def test_json_report_is_deterministic():
    r1, r2 = pipeline.verify("X124"), pipeline.verify("X124")
    a = report.dumps(report.verification_payload([r1]))
    b = report.dumps(report.verification_payload([r2]))
    assert a == b
    assert "timing_s" not in a
    assert "timing_s" in report.dumps(report.verification_payload([r1], timing=True))


def test_json_report_content():
    payload = json.loads(report.dumps(report.verification_payload([pipeline.verify("X121")])))
    (r,) = payload["reports"]
    assert r["status"] == "discrepancy" and r["known"]
    assert r["discrepancies"][0]["computed_only_orbits"] == [[0, 1, -1]]
    assert r["generators"] == sorted(r["generators"])


def test_cli_verify_single(capsys):
    assert main(["verify", "--variety", "X123"]) == 0
    assert "exact" in capsys.readouterr().out
    assert main(["verify", "--variety", "X121"]) == 1
    assert main(["verify", "--variety", "X121", "--allow-known"]) == 0


def test_cli_verify_json(capsys):
    assert main(["verify", "--variety", "X122", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["reports"][0]["variety"] == "X122"


def test_cli_fano(capsys):
    assert main(["fano", "--weak", "--s", "6"]) == 0
    assert capsys.readouterr().out.strip() == "(-K)^3 = 6; weak Fano"
    assert main(["fano", "--weak", "--s", "7"]) == 0
    assert "not weak Fano" in capsys.readouterr().out
    assert main(["fano", "--log-fano", "X135", "--eps", "1/10"]) == 0
    assert "4/5, 2/5" in capsys.readouterr().out
    assert main(["fano", "--log-fano", "X136", "--eps", "1/12", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["discrepancies"]["G"] == "0" and payload["valid"]
    assert main(["fano", "--mds", "2", "7"]) == 0
    assert capsys.readouterr().out.strip() == "X_{1,2,7}: open"


def test_cli_usage_errors(capsys):
    assert main(["fano", "--weak"]) == 2
    assert main(["fano", "--log-fano", "X135", "--eps", "1/5"]) == 2
    assert main(["fano", "--log-fano", "X135", "--eps", "one"]) == 2
    assert main(["verify", "--variety", "X999"]) == 2
    assert main(["verify"]) == 2
    assert main(["bogus"]) == 2
    assert main(["dualize", "--in", "/nonexistent/file.in"]) == 2
    assert "error" in capsys.readouterr().err


def test_cli_dualize_orthant_is_self_dual(tmp_path, capsys):
    f = tmp_path / "orthant.in"
    f.write_text("amb_space 3\ninequalities 3\n1 0 0\n0 1 0\n0 0 1\n")
    assert main(["dualize", "--in", str(f)]) == 0
    out = parse_normaliz(capsys.readouterr().out)
    assert out.kind == "cone" and normalize_set(out.rows) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert main(["dualize", "--in", str(f), "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["rows"] == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]


def test_cli_dualize_non_pointed_keeps_lineality(tmp_path, capsys):
    f = tmp_path / "half.in"
    f.write_text("amb_space 2\ninequalities 1\n1 0\n")
    assert main(["dualize", "--in", str(f)]) == 0
    out = parse_normaliz(capsys.readouterr().out)
    assert set(out.rows) == {(1, 0), (0, 1), (0, -1)}


def test_cli_dualize_cone_block(tmp_path, capsys):
    f = tmp_path / "gens.in"
    f.write_text("amb_space 3\ncone 2\n1 0 0\n0 1 0\n")
    assert main(["dualize", "--in", str(f)]) == 0
    out = parse_normaliz(capsys.readouterr().out)
    assert out.kind == "inequalities"
    assert {(1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, -1)} == set(out.rows)


def test_cli_emit(tmp_path, capsys):
    assert main(["emit-normaliz", "--variety", "X124", "--stage", "gens", "-o", str(tmp_path)]) == 0
    assert (tmp_path / "X124-gens.in").exists()
    assert main(["emit-normaliz", "--variety", "X121", "--stage", "gens", "-o", str(tmp_path)]) == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "effcone", "fano", "--mds", "3", "8"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0 and out.stdout.strip() == "X_{1,3,8}: not_MDS"
