"""Acceptance checks, one per criterion.

Each ``criterion_N`` returns ``(ok, detail)``.  Under pytest every check prints
its PASS/FAIL line and then asserts; ``python3 tests/test_acceptance.py`` prints
all seven lines and exits nonzero if any fails.
"""
from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from effcone import fano, pipeline  # noqa: E402
from effcone.baselocus import consistency_problems, get_rule  # noqa: E402
from effcone.catalog import VARIETIES, get_recipe, get_table, get_variety  # noqa: E402
from effcone.exactcone import extreme_rays, facets, normalize_set  # noqa: E402
from effcone.lattice import product_blowup, top_self_intersection, vdim, vdim_p3_line  # noqa: E402

from oracles import brute_force_rays, matrix_rank, random_pointed_cone  # noqa: E402

PIPELINE_VARIETIES = ("X123", "X124", "X125", "X126", "X135", "X136", "YL5", "YL6")


def _x121_exception_holds(report) -> bool:
    if len(report.discrepancies) != 1:
        return False
    (d,) = report.discrepancies
    return d.table == "generators" and d.printed_only == () and d.orbit_summary(report.lattice)[1] == [(0, 1, -1)]


def criterion_1() -> tuple[bool, str]:
    t0 = time.perf_counter()
    failures = []
    for vid in VARIETIES:
        report = pipeline.duality_report(vid)
        if vid == "X121":
            if not _x121_exception_holds(report):
                failures.append(vid)
        elif report.discrepancies:
            failures.append(f"{vid}({', '.join(d.table for d in report.discrepancies)})")
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 10
    detail = f"{len(VARIETIES)} varieties in {elapsed:.1f}s"
    if failures:
        detail += "; mismatched: " + "; ".join(failures)
    return ok, detail


def criterion_2() -> tuple[bool, str]:
    t0 = time.perf_counter()
    failures = []
    for vid in PIPELINE_VARIETIES:
        report = pipeline.verify(vid)
        if report.discrepancies:
            failures.append(f"{vid}({', '.join(d.table for d in report.discrepancies)})")
    elapsed = time.perf_counter() - t0
    lat = get_variety("X123").lattice
    st = pipeline.cone_method_stages(get_recipe("X123"))
    mid_rays = len(pipeline.orbits(st.intermediate.rays, lat))
    mid_rows = len(pipeline.orbits(get_table("X123-intermediate", "inequalities"), lat))
    m_rows = len(pipeline.orbits(pipeline.restriction_table_M(), get_variety("X126").lattice))
    ok = not failures and elapsed < 60
    detail = (f"{elapsed:.1f}s; X123 intermediate {mid_rays} ray orbits, printed list of {mid_rows} "
              f"inequality orbits; M table {m_rows} computed orbits")
    if failures:
        detail += "; mismatched: " + "; ".join(failures)
    return ok, detail


def criterion_3() -> tuple[bool, str]:
    wrong = []
    for s in range(13):
        v = fano.weak_fano_check(s)
        if v.volume != 54 - 8 * s or v.weak_fano != (s < 7):
            wrong.append(f"weak Fano s={s}")
    lat = product_blowup(1, 3, 6)
    top = top_self_intersection(lat.from_dm((2, 2), (1,) * 6))
    if top != 90:
        wrong.append(f"(2H1+2H2-sum E)^4 = {top}, expected 90")
    checks = {
        "vdim(H1+H2-sum4 E) on X_{1,2,4}": (vdim(product_blowup(1, 2, 4).from_dm((1, 1), (1,) * 4)), 1),
        "quintic through L, five triple points": (vdim_p3_line(5, True, (3,) * 5), -1),
        "chi identity for cubics, five double points": (vdim_p3_line(3, False, (2,) * 5) + 1, 0),
    }
    wrong += [f"{k} = {got}, expected {want}" for k, (got, want) in checks.items() if got != want]
    for s in range(1, 7):
        for i in range(1, s + 1):
            if fano.not_weak_fano_witness(s, i) != -1:
                wrong.append(f"-K.(l1-e{i}) on X_{{1,3,{s}}}")
    return not wrong, "all values agree" if not wrong else "; ".join(wrong)


def criterion_4() -> tuple[bool, str]:
    wrong = []
    r5 = fano.klt_discrepancies(fano.boundary_x13(5, Fraction(1, 10))).discrepancies
    if {v for k, v in r5.items() if k[0] == "F"} != {Fraction(4, 5)} or \
            {v for k, v in r5.items() if k[0] == "G"} != {Fraction(2, 5)}:
        wrong.append(f"X_{{1,3,5}} discrepancies {sorted(set(r5.values()))}")
    r6 = fano.klt_discrepancies(fano.boundary_x13(6, Fraction(1, 12))).discrepancies
    if {v for k, v in r6.items() if k[0] == "F"} != {Fraction(5, 6)} or r6["G"] != 0:
        wrong.append(f"X_{{1,3,6}} discrepancies {sorted(set(r6.values()))}")
    grid = {"X135": ("1/100", "1/10", "3/20"), "X136": ("1/120", "1/12", "1/8")}
    for vid, epss in grid.items():
        for eps in epss:
            cert = fano.log_fano_certificate(vid, eps)
            if not (cert.class_identity and cert.klt.klt):
                wrong.append(f"{vid} eps={eps}")
    return not wrong, "(4/5, 2/5) and (5/6, 0); class identity at 6 values" if not wrong else "; ".join(wrong)


def criterion_5(n_cones: int = 240) -> tuple[bool, str]:
    t0 = time.perf_counter()
    rng = random.Random(20240101)
    bad = []
    for k in range(n_cones):
        dim = 2 + k % 5
        ineqs = random_pointed_cone(rng, dim, rng.randint(dim, dim + 4))
        cone = extreme_rays(ineqs, dim)
        if set(cone.rays) != brute_force_rays(ineqs, dim):
            bad.append(f"rays #{k}")
            continue
        if not cone.rays or matrix_rank(list(cone.rays), dim) < dim:
            continue
        back = facets(cone.rays, dim)
        if normalize_set(back.facets) != normalize_set(cone.facets) or \
                normalize_set(extreme_rays(back.facets, dim).rays) != normalize_set(cone.rays):
            bad.append(f"double dual #{k}")
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 120
    return ok, f"{n_cones} cones in {elapsed:.1f}s" + ("" if not bad else "; failing: " + ", ".join(bad[:5]))


OPEN_SMALL = {(2, 7), (2, 8), (3, 7), (4, 6), (4, 7), (4, 8)}


def expected_mds_status(n: int, s: int) -> str:
    if (n in (2, 3) and s <= 6) or s <= n + 1:
        return "MDS"
    if (n in (2, 4) and s >= 9) or (n == 3 and s >= 8) or (n >= 5 and s >= n + 4):
        return "not_MDS"
    if (n, s) in OPEN_SMALL or (n >= 5 and s in (n + 2, n + 3)):
        return "open"
    raise AssertionError(f"grid point ({n}, {s}) is not covered")


def criterion_6() -> tuple[bool, str]:
    wrong = [(n, s, fano.mds_status(n, s)) for n in range(2, 7) for s in range(13)
             if fano.mds_status(n, s) != expected_mds_status(n, s)]
    return not wrong, "65 grid points" if not wrong else f"mismatches {wrong}"


def criterion_7() -> tuple[bool, str]:
    problems = []
    pairs = 0
    for vid, spec in VARIETIES.items():
        gens = get_table(vid, "generators")
        for rid in spec.fixed_families:
            pairs += 1
            problems += [f"{vid}/{p}" for p in consistency_problems(get_rule(rid), spec.lattice, gens)]
    return not problems, f"{pairs} variety/rule pairs" + ("" if not problems else "; " + "; ".join(problems[:5]))


CRITERIA = {
    1: ("table duality regression", criterion_1),
    2: ("pipeline reproduction", criterion_2),
    3: ("arithmetic spot values", criterion_3),
    4: ("klt certificates", criterion_4),
    5: ("random cone property suite", criterion_5),
    6: ("mds_status grid", criterion_6),
    7: ("base-locus consistency", criterion_7),
}


def run(number: int) -> tuple[bool, str]:
    name, check = CRITERIA[number]
    ok, detail = check()
    return ok, f"{'PASS' if ok else 'FAIL'} criterion {number} ({name}): {detail}"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, line = run(number)
    with capsys.disabled():
        print(f"\n{line}")
    assert ok, line


def main() -> int:
    results = [run(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    return 0 if all(ok for ok, _ in results) else 1


if __name__ == "__main__":
    sys.exit(main())
