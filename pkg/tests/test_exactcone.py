from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effcone.exactcone import (
    _both_ways,
    _double_description,
    DimensionError,
    contains,
    equal_up_to_normalization,
    extreme_rays,
    facets,
    minimal_generators,
    normalize_set,
    primitive,
    rank,
)

from oracles import brute_force_rays, matrix_rank, random_pointed_cone


def test_orthant_is_self_dual():
    eye = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    c = extreme_rays(eye)
    assert set(c.rays) == set(eye)
    assert set(facets(c.rays).facets) == set(eye)


def test_square_cone_rays():
    ineqs = [(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)]
    assert set(extreme_rays(ineqs).rays) == {(1, 1, 1), (1, -1, 1), (-1, 1, 1), (-1, -1, 1)}


def test_halfspace_has_lineality():
    c = extreme_rays([(1, 0, 0)])
    assert c.lineality_dim == 2
    assert not c.is_pointed
    assert set(c.rays) == {(1, 0, 0)}


def test_redundant_inequalities_are_dropped():
    c = extreme_rays([(1, 0), (0, 1), (1, 1), (2, 1)])
    assert set(c.facets) == {(1, 0), (0, 1)}


def test_lower_dimensional_generators_report_equations():
    c = facets([(1, 0, 0), (0, 1, 0)])
    assert not c.is_full_dimensional
    assert normalize_set(c.equations) | normalize_set(tuple(-x for x in e) for e in c.equations) >= {(0, 0, 1)}


def test_zero_cone_has_no_rays():
    c = extreme_rays([(1, 0), (-1, 0), (0, 1), (0, -1)])
    assert c.rays == ()


def test_rank_adjacency_agrees_with_combinatorial():
    rng = random.Random(7)
    for _ in range(30):
        ineqs = random_pointed_cone(rng, 4, 7)
        a = extreme_rays(ineqs, 4, "combinatorial")
        b = extreme_rays(ineqs, 4, "rank")
        assert set(a.rays) == set(b.rays)


def test_facet_shortcut_agrees_with_second_pass():
    rng = random.Random(11)
    for _ in range(30):
        dim = rng.randint(2, 6)
        ineqs = random_pointed_cone(rng, dim, rng.randint(dim, dim + 5))
        rays, lin = _double_description(ineqs, dim)
        assert list(extreme_rays(ineqs).facets) == _both_ways(rays, lin, dim, "combinatorial")[0]
        cone = facets(rays, dim)
        assert list(cone.rays) == _both_ways(cone.facets, [], dim, "combinatorial")[0]


def test_dimension_mismatch_raises():
    with pytest.raises(DimensionError):
        extreme_rays([(1, 0), (0, 1, 0)])


def test_minimal_generators_drop_interior_vectors():
    assert set(minimal_generators([(1, 0), (0, 1), (1, 1), (2, 0)])) == {(1, 0), (0, 1)}


def test_contains_reports_violated_facet():
    c = extreme_rays([(1, 0), (0, 1)])
    inside = contains(c, (2, 3))
    assert inside and not inside.tight
    out = contains(c, (-1, 2))
    assert not out and out.violated == (1, 0)
    assert contains(c, (0, 5)).tight == ((1, 0),)


def test_comparison_direction():
    cmp = equal_up_to_normalization([(2, 0), (0, 1)], [(1, 0), (1, 1)])
    assert cmp.extra == ((0, 1),)
    assert cmp.missing == ((1, 1),)
    assert not cmp


def test_primitive_and_rank():
    assert primitive((4, -6, 0)) == (2, -3, 0)
    with pytest.raises(ValueError):
        primitive((0, 0))
    assert rank([(1, 2), (2, 4)]) == 1


def test_large_entries_stay_exact():
    big = 10**30
    c = extreme_rays([(1, 0), (big, -1)])
    assert set(c.rays) == {(0, -1), (1, big)}


@pytest.mark.parametrize("seed", range(40))
def test_random_cones_match_brute_force(seed):
    rng = random.Random(seed)
    dim = rng.randint(2, 5)
    ineqs = random_pointed_cone(rng, dim, rng.randint(dim, dim + 4))
    assert set(extreme_rays(ineqs, dim).rays) == brute_force_rays(ineqs, dim)


vectors = st.lists(st.integers(-3, 3), min_size=4, max_size=4).map(tuple)


@settings(max_examples=60, deadline=None)
@given(st.lists(vectors, min_size=4, max_size=8))
def test_double_dual_is_identity(ineqs):
    if not all(any(w) for w in ineqs) or matrix_rank(ineqs, 4) < 4:
        return
    cone = extreme_rays(ineqs, 4)
    if not cone.rays or matrix_rank(list(cone.rays), 4) < 4:
        return
    back = extreme_rays(facets(cone.rays, 4).facets, 4)
    assert normalize_set(back.rays) == normalize_set(cone.rays)
    assert normalize_set(cone.dual().rays) == normalize_set(cone.facets)
