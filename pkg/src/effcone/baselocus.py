"""Base-locus rules: fixed divisor families and the multiplicity bounds they force.

Each rule describes a family of fixed divisors ``F`` (indexed by a choice of
points) together with one or more covering curves ``C`` with ``F.C < 0``.  For
a divisor ``D`` the family member ``F`` lies in the base locus of ``|D|`` with
multiplicity at least ``ceil((D.C) / (F.C))``.  We store each bound as a linear
form ``expr`` in the (d, m) frame with ``expr(D) = -D.C`` and a denominator
``-F.C``, so the bound reads ``max(0, ceil(expr(D) / denominator))``.

Removing ``F`` from every effective ``D`` it divides gives the cone-method
inequality ``expr(D) <= 0``; :func:`effectivity_inequalities` emits those in
the orientation used by :mod:`effcone.exactcone` (``w . x >= 0``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .exactcone import IntVector
from .lattice import (
    AmbientLattice,
    CurveClass,
    DivisorClass,
    pair_divisor_curve,
    plane_blowup,
    quadric_surface_blowup,
    surface_pair,
)

Assignment = tuple[int, ...]  # 0-based point indices


class RuleError(ValueError):
    """A rule was applied outside its range of validity."""


@dataclass(frozen=True)
class BoundExpr:
    coeffs: IntVector  # expr(D) = coeffs . (d, m)
    denominator: int

    def value(self, dm: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.coeffs, dm))


@dataclass(frozen=True)
class CurveWitness:
    """Where a bound comes from: ``F`` (or ``F|_F``) paired with a covering curve.

    On a surface lattice both ``fixed`` and ``curve`` are divisor coefficients.
    ``restriction`` maps ambient class coefficients to ``lattice`` so that
    ``D.C = -expr(D)`` can be rechecked; it is ``None`` where the bound uses a
    modified divisor instead of ``D`` itself.
    """

    lattice: AmbientLattice
    fixed: IntVector
    curve: IntVector
    restriction: tuple[tuple[int, ...], ...] | None


@dataclass(frozen=True)
class BaseLocusRule:
    family_id: str
    description: str
    lattice_kind: str  # product12, product13, product_m1, points, line, Y, Z
    arity: int
    min_s: int
    max_s: int | None
    _assignments: Callable[[int], list[Assignment]]
    _fixed: Callable[[AmbientLattice, Assignment], IntVector]
    _bounds: Callable[[AmbientLattice, Assignment], list[BoundExpr]]
    _witnesses: Callable[[AmbientLattice, Assignment], list[CurveWitness]]

    def applies_to(self, lat: AmbientLattice) -> bool:
        kind_ok = {
            "points": lat.kind in ("product", "p3_line", "p1p2_line"),
            "product_m1": lat.kind == "product" and lat.m == 1,
            "product12": lat.kind == "product" and (lat.m, lat.n) == (1, 2),
            "product13": lat.kind == "product" and (lat.m, lat.n) == (1, 3),
            "line": lat.kind in ("p3_line", "p1p2_line"),
            "Y": lat.kind == "p3_line",
            "Z": lat.kind == "p1p2_line",
        }[self.lattice_kind]
        return kind_ok and lat.s >= self.min_s and (self.max_s is None or lat.s <= self.max_s)

    def _check(self, lat: AmbientLattice) -> None:
        if not self.applies_to(lat):
            raise RuleError(f"rule {self.family_id} does not apply to {lat.name}")

    def assignments(self, lat: AmbientLattice) -> list[Assignment]:
        self._check(lat)
        return self._assignments(lat.s)

    def _check_assignment(self, lat: AmbientLattice, a: Assignment) -> Assignment:
        a = tuple(a)
        if len(a) != self.arity:
            raise RuleError(f"rule {self.family_id} takes {self.arity} indices, got {len(a)}")
        if len(set(a)) != len(a) or any(not 0 <= i < lat.s for i in a):
            raise RuleError(f"indices {a} must be distinct and in 0..{lat.s - 1}")
        return a

    def fixed_class(self, lat: AmbientLattice, a: Assignment) -> DivisorClass:
        self._check(lat)
        a = self._check_assignment(lat, a)
        return DivisorClass(lat, lat.from_frame(self._fixed(lat, a)))

    def bounds(self, lat: AmbientLattice, a: Assignment) -> list[BoundExpr]:
        self._check(lat)
        return self._bounds(lat, self._check_assignment(lat, a))

    def witnesses(self, lat: AmbientLattice, a: Assignment) -> list[CurveWitness]:
        self._check(lat)
        return self._witnesses(lat, self._check_assignment(lat, a))

    def fixed_classes(self, lat: AmbientLattice) -> list[DivisorClass]:
        return [self.fixed_class(lat, a) for a in self.assignments(lat)]


def generic_bound(F_dot_C: int, D_dot_C: int) -> int:
    """``max(0, ceil(D.C / F.C))`` for a covering curve with ``F.C < 0``."""
    if F_dot_C >= 0:
        raise RuleError(f"covering curve must meet F negatively, got F.C = {F_dot_C}")
    return max(0, _ceil_div(-D_dot_C, -F_dot_C))


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def multiplicity_bound(rule: BaseLocusRule, assignment: Assignment, D: DivisorClass) -> int:
    dm = D.frame
    best = 0
    for b in rule.bounds(D.lattice, assignment):
        best = max(best, _ceil_div(b.value(dm), b.denominator))
    return best


def effectivity_inequalities(rule: BaseLocusRule, lat: AmbientLattice) -> list[IntVector]:
    """``expr <= 0`` for every bound and assignment, as ``-expr >= 0`` (sorted, deduplicated)."""
    out = set()
    for a in rule.assignments(lat):
        for b in rule.bounds(lat, a):
            out.add(tuple(-c for c in b.coeffs))
    return sorted(out)


def _witness_pairing(w: CurveWitness, fixed: Sequence[int]) -> int:
    if w.lattice.kind in ("product", "p3_line", "p1p2_line"):
        return pair_divisor_curve(DivisorClass(w.lattice, tuple(fixed)), CurveClass(w.lattice, w.curve))
    return surface_pair(DivisorClass(w.lattice, tuple(fixed)), DivisorClass(w.lattice, w.curve))


def consistency_problems(rule: BaseLocusRule, lat: AmbientLattice,
                         generators: Sequence[Sequence[int]] = ()) -> list[str]:
    """Recheck a rule against the intersection pairing and a list of cone generators.

    For every assignment and bound: the denominator is ``-F.C`` for the stored
    witness, and where a restriction is recorded, ``D.C = -expr(D)`` for every
    basis class ``D`` (both sides are linear).  Then every generator (d, m frame)
    outside the rule's own family must have multiplicity bound zero.
    """
    problems = []
    family = family_classes(rule, lat)
    basis = [tuple(int(i == j) for j in range(lat.rank)) for i in range(lat.rank)]
    for a in rule.assignments(lat):
        bounds, wits = rule.bounds(lat, a), rule.witnesses(lat, a)
        if len(bounds) != len(wits):
            problems.append(f"{rule.family_id}{a}: {len(bounds)} bounds but {len(wits)} witnesses")
            continue
        for b, w in zip(bounds, wits):
            fc = _witness_pairing(w, w.fixed)
            if fc != -b.denominator:
                problems.append(f"{rule.family_id}{a}: F.C = {fc}, denominator {b.denominator}")
            if w.restriction is None:
                continue
            for e in basis:
                restricted = tuple(sum(r * x for r, x in zip(row, e)) for row in w.restriction)
                dc = _witness_pairing(w, restricted)
                if dc != -b.value(lat.to_frame(e)):
                    problems.append(f"{rule.family_id}{a}: D.C = {dc} for D = {e}, expr {b.value(lat.to_frame(e))}")
        for g in generators:
            g = tuple(g)
            if g in family:
                continue
            mb = multiplicity_bound(rule, a, DivisorClass(lat, lat.from_frame(g)))
            if mb:
                problems.append(f"{rule.family_id}{a}: generator {lat.to_frame(g)} has bound {mb}")
    return problems


# --- frame helpers ------------------------------------------------------------


def _offset(lat: AmbientLattice) -> int:
    return lat.rank - lat.s


def _vec(lat: AmbientLattice, head: Sequence[int], points: dict[int, int] | None = None,
         line: int | None = None) -> IntVector:
    """A (d, m)-frame vector: degree head, optional E_L entry, point entries."""
    v = [0] * lat.rank
    v[: len(head)] = head
    if line is not None:
        v[lat.labels.index("EL")] = line
    for i, x in (points or {}).items():
        v[_offset(lat) + i] += x
    return tuple(v)


def _curve(lat: AmbientLattice, head: Sequence[int], points: dict[int, int], line: int = 0) -> IntVector:
    """Curve coefficients ``sum a_j l_j - sum m_i e_i`` (and ``-m_L e_L``)."""
    v = [0] * lat.rank
    v[: len(head)] = head
    if line:
        v[lat.labels.index("EL")] = -line
    for i, x in points.items():
        v[_offset(lat) + i] -= x
    return tuple(v)


def _ambient(lat: AmbientLattice, fixed_dm: IntVector, curve: IntVector) -> CurveWitness:
    ident = tuple(tuple(int(i == j) for j in range(lat.rank)) for i in range(lat.rank))
    return CurveWitness(lat, lat.from_frame(fixed_dm), curve, ident)


def _combos(k: int) -> Callable[[int], list[Assignment]]:
    return lambda s: list(itertools.combinations(range(s), k))


def _ones(a: Assignment, val: int = 1) -> dict[int, int]:
    return {i: val for i in a}


# --- rules --------------------------------------------------------------------


def _E_fixed(lat, a):
    return _vec(lat, (), {a[0]: -1})


E_POINT = BaseLocusRule(
    "E", "exceptional divisor E_i: bound -m_i", "points", 1, 1, None, _combos(1),
    _E_fixed,
    lambda lat, a: [BoundExpr(_vec(lat, (), {a[0]: -1}), 1)],
    lambda lat, a: [_ambient(lat, _E_fixed(lat, a), _curve(lat, (), {a[0]: -1}))],
)


def _H1E_fixed(lat, a):
    return _vec(lat, (1, 0), {a[0]: 1})


H1_MINUS_E = BaseLocusRule(
    "H1-E", "H_1 - E_i: bound m_i - d_2", "product_m1", 1, 1, None, _combos(1),
    _H1E_fixed,
    lambda lat, a: [BoundExpr(_vec(lat, (0, -1), {a[0]: 1}), 1)],
    lambda lat, a: [_ambient(lat, _H1E_fixed(lat, a), _curve(lat, (0, 1), {a[0]: 1}))],
)


def _H2EE_fixed(lat, a):
    return _vec(lat, (0, 1), _ones(a))


H2_MINUS_EE = BaseLocusRule(
    "H2-EE", "H_2 - E_i - E_j on X_{1,2,s}: bound m_i + m_j - d_1 - d_2", "product12", 2, 2, None,
    _combos(2),
    _H2EE_fixed,
    lambda lat, a: [BoundExpr(_vec(lat, (-1, -1), _ones(a)), 1)],
    lambda lat, a: [_ambient(lat, _H2EE_fixed(lat, a), _curve(lat, (1, 1), _ones(a)))],
)


# The (1,1)-divisor through five points is P^2 blown up in one further point
# (class e) and the five points; its covering curves live there.
def _S11_fixed(lat, a):
    return _vec(lat, (1, 1), _ones(a))


def _S11_bounds(lat, a):
    out = [
        BoundExpr(_vec(lat, (-1, -3), _ones(a)), 1),
        BoundExpr(_vec(lat, (-3, -5), _ones(a, 2)), 2),
    ]
    for k in range(lat.s):
        if k not in a:
            pts = _ones(a, 2)
            pts[k] = 1
            out.append(BoundExpr(_vec(lat, (-4, -5), pts), 3))
    return out


def _S11_restriction(lat, a) -> tuple[tuple[int, ...], ...]:
    # X_{1,2,s} -> Bl(P^2) with basis h, e, e_1..e_5: H1 -> h - e, H2 -> h, E_{a_j} -> e_j
    cols = [(1, -1) + (0,) * 5, (1, 0) + (0,) * 5]
    for i in range(lat.s):
        col = [0] * 7
        if i in a:
            col[2 + a.index(i)] = 1
        cols.append(tuple(col))
    return tuple(tuple(c[r] for c in cols) for r in range(7))


def _S11_witnesses(lat, a):
    surf = plane_blowup(["h", "e"] + [f"e{j}" for j in range(1, 6)])
    res = _S11_restriction(lat, a)
    normal = (2, -1) + (-1,) * 5  # (h - e) + h - sum e_j
    out = [
        CurveWitness(surf, normal, (3, -2) + (-1,) * 5, res),
        CurveWitness(surf, normal, (5, -2) + (-2,) * 5, res),
    ]
    surf7 = plane_blowup(["h", "e"] + [f"e{j}" for j in range(1, 6)] + ["eq"])
    for k in range(lat.s):
        if k not in a:
            out.append(CurveWitness(surf7, (2, -1) + (-1,) * 5 + (-1,), (5, -2) + (-2,) * 5 + (-1,), None))
    return out


S11 = BaseLocusRule(
    "S11", "(1,1)-divisor H_1 + H_2 - sum of five E", "product12", 5, 5, 6, _combos(5),
    _S11_fixed, _S11_bounds, _S11_witnesses,
)


def _S02_fixed(lat, a):
    return _vec(lat, (0, 2), _ones(a))


def _S02_witnesses(lat, a):
    surf = quadric_surface_blowup(5)
    cols = [(1, 0) + (0,) * 5, (0, 2) + (0,) * 5]
    for i in range(lat.s):
        col = [0] * 7
        if i in a:
            col[2 + a.index(i)] = 1
        cols.append(tuple(col))
    res = tuple(tuple(c[r] for c in cols) for r in range(7))
    return [CurveWitness(surf, (0, 4) + (-1,) * 5, (1, 3) + (-1,) * 5, res)]


S02 = BaseLocusRule(
    "S02", "(0,2)-divisor 2H_2 - sum of five E: bound sum m - 3d_1 - 2d_2", "product12", 5, 5, 6,
    _combos(5),
    _S02_fixed,
    lambda lat, a: [BoundExpr(_vec(lat, (-3, -2), _ones(a)), 1)],
    _S02_witnesses,
)


def _S14_fixed(lat, a):
    pts = {i: 2 for i in range(lat.s)}
    pts[a[0]] = 3
    return _vec(lat, (1, 4), pts)


def _S14_pts(lat, a):
    pts = {i: 1 for i in range(lat.s)}
    pts[a[0]] = 2
    return pts


S14 = BaseLocusRule(
    "S14", "H_1 + 4H_2 - 3E_a - 2(sum of other E): bound 2m_a + sum m - 3d_1 - 3d_2", "product12",
    1, 6, 6, _combos(1),
    _S14_fixed,
    lambda lat, a: [BoundExpr(_vec(lat, (-3, -3), _S14_pts(lat, a)), 1)],
    lambda lat, a: [_ambient(lat, _S14_fixed(lat, a), _curve(lat, (3, 3), _S14_pts(lat, a)))],
)


def _EL_fixed(lat, a):
    return _vec(lat, (), line=-1)


E_LINE = BaseLocusRule(
    "EL", "exceptional divisor over the line: bound -m_L", "line", 0, 0, None, lambda s: [()],
    _EL_fixed,
    lambda lat, a: [BoundExpr(_vec(lat, (), line=-1), 1)],
    lambda lat, a: [_ambient(lat, _EL_fixed(lat, a), _curve(lat, (), {}, line=-1))],
)


def _PiY_fixed(lat, a):
    return _vec(lat, (1,), _ones(a))


PI_Y = BaseLocusRule(
    "PiY", "plane through three points of Y_{L,s}: bound m_i + m_j + m_k - 2d", "Y", 3, 3, None,
    _combos(3),
    _PiY_fixed,
    lambda lat, a: [BoundExpr(_vec(lat, (-2,), _ones(a)), 1)],
    lambda lat, a: [_ambient(lat, _PiY_fixed(lat, a), _curve(lat, (2,), _ones(a)))],
)


def _PiLY_fixed(lat, a):
    return _vec(lat, (1,), _ones(a), line=1)


PI_LINE_Y = BaseLocusRule(
    "PiLY", "plane through L and a point of Y_{L,s}: bound m_L + m_i - d", "Y", 1, 1, None,
    _combos(1),
    _PiLY_fixed,
    lambda lat, a: [BoundExpr(_vec(lat, (-1,), _ones(a), line=1), 1)],
    lambda lat, a: [_ambient(lat, _PiLY_fixed(lat, a), _curve(lat, (1,), _ones(a), line=1))],
)


def _FY_pts(lat, a, base: int):
    pts = {i: base for i in range(lat.s)}
    pts[a[0]] = 2 * base
    return pts


def _FY_fixed(lat, a):
    return _vec(lat, (2,), _FY_pts(lat, a, 1))


F_Y = BaseLocusRule(
    "FY", "quadric cone 2H - sum E - E_j on Y_{L,6}: bound sum m + m_j - 4d", "Y", 1, 6, 6,
    _combos(1),
    _FY_fixed,
    lambda lat, a: [BoundExpr(_vec(lat, (-4,), _FY_pts(lat, a, 1)), 1)],
    lambda lat, a: [_ambient(lat, _FY_fixed(lat, a), _curve(lat, (4,), _FY_pts(lat, a, 1)))],
)


def _GZ_fixed(lat, a):
    return _vec(lat, (1, 1), _ones(a), line=1)


G_Z = BaseLocusRule(
    "GZ", "(1,1)-divisor through L and three points of Z_{L,s}: bound m_L + m_i + m_j + m_k - d_1 - 2d_2",
    "Z", 3, 3, None, _combos(3),
    _GZ_fixed,
    lambda lat, a: [BoundExpr(_vec(lat, (-1, -2), _ones(a), line=1), 1)],
    lambda lat, a: [_ambient(lat, _GZ_fixed(lat, a), _curve(lat, (1, 2), _ones(a), line=1))],
)


def _PiX_fixed(lat, a):
    return _vec(lat, (0, 1), _ones(a))


PI_X13 = BaseLocusRule(
    "PiX13", "H_2 - E_i - E_j - E_k on X_{1,3,s}: bound m_i + m_j + m_k - d_1 - 2d_2", "product13", 3, 3,
    None, _combos(3),
    _PiX_fixed,
    lambda lat, a: [BoundExpr(_vec(lat, (-1, -2), _ones(a)), 1)],
    lambda lat, a: [_ambient(lat, _PiX_fixed(lat, a), _curve(lat, (1, 2), _ones(a)))],
)


RULES: dict[str, BaseLocusRule] = {
    r.family_id: r
    for r in (E_POINT, H1_MINUS_E, H2_MINUS_EE, S11, S02, S14, E_LINE, PI_Y, PI_LINE_Y, F_Y, G_Z, PI_X13)
}


def get_rule(rule_id: str) -> BaseLocusRule:
    try:
        return RULES[rule_id]
    except KeyError:
        raise RuleError(f"unknown rule {rule_id!r}; known: {sorted(RULES)}") from None


def family_classes(rule: BaseLocusRule, lat: AmbientLattice) -> set[IntVector]:
    """(d, m)-frame vectors of every member of the rule's fixed family."""
    return {fc.frame for fc in rule.fixed_classes(lat)}


__all__ = [
    "BaseLocusRule",
    "BoundExpr",
    "CurveWitness",
    "RULES",
    "RuleError",
    "consistency_problems",
    "effectivity_inequalities",
    "family_classes",
    "generic_bound",
    "get_rule",
    "multiplicity_bound",
]
