"""Exact integer polyhedral cones.

Cones live in ``Z^dim`` and carry both representations:

* ``rays`` and ``lineality`` -- the cone is ``cone(rays) + span(lineality)``;
* ``facets`` and ``equations`` -- the cone is ``{x : f.x >= 0, e.x = 0}``.

Conversion between the two is done by the double description method with
incremental insertion of constraints in input order.  Everything is plain
Python ``int`` arithmetic, so there is no rounding anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

IntVector = tuple[int, ...]


class DimensionError(ValueError):
    """Vectors of different lengths were mixed."""


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def primitive(v: Sequence[int]) -> IntVector:
    """Divide by the gcd of the entries, keeping orientation."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in v)


def _check_dim(vectors: Iterable[Sequence[int]], dim: int | None) -> tuple[list[IntVector], int]:
    rows = [tuple(int(x) for x in v) for v in vectors]
    if dim is None:
        if not rows:
            raise DimensionError("dimension cannot be inferred from an empty list")
        dim = len(rows[0])
    if dim < 1:
        raise DimensionError(f"dimension must be positive, got {dim}")
    for r in rows:
        if len(r) != dim:
            raise DimensionError(f"expected length {dim}, got {len(r)}: {r}")
    return rows, dim


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q, by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, len(m)):
            a = m[i][c]
            row_i = m[i]
            row_r = m[r]
            for j in range(c, ncols):
                row_i[j] = (p * row_i[j] - a * row_r[j]) // prev
        prev = p
        r += 1
        if r == len(m):
            break
    return r


def rref_basis(rows: Sequence[Sequence[int]]) -> list[IntVector]:
    """Canonical primitive integer basis of the row space (scaled RREF)."""
    m = [[Fraction(x) for x in r] for r in rows if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    lead = 0
    out_rows = 0
    for c in range(ncols):
        piv = next((i for i in range(out_rows, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[out_rows], m[piv] = m[piv], m[out_rows]
        p = m[out_rows][c]
        m[out_rows] = [x / p for x in m[out_rows]]
        for i in range(len(m)):
            if i != out_rows and m[i][c] != 0:
                a = m[i][c]
                m[i] = [x - a * y for x, y in zip(m[i], m[out_rows])]
        out_rows += 1
        lead += 1
        if out_rows == len(m):
            break
    basis = []
    for r in m[:out_rows]:
        den = 1
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
        basis.append(primitive([int(x * den) for x in r]))
    return basis


def _project_off(v: IntVector, basis: Sequence[IntVector]) -> IntVector | None:
    """Primitive representative of ``v`` modulo ``span(basis)``, orthogonal to it."""
    if not basis:
        return primitive(v)
    # Gram-Schmidt over Q on the basis, then subtract the projection.
    ortho: list[list[Fraction]] = []
    for b in basis:
        w = [Fraction(x) for x in b]
        for u in ortho:
            c = sum(x * y for x, y in zip(w, u)) / sum(x * x for x in u)
            w = [x - c * y for x, y in zip(w, u)]
        ortho.append(w)
    w = [Fraction(x) for x in v]
    for u in ortho:
        c = sum(x * y for x, y in zip(w, u)) / sum(x * x for x in u)
        w = [x - c * y for x, y in zip(w, u)]
    if not any(w):
        return None
    den = 1
    for x in w:
        den = den * x.denominator // gcd(den, x.denominator)
    return primitive([int(x * den) for x in w])


def _double_description(
    constraints: Sequence[IntVector], dim: int, adjacency: str = "combinatorial"
) -> tuple[list[IntVector], list[IntVector]]:
    """Rays and lineality basis of ``{x : c.x >= 0 for c in constraints}``.

    Rays are returned modulo the lineality space (they are the extreme rays
    of the pointed quotient).
    """
    if adjacency not in ("combinatorial", "rank"):
        raise ValueError(f"unknown adjacency test {adjacency!r}")
    lineality: list[list[int]] = [[int(i == j) for j in range(dim)] for i in range(dim)]
    rays: list[list[int]] = []
    zeros: list[int] = []  # bitmask over processed constraints
    processed: list[IntVector] = []

    for k, a in enumerate(constraints):
        bit = 1 << k
        processed.append(a)
        pivot = next((i for i, l in enumerate(lineality) if dot(a, l) != 0), None)
        if pivot is not None:
            l0 = lineality.pop(pivot)
            al = dot(a, l0)
            if al < 0:
                l0 = [-x for x in l0]
                al = -al
            new_lin = []
            for l in lineality:
                c = dot(a, l)
                if c:
                    l = primitive([al * x - c * y for x, y in zip(l, l0)])
                new_lin.append(list(l))
            lineality = new_lin
            new_rays = []
            for r in rays:
                c = dot(a, r)
                if c:
                    r = list(primitive([al * x - c * y for x, y in zip(r, l0)]))
                new_rays.append(r)
            # The projected rays sit on the new hyperplane; l0 is strictly inside.
            rays = new_rays + [list(primitive(l0))]
            zeros = [z | bit for z in zeros] + [(1 << k) - 1]
            continue

        values = [dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(values) if v > 0]
        neg = [i for i, v in enumerate(values) if v < 0]
        zer = [i for i, v in enumerate(values) if v == 0]
        if not neg:
            zeros = [z | bit if values[i] == 0 else z for i, z in enumerate(zeros)]
            continue
        need = dim - len(lineality) - 2
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        new_zeros = [zeros[i] for i in pos] + [zeros[i] | bit for i in zer]
        for i in pos:
            zi = zeros[i]
            for j in neg:
                common = zi & zeros[j]
                if common.bit_count() < need:
                    continue
                if adjacency == "combinatorial":
                    adjacent = True
                    for t, zt in enumerate(zeros):
                        if t != i and t != j and (zt & common) == common:
                            adjacent = False
                            break
                else:
                    tight = [processed[b] for b in range(k) if common >> b & 1]
                    adjacent = rank(tight) == need
                if not adjacent:
                    continue
                vi, vj = values[i], values[j]
                r = primitive([vi * y - vj * x for x, y in zip(rays[i], rays[j])])
                new_rays.append(list(r))
                new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros

    lin = rref_basis(lineality)
    out = []
    seen = set()
    for r in rays:
        p = _project_off(tuple(r), lin) if lin else primitive(r)
        if p is not None and p not in seen:
            seen.add(p)
            out.append(p)
    out.sort()
    return out, lin


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone with both of its descriptions."""

    dim: int
    rays: tuple[IntVector, ...]
    facets: tuple[IntVector, ...]
    lineality: tuple[IntVector, ...] = ()
    equations: tuple[IntVector, ...] = ()

    @property
    def lineality_dim(self) -> int:
        return len(self.lineality)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    def dual(self) -> "Cone":
        return Cone(self.dim, self.facets, self.rays, self.equations, self.lineality)


def _both_ways(
    generators: list[IntVector], generator_lin: list[IntVector], dim: int, adjacency: str
) -> tuple[list[IntVector], list[IntVector]]:
    constraints = list(generators) + list(generator_lin) + [tuple(-x for x in l) for l in generator_lin]
    return _double_description(constraints, dim, adjacency)


def _irredundant_rows(rows: Sequence[IntVector], spanning: Sequence[IntVector], dim: int) -> list[IntVector]:
    """Rows that stay irredundant: their tight set in the dual description spans a hyperplane."""
    out = set()
    for r in {primitive(r) for r in rows}:
        if rank([g for g in spanning if dot(r, g) == 0]) == dim - 1:
            out.add(r)
    return sorted(out)


def extreme_rays(
    facets: Iterable[Sequence[int]], dim: int | None = None, adjacency: str = "combinatorial"
) -> Cone:
    """The cone ``{x : f.x >= 0}`` with its extreme rays and irredundant facets."""
    rows, dim = _check_dim(facets, dim)
    for r in rows:
        if not any(r):
            raise ValueError("zero inequality")
    rays, lin = _double_description(rows, dim, adjacency)
    if rank(list(rays) + list(lin)) == dim:
        fac, eqs = _irredundant_rows(rows, list(rays) + list(lin), dim), []
    else:
        fac, eqs = _both_ways(rays, lin, dim, adjacency)
    return Cone(dim, tuple(rays), tuple(fac), tuple(lin), tuple(eqs))


def facets(
    rays: Iterable[Sequence[int]], dim: int | None = None, adjacency: str = "combinatorial"
) -> Cone:
    """The cone generated by ``rays`` with its minimal facet description."""
    rows, dim = _check_dim(rays, dim)
    for r in rows:
        if not any(r):
            raise ValueError("zero ray")
    fac, eqs = _double_description(rows, dim, adjacency)
    if rank(list(fac) + list(eqs)) == dim:
        ext, lin = _irredundant_rows(rows, list(fac) + list(eqs), dim), []
    else:
        ext, lin = _both_ways(fac, eqs, dim, adjacency)
    return Cone(dim, tuple(ext), tuple(fac), tuple(lin), tuple(eqs))


def minimal_generators(rays: Iterable[Sequence[int]]) -> list[IntVector]:
    """Drop duplicates and non-extremal members; outputs are primitive and sorted.

    For a cone that is not pointed the extreme rays are only defined modulo the
    lineality space; the lineality basis is appended in both orientations.
    """
    rows = [primitive(r) for r in rays if any(r)]
    if not rows:
        return []
    cone = facets(rows)
    if cone.is_pointed:
        return sorted(set(rows) & set(cone.rays))
    return sorted(set(cone.rays) | set(cone.lineality) | {tuple(-x for x in l) for l in cone.lineality})


@dataclass(frozen=True)
class Containment:
    inside: bool
    violated: IntVector | None
    values: tuple[int, ...]
    tight: tuple[IntVector, ...] = ()

    def __bool__(self) -> bool:
        return self.inside


def contains(cone: Cone, v: Sequence[int]) -> Containment:
    """Membership test against the facet description.

    The certificate is the first violated facet (or equation), or, when ``v``
    is inside, the list of pairings with every facet together with the facets
    that are tight on ``v``.
    """
    v = tuple(v)
    if len(v) != cone.dim:
        raise DimensionError(f"expected length {cone.dim}, got {len(v)}")
    for e in cone.equations:
        if dot(e, v) != 0:
            return Containment(False, e, (dot(e, v),))
    values = tuple(dot(f, v) for f in cone.facets)
    for f, val in zip(cone.facets, values):
        if val < 0:
            return Containment(False, f, values)
    tight = tuple(f for f, val in zip(cone.facets, values) if val == 0)
    return Containment(True, None, values, tight)


@dataclass(frozen=True)
class Comparison:
    """Symmetric difference of two vector sets after primitive normalization."""

    missing: tuple[IntVector, ...] = field(default=())  # in B, not in A
    extra: tuple[IntVector, ...] = field(default=())  # in A, not in B

    @property
    def equal(self) -> bool:
        return not self.missing and not self.extra

    def __bool__(self) -> bool:
        return self.equal


def normalize_set(vectors: Iterable[Sequence[int]]) -> set[IntVector]:
    return {primitive(v) for v in vectors}


def equal_up_to_normalization(a: Iterable[Sequence[int]], b: Iterable[Sequence[int]]) -> Comparison:
    """Compare ``a`` (computed) against ``b`` (reference)."""
    sa, sb = normalize_set(a), normalize_set(b)
    return Comparison(tuple(sorted(sb - sa)), tuple(sorted(sa - sb)))
