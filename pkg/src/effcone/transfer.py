"""Linear transport of classes and inequalities between lattices.

A :class:`LinearMap` carries classes from a source lattice to a target lattice
by an integer matrix with one column per source basis element.  Inequalities
travel the other way: an inequality ``w`` valid on the target pulls back to
``w o M`` on the source.  Every map used by the cone method has this shape:

* restrictions ``N^1(V) -> N^1(S)`` to a surface or divisor ``S``;
* pushforwards along blowdowns (forget a point or the line), whose pullback
  on inequalities inserts a zero coefficient;
* inclusions ``N^1(Y_{L,s}) -> N^1(Y_{L,s+1})`` whose pullback drops a slot,
  which is only allowed when that slot carries a zero coefficient;
* the small modification ``phi_*: N^1(Y_{L,s+1}) -> N^1(Z_{L,s})``.

Inequalities are always handled in the (d, m) frame of their lattice.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exactcone import IntVector
from .lattice import (
    AmbientLattice,
    DivisorClass,
    LatticeMismatch,
    p1p2_line_blowup,
    p3_line_blowup,
    product_blowup,
)

Matrix = tuple[tuple[int, ...], ...]


class TransportError(ValueError):
    """A slot that should be forgotten carries a nonzero coefficient."""


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
        for i in range(len(a))
    )


def _identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class LinearMap:
    id: str
    source: AmbientLattice
    target: AmbientLattice
    matrix: Matrix  # target.rank rows, source.rank columns
    # Pulling back may only drop target slots with zero coefficient.
    strict_drop: bool = False
    description: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if len(self.matrix) != self.target.rank or any(len(r) != self.source.rank for r in self.matrix):
            raise ValueError(f"{self.id}: matrix shape does not match {self.source.name} -> {self.target.name}")

    def apply(self, coeffs: Sequence[int]) -> IntVector:
        if len(coeffs) != self.source.rank:
            raise LatticeMismatch(f"{self.id}: expected {self.source.rank} class coefficients")
        return tuple(sum(r[j] * coeffs[j] for j in range(len(coeffs))) for r in self.matrix)

    def pull_back(self, ineq: Sequence[int]) -> IntVector:
        """Pull a (d, m)-frame inequality on the target back to the source."""
        if len(ineq) != self.target.rank:
            raise LatticeMismatch(f"{self.id}: expected an inequality on {self.target.name}")
        w = self.target.from_frame(ineq)
        if self.strict_drop:
            for i, row in enumerate(self.matrix):
                if not any(row) and w[i] != 0:
                    raise TransportError(
                        f"{self.id}: cannot forget {self.target.labels[i]}, coefficient {w[i]} is nonzero"
                    )
        pulled = tuple(sum(w[i] * self.matrix[i][j] for i in range(len(w))) for j in range(self.source.rank))
        return self.source.to_frame(pulled)

    def then(self, other: "LinearMap") -> "LinearMap":
        """The composite ``other o self``, for moving classes.

        Strictness does not survive composition; pull inequalities back one
        map at a time with :func:`pull_back_chain` instead.
        """
        if other.source != self.target:
            raise LatticeMismatch(f"cannot compose {self.id} with {other.id}")
        return LinearMap(
            f"{other.id}*{self.id}",
            self.source,
            other.target,
            _matmul(other.matrix, self.matrix),
        )


RestrictionMap = LinearMap


def restrict_class(map_: LinearMap, D: DivisorClass) -> DivisorClass:
    if D.lattice != map_.source:
        raise LatticeMismatch(f"{map_.id} expects a class on {map_.source.name}")
    return DivisorClass(map_.target, map_.apply(D.coeffs))


def pull_back_inequality(map_: LinearMap, target_ineq: Sequence[int]) -> IntVector:
    return map_.pull_back(target_ineq)


def pull_back_chain(chain: Sequence[LinearMap], ineq: Sequence[int]) -> IntVector:
    """Pull back along ``chain[0]``, then ``chain[1]``, ...; the chain maps
    classes from ``chain[0].source`` to ``chain[-1].target``."""
    for a, b in zip(chain, chain[1:]):
        if a.target != b.source:
            raise LatticeMismatch(f"chain breaks between {a.id} and {b.id}")
    w = tuple(ineq)
    for m in reversed(chain):
        w = m.pull_back(w)
    return w


def _point_offset(lat: AmbientLattice) -> int:
    return lat.rank - lat.s


def lift_forget_point(ineq: Sequence[int], insert_at: int, n_fixed: int = 2) -> IntVector:
    """Insert a zero at point slot ``insert_at`` (1-based) after ``n_fixed`` leading coordinates."""
    s = len(ineq) - n_fixed + 1
    if not 1 <= insert_at <= s:
        raise IndexError(f"insert_at must lie in 1..{s}, got {insert_at}")
    k = n_fixed + insert_at - 1
    return tuple(ineq[:k]) + (0,) + tuple(ineq[k:])


def _drop_column_matrix(rank_src: int, drop: int) -> Matrix:
    """Pushforward forgetting source basis element ``drop``."""
    rows = []
    for i in range(rank_src):
        if i != drop:
            rows.append(tuple(int(j == i) for j in range(rank_src)))
    return tuple(rows)


def _smaller(lat: AmbientLattice) -> AmbientLattice:
    if lat.kind == "product":
        return product_blowup(lat.m, lat.n, lat.s - 1)
    if lat.kind == "p3_line":
        return p3_line_blowup(lat.s - 1)
    if lat.kind == "p1p2_line":
        return p1p2_line_blowup(lat.s - 1)
    raise ValueError(f"cannot forget a point on {lat.kind}")


def forget_point(lat: AmbientLattice, slot: int) -> LinearMap:
    """Pushforward along the blowdown of ``E_slot`` (1-based)."""
    if not 1 <= slot <= lat.s:
        raise IndexError(f"slot must lie in 1..{lat.s}")
    target = _smaller(lat)
    drop = _point_offset(lat) + slot - 1
    return LinearMap(f"forget_E{slot}", lat, target, _drop_column_matrix(lat.rank, drop))


def forget_line(lat: AmbientLattice) -> LinearMap:
    """Pushforward along the blowdown of ``E_L``: ``Y_{L,s} -> X_{0,3,s}`` or ``Z_{L,s} -> X_{1,2,s}``."""
    if lat.kind == "p3_line":
        target = product_blowup(0, 3, lat.s)
    elif lat.kind == "p1p2_line":
        target = product_blowup(1, 2, lat.s)
    else:
        raise ValueError("forget_line needs a line blowup")
    drop = lat.labels.index("EL")
    return LinearMap("forget_EL", lat, target, _drop_column_matrix(lat.rank, drop))


def include_point(lat: AmbientLattice, slot: int = 1) -> LinearMap:
    """``N^1`` of ``lat`` into the lattice with one more point, inserted at ``slot``.

    Its pullback forgets that point, which is only valid for inequalities not
    involving it, so the map is strict.
    """
    bigger = {
        "product": lambda: product_blowup(lat.m, lat.n, lat.s + 1),
        "p3_line": lambda: p3_line_blowup(lat.s + 1),
        "p1p2_line": lambda: p1p2_line_blowup(lat.s + 1),
    }[lat.kind]()
    new = _point_offset(bigger) + slot - 1
    rows = []
    for i in range(bigger.rank):
        if i == new:
            rows.append((0,) * lat.rank)
        else:
            src = i if i < new else i - 1
            rows.append(tuple(int(j == src) for j in range(lat.rank)))
    return LinearMap(f"include_E{slot}", lat, bigger, tuple(rows), strict_drop=True)


@dataclass(frozen=True)
class SmallModification:
    """``phi: Y_{L,s+1} --> Z_{L,s}``, an isomorphism in codimension one.

    Y basis ``(H, E_L, E_1, E_2..E_{s+1})``; Z basis ``(H_1, H_2, E_L, E_1..E_s)``.
    """

    s: int

    @property
    def y(self) -> AmbientLattice:
        return p3_line_blowup(self.s + 1)

    @property
    def z(self) -> AmbientLattice:
        return p1p2_line_blowup(self.s)

    def _block(self, head: Matrix) -> Matrix:
        n = 3 + self.s
        rows = []
        for i in range(n):
            if i < 3:
                rows.append(tuple(head[i]) + (0,) * self.s)
            else:
                rows.append(tuple(int(j == i) for j in range(n)))
        return tuple(rows)

    @property
    def push(self) -> Matrix:
        return self._block(((1, 0, 1), (1, 1, 0), (-1, -1, -1)))

    @property
    def pull(self) -> Matrix:
        return self._block(((1, 1, 1), (-1, 0, -1), (0, -1, -1)))

    def push_map(self) -> LinearMap:
        return LinearMap(f"phi_push_{self.s}", self.y, self.z, self.push)

    def pull_map(self) -> LinearMap:
        return LinearMap(f"phi_pull_{self.s}", self.z, self.y, self.pull)


def phi_transport(direction: str, v: Sequence[int], s: int) -> IntVector:
    """Apply ``phi_*`` (``push``: Y_{L,s+1} -> Z_{L,s}) or ``phi^*`` (``pull``) to class coefficients."""
    sm = SmallModification(s)
    if direction == "push":
        return sm.push_map().apply(v)
    if direction == "pull":
        return sm.pull_map().apply(v)
    raise ValueError(f"direction must be 'push' or 'pull', got {direction!r}")


def _restriction(id_: str, source: AmbientLattice, target: AmbientLattice,
                 images: Sequence[dict[str, int]], description: str) -> LinearMap:
    """Build a map from the images of the source basis, given as label -> coefficient."""
    cols = []
    for img in images:
        col = [0] * target.rank
        for lab, c in img.items():
            col[target.labels.index(lab)] += c
        cols.append(col)
    matrix = tuple(tuple(cols[j][i] for j in range(source.rank)) for i in range(target.rank))
    return LinearMap(id_, source, target, matrix, description=description)


def restriction_to_M(h_slot: int = 1) -> LinearMap:
    """``X_{1,2,6}`` to the movable ``(2,1)``-divisor ``M``, a copy of ``X_{1,1,6}``.

    ``H_1`` restricts to a ruling; ``h_slot`` picks which of the two.
    """
    src, tgt = product_blowup(1, 2, 6), product_blowup(1, 1, 6)
    h, other = ("H1", "H2") if h_slot == 1 else ("H2", "H1")
    images = [{h: 1}, {"H1": 1, "H2": 1}] + [{f"E{i}": 1} for i in range(1, 7)]
    return _restriction(f"M_h{h_slot}", src, tgt, images, "H1 -> h, H2 -> h1+h2, Ei -> ei")


def restriction_Z_to_S(s: int = 5) -> LinearMap:
    """``Z_{L,s}`` to the quadric ``S~`` (a copy of ``X_{1,1,s}``)."""
    src, tgt = p1p2_line_blowup(s), product_blowup(1, 1, s)
    images = [{"H1": 1}, {"H1": 1, "H2": 1}, {"H1": 1}] + [{f"E{i}": 1} for i in range(1, s + 1)]
    return _restriction(f"S_{s}", src, tgt, images, "H1 -> h1, H2 -> h1+h2, EL -> h1, Ei -> ei")


def restriction_Y_to_Q(s: int = 6) -> LinearMap:
    """``Y_{L,s}`` to the quadric ``Q~`` (a copy of ``X_{1,1,s}``)."""
    src, tgt = p3_line_blowup(s), product_blowup(1, 1, s)
    images = [{"H1": 1, "H2": 1}, {"H1": 1}] + [{f"E{i}": 1} for i in range(1, s + 1)]
    return _restriction(f"Q_{s}", src, tgt, images, "H -> h1+h2, EL -> h1, Ei -> ei")


def restriction_X13_to_V(s: int) -> LinearMap:
    """``X_{1,3,s}`` to a ``(1,1)``-divisor ``V~_s``, a copy of ``Y_{L,s}``."""
    src, tgt = product_blowup(1, 3, s), p3_line_blowup(s)
    images = [{"H": 1, "EL": -1}, {"H": 1}] + [{f"E{i}": 1} for i in range(1, s + 1)]
    return _restriction(f"V_{s}", src, tgt, images, "H1 -> H-EL, H2 -> H, Ei -> Ei")


def compose(*maps: LinearMap) -> LinearMap:
    """``compose(f, g, h)`` is ``h o g o f`` (apply left to right)."""
    out = maps[0]
    for m in maps[1:]:
        out = out.then(m)
    return out


def identity_map(lat: AmbientLattice) -> LinearMap:
    return LinearMap("id", lat, lat, _identity(lat.rank))
