"""Divisor and curve classes on the blowups used throughout the package.

Four kinds of lattice are supported:

* ``product``: the blowup ``X_{m,n,s}`` of ``P^m x P^n`` in ``s`` points, with
  divisor basis ``H_1, H_2, E_1..E_s`` and curve basis ``l_1, l_2, e_1..e_s``.
  ``m = 0`` gives the blowup of ``P^n`` with bases ``H, E_i`` and ``l, e_i``.
* ``p3_line``: ``Y_{L,s}``, the blowup of ``P^3`` in a line and ``s`` points
  (``H, E_L, E_1..E_s`` / ``l, e_L, e_1..e_s``).
* ``p1p2_line``: ``Z_{L,s}``, the blowup of ``P^1 x P^2`` in a line inside a
  fibre of the first projection and ``s`` points.
* ``surface``: any surface lattice given by labels and a symmetric pairing.

Classes are stored by their coefficients in the divisor basis.  For solving
cone problems the package also uses the *(d, m) frame*, where the exceptional
coefficients are negated so that ``d_1 H_1 + d_2 H_2 - sum m_i E_i`` becomes
``(d_1, d_2, m_1, ...)``; :meth:`AmbientLattice.to_frame` converts.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

IntVector = tuple[int, ...]


class LatticeMismatch(ValueError):
    """Two classes living on different lattices were combined."""


class UnsupportedLattice(ValueError):
    """The operation is not defined for this kind of lattice."""


@dataclass(frozen=True)
class AmbientLattice:
    kind: str
    labels: tuple[str, ...]
    curve_labels: tuple[str, ...]
    # pairing[i][j] = (divisor i) . (curve j); for surfaces it is the
    # intersection form on the divisor basis and curve_labels == labels.
    pairing: tuple[tuple[int, ...], ...]
    n_degree: int
    m: int = 0
    n: int = 0
    s: int = 0
    name: str = ""

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        if self.kind == "product":
            return self.m + self.n
        if self.kind in ("p3_line", "p1p2_line"):
            return 3
        return 2

    def to_frame(self, coeffs: Sequence[int]) -> IntVector:
        """Class coefficients to the (d, m) frame.  The map is an involution."""
        k = self.n_degree
        return tuple(coeffs[:k]) + tuple(-x for x in coeffs[k:])

    from_frame = to_frame

    def divisor(self, coeffs: Sequence[int]) -> "DivisorClass":
        return DivisorClass(self, tuple(coeffs))

    def from_dm(self, degrees: Sequence[int], mults: Sequence[int]) -> "DivisorClass":
        """The class ``sum d_i H_i - sum m_j E_j`` (E_L first on line blowups)."""
        return DivisorClass(self, self.from_frame(tuple(degrees) + tuple(mults)))

    def basis(self, label: str) -> "DivisorClass":
        v = [0] * self.rank
        v[self.labels.index(label)] = 1
        return DivisorClass(self, tuple(v))

    def curve(self, coeffs: Sequence[int]) -> "CurveClass":
        return CurveClass(self, tuple(coeffs))

    def zero(self) -> "DivisorClass":
        return DivisorClass(self, (0,) * self.rank)


def _diag_pairing(signs: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    r = len(signs)
    return tuple(tuple(signs[i] if i == j else 0 for j in range(r)) for i in range(r))


def product_blowup(m: int, n: int, s: int) -> AmbientLattice:
    """``X_{m,n,s}``; ``m = 0`` means a single projective space ``P^n``."""
    if n < 1 or m < 0 or s < 0:
        raise ValueError(f"bad product blowup parameters {(m, n, s)}")
    pts = tuple(f"E{i}" for i in range(1, s + 1))
    cpts = tuple(f"e{i}" for i in range(1, s + 1))
    if m == 0:
        labels, curves, k = ("H",) + pts, ("l",) + cpts, 1
    else:
        labels, curves, k = ("H1", "H2") + pts, ("l1", "l2") + cpts, 2
    pairing = _diag_pairing([1] * k + [-1] * s)
    return AmbientLattice("product", labels, curves, pairing, k, m, n, s, f"X_{{{m},{n},{s}}}")


def p3_line_blowup(s: int) -> AmbientLattice:
    """``Y_{L,s}``: basis ``H, E_L, E_1..E_s``."""
    labels = ("H", "EL") + tuple(f"E{i}" for i in range(1, s + 1))
    curves = ("l", "eL") + tuple(f"e{i}" for i in range(1, s + 1))
    pairing = _diag_pairing([1, -1] + [-1] * s)
    return AmbientLattice("p3_line", labels, curves, pairing, 1, 0, 3, s, f"Y_{{L,{s}}}")


def p1p2_line_blowup(s: int) -> AmbientLattice:
    """``Z_{L,s}``: basis ``H1, H2, E_L, E_1..E_s``."""
    labels = ("H1", "H2", "EL") + tuple(f"E{i}" for i in range(1, s + 1))
    curves = ("l1", "l2", "eL") + tuple(f"e{i}" for i in range(1, s + 1))
    pairing = _diag_pairing([1, 1, -1] + [-1] * s)
    return AmbientLattice("p1p2_line", labels, curves, pairing, 2, 1, 2, s, f"Z_{{L,{s}}}")


def surface_lattice(labels: Sequence[str], form: Sequence[Sequence[int]], name: str = "",
                    n_degree: int = 1) -> AmbientLattice:
    form_t = tuple(tuple(int(x) for x in row) for row in form)
    r = len(labels)
    if len(form_t) != r or any(len(row) != r for row in form_t):
        raise ValueError("pairing matrix does not match the number of labels")
    for i in range(r):
        for j in range(r):
            if form_t[i][j] != form_t[j][i]:
                raise ValueError("surface pairing must be symmetric")
    return AmbientLattice("surface", tuple(labels), tuple(labels), form_t, n_degree, name=name)


def quadric_surface_blowup(s: int) -> AmbientLattice:
    """``P^1 x P^1`` blown up in ``s`` points (basis h1, h2, e_i)."""
    labels = ["h1", "h2"] + [f"e{i}" for i in range(1, s + 1)]
    r = len(labels)
    form = [[0] * r for _ in range(r)]
    form[0][1] = form[1][0] = 1
    for i in range(2, r):
        form[i][i] = -1
    return surface_lattice(labels, form, f"Bl_{s}(P1xP1)", n_degree=2)


def plane_blowup(labels: Sequence[str]) -> AmbientLattice:
    """``P^2`` blown up in points; ``labels[0]`` is the line class."""
    r = len(labels)
    form = [[0] * r for _ in range(r)]
    form[0][0] = 1
    for i in range(1, r):
        form[i][i] = -1
    return surface_lattice(labels, form, f"Bl_{r - 1}(P2)")


@dataclass(frozen=True)
class DivisorClass:
    lattice: AmbientLattice
    coeffs: IntVector

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.lattice.rank:
            raise ValueError(
                f"{self.lattice.name}: expected {self.lattice.rank} coefficients, got {len(self.coeffs)}"
            )

    def _same(self, other: "DivisorClass") -> None:
        if other.lattice != self.lattice:
            raise LatticeMismatch(f"{self.lattice.name} vs {other.lattice.name}")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._same(other)
        return DivisorClass(self.lattice, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._same(other)
        return DivisorClass(self.lattice, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.lattice, tuple(-a for a in self.coeffs))

    def __rmul__(self, k: int) -> "DivisorClass":
        return DivisorClass(self.lattice, tuple(k * a for a in self.coeffs))

    @property
    def frame(self) -> IntVector:
        return self.lattice.to_frame(self.coeffs)

    def __str__(self) -> str:
        parts = []
        for c, lab in zip(self.coeffs, self.lattice.labels):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(f"{sign}{mag}{lab}")
        if not parts:
            return "0"
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text


@dataclass(frozen=True)
class CurveClass:
    lattice: AmbientLattice
    coeffs: IntVector

    def __post_init__(self) -> None:
        if len(self.coeffs) != len(self.lattice.curve_labels):
            raise ValueError(
                f"{self.lattice.name}: expected {len(self.lattice.curve_labels)} curve coefficients"
            )

    def __add__(self, other: "CurveClass") -> "CurveClass":
        if other.lattice != self.lattice:
            raise LatticeMismatch(f"{self.lattice.name} vs {other.lattice.name}")
        return CurveClass(self.lattice, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))


def _bilinear(form, a: Sequence[int], b: Sequence[int]) -> int:
    return sum(a[i] * form[i][j] * b[j] for i in range(len(a)) if a[i] for j in range(len(b)) if b[j])


def pair_divisor_curve(D: DivisorClass, C: CurveClass) -> int:
    if D.lattice != C.lattice:
        raise LatticeMismatch(f"{D.lattice.name} vs {C.lattice.name}")
    return _bilinear(D.lattice.pairing, D.coeffs, C.coeffs)


def surface_pair(a: DivisorClass, b: DivisorClass) -> int:
    if a.lattice != b.lattice:
        raise LatticeMismatch(f"{a.lattice.name} vs {b.lattice.name}")
    if a.lattice.kind != "surface":
        raise UnsupportedLattice("surface_pair needs a surface lattice")
    return _bilinear(a.lattice.pairing, a.coeffs, b.coeffs)


def _product_parts(D: DivisorClass) -> tuple[int, int, IntVector]:
    lat = D.lattice
    if lat.kind != "product":
        raise UnsupportedLattice(f"{lat.kind} lattices are not products of projective spaces")
    if lat.m == 0:
        return 0, D.coeffs[0], tuple(-x for x in D.coeffs[1:])
    return D.coeffs[0], D.coeffs[1], tuple(-x for x in D.coeffs[2:])


def top_self_intersection(D: DivisorClass) -> int:
    """``D^(m+n) = d_1^m d_2^n binom(m+n, n) - sum m_i^(m+n)``."""
    lat = D.lattice
    d1, d2, mults = _product_parts(D)
    N = lat.m + lat.n
    main = d2**lat.n if lat.m == 0 else d1**lat.m * d2**lat.n * comb(N, lat.n)
    return main - sum(x**N for x in mults)


def _binom_or_zero(k: int, r: int) -> int:
    return comb(k, r) if k >= r >= 0 else 0


def vdim(D: DivisorClass) -> int:
    """Virtual dimension of ``|D|``; negative multiplicities are used literally."""
    lat = D.lattice
    d1, d2, mults = _product_parts(D)
    N = lat.m + lat.n
    if lat.m == 0:
        sections = _binom_or_zero(lat.n + d2, lat.n)
    else:
        sections = _binom_or_zero(lat.m + d1, lat.m) * _binom_or_zero(lat.n + d2, lat.n)
    return sections - sum(_binom_or_zero(N + mi - 1, N) for mi in mults) - 1


def edim(D: DivisorClass) -> int:
    return max(-1, vdim(D))


def vdim_p3_line(d: int, contains_line: bool, mults: Sequence[int]) -> int:
    """Virtual dimension of degree ``d`` surfaces in ``P^3`` through a line
    (with multiplicity at most one along it) and points of given multiplicity."""
    if any(m < 0 for m in mults):
        raise ValueError("point multiplicities must be nonnegative")
    line = (d + 1) if contains_line else 0
    return _binom_or_zero(d + 3, 3) - line - sum(_binom_or_zero(m + 2, 3) for m in mults) - 1


def anticanonical(lat: AmbientLattice) -> DivisorClass:
    """``-K = (m+1)H_1 + (n+1)H_2 - (m+n-1) sum E_i``."""
    if lat.kind != "product":
        raise UnsupportedLattice("anticanonical class is only catalogued for product blowups")
    N = lat.m + lat.n
    if lat.m == 0:
        degrees = (lat.n + 1,)
    else:
        degrees = (lat.m + 1, lat.n + 1)
    return lat.from_dm(degrees, (N - 1,) * lat.s)


def curve_class(d1: int, d2: int, mults: Sequence[int], lat: AmbientLattice | None = None) -> CurveClass:
    """``d_1 l_1 + d_2 l_2 - sum m_i e_i``, on ``X_{1,n,len(mults)}`` by default."""
    if lat is None:
        lat = product_blowup(1, 2, len(mults))
    if lat.kind != "product" or lat.m == 0:
        raise UnsupportedLattice("curve_class expects a two-factor product blowup")
    pad = tuple(mults) + (0,) * (lat.s - len(mults))
    return CurveClass(lat, (d1, d2) + tuple(-m for m in pad))


def combine(terms: Sequence[tuple[Fraction | int, DivisorClass]]) -> tuple[Fraction, ...]:
    """Rational linear combination of classes, as a coefficient tuple."""
    if not terms:
        raise ValueError("empty combination")
    lat = terms[0][1].lattice
    out = [Fraction(0)] * lat.rank
    for coeff, D in terms:
        if D.lattice != lat:
            raise LatticeMismatch(f"{lat.name} vs {D.lattice.name}")
        for i, x in enumerate(D.coeffs):
            out[i] += Fraction(coeff) * x
    return tuple(out)
