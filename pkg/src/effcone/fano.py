"""Weak Fano, ampleness, klt and Mori-dream-space arithmetic.

Nefness is never decided from a nef cone here: every verdict rests on an
explicit decomposition into classes that are nef for geometric reasons,
together with the curve pairings that close the argument.  This module only
checks the arithmetic of those certificates exactly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .catalog import get_table
from .lattice import (
    AmbientLattice,
    CurveClass,
    DivisorClass,
    anticanonical,
    combine,
    pair_divisor_curve,
    product_blowup,
    top_self_intersection,
    vdim,
)


class CertificateError(ValueError):
    """A certificate's class identity or a precondition failed."""


# --- nef decompositions -------------------------------------------------------


@dataclass(frozen=True)
class NefDecomposition:
    target: DivisorClass
    parts: tuple[DivisorClass, ...]
    curve_checks: tuple[tuple[DivisorClass, CurveClass, int], ...] = ()
    label: str = ""


@dataclass(frozen=True)
class Verdict:
    ok: bool
    details: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def verify_nef_decomposition(nd: NefDecomposition) -> Verdict:
    lat = nd.target.lattice
    total = lat.zero()
    for p in nd.parts:
        total = total + p
    notes = []
    residual = nd.target - total
    if any(residual.coeffs):
        notes.append(f"{nd.label}: parts miss the target by {residual}")
    for D, C, expected in nd.curve_checks:
        got = pair_divisor_curve(D, C)
        if got != expected:
            notes.append(f"{nd.label}: ({D}).({C.coeffs}) = {got}, expected {expected}")
    return Verdict(not notes, tuple(notes))


def _dm(lat: AmbientLattice, d1: int, d2: int, mults: dict[int, int] | None = None) -> DivisorClass:
    """``d1 H1 + d2 H2 - sum m_i E_i`` with 1-based point indices."""
    m = [0] * lat.s
    for i, x in (mults or {}).items():
        m[i - 1] = x
    return lat.from_dm((d1, d2), m)


def _curve(lat: AmbientLattice, a1: int, a2: int, mults: dict[int, int] | None = None) -> CurveClass:
    v = [a1, a2] + [0] * lat.s
    for i, x in (mults or {}).items():
        v[1 + i] = -x
    return lat.curve(v)


# --- weak Fano on X_{1,2,s} -------------------------------------------------------


@dataclass(frozen=True)
class WeakFanoVerdict:
    s: int
    volume: int  # (-K)^3
    big: bool
    nef_certified: bool
    weak_fano: bool
    decomposition: NefDecomposition | None
    exceptional_pairings: tuple[int, ...]


def anticanonical_decomposition(s: int) -> NefDecomposition:
    """``-K = (H1+H2 - sum_{i != 1} E_i) + (H1+H2 - sum_{i != 2} E_i) + (H2 - E_1 - E_2)``.

    Every point appears exactly twice.  For ``s <= 1`` the last part is ``H2``
    and the first two omit nothing.
    """
    lat = product_blowup(1, 2, s)
    if s >= 2:
        p1 = _dm(lat, 1, 1, {i: 1 for i in range(2, s + 1)})
        p2 = _dm(lat, 1, 1, {i: 1 for i in range(1, s + 1) if i != 2})
        p3 = _dm(lat, 0, 1, {1: 1, 2: 1})
    else:
        p1 = p2 = _dm(lat, 1, 1, {i: 1 for i in range(1, s + 1)})
        p3 = _dm(lat, 0, 1)
    K = anticanonical(lat)
    checks = tuple((K, _curve(lat, 0, 0, {i: -1}), 2) for i in range(1, s + 1))
    return NefDecomposition(K, (p1, p2, p3), checks, f"-K on X_{{1,2,{s}}}")


def weak_fano_check(s: int) -> WeakFanoVerdict:
    """``X_{1,2,s}`` is weak Fano iff ``s <= 6``.

    Bigness is read off from ``(-K)^3 = 54 - 8s``.  The nef side uses the
    decomposition above; its parts are nef as long as each has a nonempty
    linear system (``vdim >= 0``), which fails from ``s = 7`` on.
    """
    if s < 0:
        raise ValueError("s must be nonnegative")
    lat = product_blowup(1, 2, s)
    K = anticanonical(lat)
    volume = top_self_intersection(K)
    nd = anticanonical_decomposition(s)
    sums_ok = bool(verify_nef_decomposition(nd))
    nef = sums_ok and all(vdim(p) >= 0 for p in nd.parts)
    pairings = tuple(pair_divisor_curve(K, _curve(lat, 0, 0, {i: -1})) for i in range(1, s + 1))
    big = volume > 0
    return WeakFanoVerdict(s, volume, big, nef, big and nef, nd, pairings)


def not_weak_fano_witness(s: int, i: int) -> int:
    """``(-K_{X_{1,3,s}}) . (l_1 - e_i)``, which is ``-1``."""
    if s < 1 or not 1 <= i <= s:
        raise ValueError("need s >= 1 and 1 <= i <= s")
    lat = product_blowup(1, 3, s)
    return pair_divisor_curve(anticanonical(lat), _curve(lat, 1, 0, {i: 1}))


# --- ampleness of 2H1 + 2H2 - sum E on X_{1,3,6} ------------------------------------


@dataclass(frozen=True)
class AmpleCertificate:
    top_power: int
    expected_top_power: int
    generators_match_table: bool
    decompositions: tuple[tuple[int, NefDecomposition, Verdict], ...]
    printed_mismatches: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return (
            self.top_power > 0
            and self.generators_match_table
            and all(v.ok for _, _, v in self.decompositions)
        )


# Values printed with the certificate that do not match the recomputation;
# they are reported, never used.
PRINTED_TOP_POWER_X136 = 90
PRINTED_D_MINUS_G1_ON_L2_E1 = 1


def ample_certificate_x136() -> AmpleCertificate:
    lat = product_blowup(1, 3, 6)
    D = _dm(lat, 2, 2, {i: 1 for i in range(1, 7)})
    H1, H2 = _dm(lat, 1, 0), _dm(lat, 0, 1)

    def E(i: int) -> DivisorClass:
        return lat.basis(f"E{i}")

    def H1E(i: int) -> DivisorClass:
        return _dm(lat, 1, 0, {i: 1})

    def H2E(*idx: int) -> DivisorClass:
        return _dm(lat, 0, 1, {i: 1 for i in idx})

    G = [
        E(1),
        H1E(1),
        H2E(1, 2, 3),
        _dm(lat, 0, 2, {1: 2, 2: 1, 3: 1, 4: 1, 5: 1, 6: 1}),
        _dm(lat, 1, 1, {i: 1 for i in range(1, 7)}),
        _dm(lat, 1, 4, {i: 3 for i in range(1, 6)}),
    ]
    table = {tuple(lat.to_frame(g.coeffs)) for g in G}
    printed = set(get_table("X136", "generators"))
    generators_ok = table <= {tuple(v) for v in printed}

    def c(a1, a2, m=None):
        return _curve(lat, a1, a2, m)

    plans = [
        (1, [H2E(1, 2, 3), H2E(1, 4, 5), H1E(6), H1], [(c(1, 0, {1: 1}), 0), (c(0, 1, {1: 1}), 0)]),
        (1, [H1E(2), H2E(3, 4), H2E(5, 6)], []),
        (1, [H1E(4), H1E(5), H2E(6)], []),
        (2, [2 * H1, D + E(1)], []),
        (1, [H1, H2], []),
        (
            4,
            [2 * H1] + [H1E(i) for i in range(1, 6)] + [4 * H2E(6)],
            [(c(0, 0, {i: -1}), 1) for i in range(1, 6)]
            + [(c(0, 1, {i: 1}), 3) for i in range(1, 6)]
            + [(c(1, 0, {6: 1}), 3)],
        ),
    ]
    out = []
    for idx, (k, parts, checks) in enumerate(plans, 1):
        target = k * D - G[idx - 1]
        nd = NefDecomposition(target, tuple(parts), tuple((target, C, v) for C, v in checks), f"{k}D-G{idx}")
        out.append((k, nd, verify_nef_decomposition(nd)))
    top = top_self_intersection(D)
    mismatches = []
    if top != PRINTED_TOP_POWER_X136:
        mismatches.append(f"D^4 = {top}, printed {PRINTED_TOP_POWER_X136}")
    got = pair_divisor_curve(D - G[0], c(0, 1, {1: 1}))
    if got != PRINTED_D_MINUS_G1_ON_L2_E1:
        mismatches.append(f"(D-G1).(l2-e1) = {got}, printed {PRINTED_D_MINUS_G1_ON_L2_E1}")
    return AmpleCertificate(top, PRINTED_TOP_POWER_X136, generators_ok, tuple(out), tuple(mismatches))


# --- klt pairs ------------------------------------------------------------------------


@dataclass(frozen=True)
class ExceptionalDivisor:
    label: str
    canonical: int  # coefficient in K_Z - h^* K_X
    multiplicities: tuple[int, ...]  # multiplicity of each boundary component along the centre


@dataclass(frozen=True)
class BoundarySpec:
    components: tuple[tuple[str, DivisorClass, Fraction], ...]
    exceptional: tuple[ExceptionalDivisor, ...]

    def __post_init__(self) -> None:
        n = len(self.components)
        for ex in self.exceptional:
            if len(ex.multiplicities) != n:
                raise ValueError(f"{ex.label}: {len(ex.multiplicities)} multiplicities for {n} components")
            if any(m < 0 for m in ex.multiplicities):
                raise ValueError(f"{ex.label}: negative multiplicity")

    def class_coeffs(self) -> tuple[Fraction, ...]:
        return combine([(c, D) for _, D, c in self.components])

    def scaled(self, t: Fraction) -> "BoundarySpec":
        return BoundarySpec(tuple((lab, D, c * t) for lab, D, c in self.components), self.exceptional)


class InvalidBoundary(CertificateError):
    """A boundary coefficient lies outside ``[0, 1)``."""


@dataclass(frozen=True)
class KltResult:
    discrepancies: dict[str, Fraction]
    klt: bool


def klt_discrepancies(spec: BoundarySpec) -> KltResult:
    """``a_E = canonical - sum coeff_j * mult_E(component_j)``; klt iff all ``a_E > -1``."""
    for lab, _, c in spec.components:
        if not 0 <= c < 1:
            raise InvalidBoundary(f"coefficient {c} of {lab} is outside [0, 1)")
    out: dict[str, Fraction] = {}
    for ex in spec.exceptional:
        a = Fraction(ex.canonical)
        for (_, _, c), m in zip(spec.components, ex.multiplicities):
            a -= c * m
        out[ex.label] = a
    return KltResult(out, all(a > -1 for a in out.values()))


def _eps_bound(s: int) -> Fraction:
    if s not in (5, 6):
        raise CertificateError("log Fano certificates are catalogued for X_{1,3,5} and X_{1,3,6}")
    return Fraction(1, s)


def boundary_x13(s: int, eps: Fraction) -> BoundarySpec:
    """The boundary ``Delta`` on ``X_{1,3,s}``, ``s in {5, 6}``, with its log resolution data.

    ``s = 5``: ten planes ``P_m`` through three points (coefficient 1/5), the
    resolution blows up the curves ``C_i`` (canonical coefficient 2) and the
    surfaces ``S_ij`` over lines through two points (canonical coefficient 1).
    ``s = 6``: six quadric cones ``Q_i`` with vertex at point ``i`` (1/6), the
    curves ``C_i`` and the surface ``S`` over the twisted cubic.
    Both add ``(1 - eps)(D_1 + D_2)`` with ``D_k`` of class ``H1 + H2 - sum E``
    and ``(1/s - eps) E_i``; these contain none of the centres.
    """
    eps = Fraction(eps)
    bound = _eps_bound(s)
    lat = product_blowup(1, 3, s)
    pts = range(1, s + 1)
    comps: list[tuple[str, DivisorClass, Fraction]] = []
    along_C: list[dict[int, int]] = []  # per component: multiplicity along each C_i
    along_S: list[dict[object, int]] = []
    if s == 5:
        triples = list(itertools.combinations(pts, 3))
        pairs = list(itertools.combinations(pts, 2))
        for t in triples:
            comps.append((f"P{''.join(map(str, t))}", _dm(lat, 0, 1, {i: 1 for i in t}), bound))
            along_C.append({i: int(i in t) for i in pts})
            along_S.append({p: int(set(p) <= set(t)) for p in pairs})
        s_labels = pairs
    else:
        for i in pts:
            mults = {j: 1 for j in pts}
            mults[i] = 2
            comps.append((f"Q{i}", _dm(lat, 0, 2, mults), bound))
            along_C.append(dict(mults))
            along_S.append({"R": 1})
        s_labels = ["R"]
    for k in (1, 2):
        comps.append((f"D{k}", _dm(lat, 1, 1, {i: 1 for i in pts}), 1 - eps))
        along_C.append({})
        along_S.append({})
    for i in pts:
        comps.append((f"E{i}", lat.basis(f"E{i}"), bound - eps))
        along_C.append({})
        along_S.append({})

    exc = [ExceptionalDivisor(f"F{i}", 2, tuple(ac.get(i, 0) for ac in along_C)) for i in pts]
    for lab in s_labels:
        name = "G" if lab == "R" else f"G{lab[0]}{lab[1]}"
        exc.append(ExceptionalDivisor(name, 1, tuple(a.get(lab, 0) for a in along_S)))
    return BoundarySpec(tuple(comps), tuple(exc))


@dataclass(frozen=True)
class LogFanoCertificate:
    s: int
    eps: Fraction
    boundary_class: tuple[Fraction, ...]
    class_identity: bool
    klt: KltResult
    ample: AmpleCertificate
    notes: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.class_identity and self.klt.klt and self.ample.ok


def log_fano_certificate(variety: str, eps: Fraction | str) -> LogFanoCertificate:
    """Check ``-K - Delta = eps (2H1 + 2H2 - sum E)``, the klt condition and ampleness."""
    s = {"X135": 5, "X136": 6}.get(variety.upper())
    if s is None:
        raise CertificateError(f"no log Fano certificate catalogued for {variety!r}")
    eps = Fraction(eps)
    if not 0 < eps < _eps_bound(s):
        raise CertificateError(f"eps must lie strictly between 0 and {_eps_bound(s)}, got {eps}")
    lat = product_blowup(1, 3, s)
    spec = boundary_x13(s, eps)
    delta = spec.class_coeffs()
    K = anticanonical(lat)
    A = _dm(lat, 2, 2, {i: 1 for i in range(1, s + 1)})
    identity = all(k - d == eps * a for k, d, a in zip(K.coeffs, delta, A.coeffs))
    return LogFanoCertificate(s, eps, delta, identity, klt_discrepancies(spec), ample_certificate_x136())


# --- Mori dream spaces ---------------------------------------------------------------


def mukai_finitely_generated(n: int, s: int) -> bool:
    """Finite generation of ``Eff`` of ``P^n`` blown up in ``s`` very general points, ``n > 1``."""
    if n < 2:
        raise ValueError("the classification is stated for n > 1")
    if n == 2:
        return s <= 8
    if n == 3:
        return s <= 7
    if n == 4:
        return s <= 8
    return s <= n + 3


def mukai_condition(r: int, n: int, s: int) -> bool:
    """``1/(r+1) + 1/(s-n-1) + 1/(n+1) > 1``; ``s <= n+1`` counts as satisfied."""
    if s - n - 1 <= 0:
        return True
    return Fraction(1, r + 1) + Fraction(1, s - n - 1) + Fraction(1, n + 1) > 1


def mds_status(n: int, s: int) -> str:
    """``MDS``, ``not_MDS`` or ``open`` for ``X_{1,n,s}``."""
    if n < 1 or s < 0:
        raise ValueError("need n >= 1 and s >= 0")
    if (n in (2, 3) and s <= 6) or s <= n + 1:
        return "MDS"
    if n >= 2 and not mukai_finitely_generated(n, s):
        return "not_MDS"
    return "open"
