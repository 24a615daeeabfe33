"""Independent reference computations used by the tests.

Nothing here imports effcone: each oracle recomputes its answer by the most
naive method available.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import gcd


def primitive(v):
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    return tuple(int(x) // g for x in v) if g else tuple(int(x) for x in v)


def nullspace(rows, dim):
    """Basis of ``{x : rows . x = 0}`` over the rationals, as primitive integer vectors."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(dim):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * dim
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -m[i][f]
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        basis.append(primitive([x * den for x in v]))
    return basis


def matrix_rank(rows, dim):
    return dim - len(nullspace(rows, dim)) if rows else 0


def brute_force_rays(ineqs, dim):
    """Extreme rays of the pointed cone ``{x : w . x >= 0}`` by trying every
    (dim-1)-subset of inequalities as the set of tight facets."""
    ineqs = [tuple(w) for w in ineqs if any(w)]
    out = set()
    for sub in itertools.combinations(ineqs, dim - 1):
        ker = nullspace(list(sub), dim)
        if len(ker) != 1:
            continue
        for v in (ker[0], tuple(-x for x in ker[0])):
            if all(sum(a * b for a, b in zip(w, v)) >= 0 for w in ineqs):
                out.add(v)
    return out


def random_pointed_cone(rng: random.Random, dim: int, n_ineqs: int, lo: int = -3, hi: int = 3):
    """Random inequality list of full rank (so the cone is pointed)."""
    while True:
        rows = [tuple(rng.randint(lo, hi) for _ in range(dim)) for _ in range(n_ineqs)]
        if all(any(r) for r in rows) and matrix_rank(rows, dim) == dim:
            return rows


def top_power_by_expansion(m, n, d1, d2, mults):
    """``D^(m+n)`` on ``P^m x P^n`` blown up in points, by expanding the product
    of ``m+n`` copies of ``D`` monomial by monomial.

    Ring facts used: ``H1^m H2^n = 1``, ``H1^(m+1) = H2^(n+1) = 0``, ``E_i`` kills
    ``H1`` and ``H2`` and ``E_j`` (j != i), and ``E_i^N = (-1)^(N-1)``.
    """
    N = m + n
    terms = [("H1", d1), ("H2", d2)] + [(f"E{i}", -x) for i, x in enumerate(mults)]
    if m == 0:
        terms = terms[1:]
    total = 0
    for choice in itertools.product(range(len(terms)), repeat=N):
        labels = [terms[c][0] for c in choice]
        coeff = 1
        for c in choice:
            coeff *= terms[c][1]
        if coeff == 0:
            continue
        es = {l for l in labels if l.startswith("E")}
        if es:
            if len(es) == 1 and all(l.startswith("E") for l in labels):
                total += coeff * (-1) ** (N - 1)
            continue
        if labels.count("H1") == m and labels.count("H2") == n:
            total += coeff
    return total


def monomials(nvars, degree):
    return [c for c in itertools.product(range(degree + 1), repeat=nvars) if sum(c) == degree]


def vdim_by_counting(m, n, d1, d2, mults):
    """Sections of ``O(d1, d2)`` minus the linear conditions imposed by points
    of multiplicity ``mults`` (counted as Taylor coefficients of order below the
    multiplicity in ``m + n`` local coordinates), minus one."""
    sections = len(monomials(m + 1, d1)) * len(monomials(n + 1, d2)) if m else len(monomials(n + 1, d2))
    N = m + n
    conditions = sum(sum(len(monomials(N, k)) for k in range(x)) for x in mults)
    return sections - conditions - 1
