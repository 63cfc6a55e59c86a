"""Brute-force search for homogeneous LNDs of bounded image degree.

Negative answers mean "no LND up to the bound", never "rigid".
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import linalg
from .algebra import Poly
from .derivations import (
    Derivation,
    Grading,
    Inadmissible,
    NotLocallyNilpotent,
    check_admissible,
    fine_grading,
    verify_lnd,
)
from .quotient import PresentedRing, monomials_up_to

ORACLE_CAP = 16
ORACLE_TERM_GUARD = 60
# exhaustive {-1, 0, 1} combinations are tried up to this solution dimension
COMBINATION_DIM = 4


class EmptySearchSpace(ValueError):
    """No standard monomial has the degree required by the cell."""


@dataclass(frozen=True)
class SearchSpace:
    ring: PresentedRing
    grading: Grading
    degree: tuple
    image_degree_bound: int

    def __post_init__(self):
        if len(self.degree) != self.grading.rank:
            raise ValueError("degree length must equal the grading rank")

    def unknowns(self) -> list:
        """``(v, u)``: monomial ``u`` may occur in the image of variable ``v``."""
        table = _cell_table(self.ring, self.grading, self.image_degree_bound)
        return table.get(tuple(self.degree), [])


_TABLES: dict = {}


def standard_monomials(ring: PresentedRing, bound: int) -> list:
    n = ring.ambient.size
    return [m for m in monomials_up_to(n, bound) if ring.is_standard(m)]


def _cell_table(ring: PresentedRing, grading: Grading, bound: int) -> dict:
    key = (id(ring), grading, bound)
    hit = _TABLES.get(key)
    if hit is not None and hit[0] is ring:
        return hit[1]
    table: dict = {}
    mons = standard_monomials(ring, bound)
    degs = [grading.degree(m) for m in mons]
    for v in range(ring.ambient.size):
        wv = grading.weights[v]
        for m, dm in zip(mons, degs):
            e = tuple(a - b for a, b in zip(dm, wv))
            table.setdefault(e, []).append((v, m))
    if len(_TABLES) > 64:
        _TABLES.clear()
    _TABLES[key] = (ring, table)
    return table


def _primitive(vec) -> list:
    """Scale a rational vector to coprime integers (the nilpotency test is scale free)."""
    den = 1
    for c in vec:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in vec]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    return [c // g for c in ints] if g > 1 else ints


def _derivation_from_vector(ring: PresentedRing, unknowns: list, vec) -> Derivation:
    sp = ring.ambient
    terms = [dict() for _ in range(sp.size)]
    for (v, m), c in zip(unknowns, _primitive(vec)):
        if c:
            terms[v][m] = c
    return Derivation(ring, [Poly(sp, t) for t in terms])


def _equations(ring: PresentedRing, unknowns: list) -> list:
    """Rows of the linear system ``NF(d(g_i)) = 0`` in the image coefficients."""
    sp = ring.ambient
    rows: dict = {}
    partials = [[g.diff(v) for v in range(sp.size)] for g in ring.relations]
    for col, (v, m) in enumerate(unknowns):
        for gi, parts in enumerate(partials):
            dg = parts[v]
            if dg.is_zero():
                continue
            nf = ring.normal_form(dg.mul_monomial(m))
            for k, c in nf.terms.items():
                rows.setdefault((gi, k), {})[col] = c
    return [rows[k] for k in sorted(rows)]


def solve_homogeneous_derivations(s: SearchSpace) -> list:
    """Basis of the admissible derivations of degree ``s.degree`` whose images
    are combinations of standard monomials of total degree <= the bound."""
    unknowns = s.unknowns()
    if not unknowns:
        raise EmptySearchSpace(f"no monomials of degree {s.degree}")
    basis = linalg.nullspace(_equations(s.ring, unknowns), len(unknowns))
    out = []
    for vec in basis:
        d = _derivation_from_vector(s.ring, unknowns, vec)
        check_admissible(d)
        out.append(d)
    return out


def solution_vectors(s: SearchSpace) -> tuple:
    """``(unknowns, basis vectors)`` of the cell, for membership tests."""
    unknowns = s.unknowns()
    if not unknowns:
        return unknowns, []
    return unknowns, linalg.nullspace(_equations(s.ring, unknowns), len(unknowns))


def in_span(d: Derivation, s: SearchSpace) -> bool:
    """Is (the normal form of) ``d`` in the solution space of the cell?"""
    unknowns, basis = solution_vectors(s)
    index = {u: k for k, u in enumerate(unknowns)}
    target = [Fraction(0)] * len(unknowns)
    for v, img in enumerate(d.normalized().images):
        for m, c in img.terms.items():
            k = index.get((v, m))
            if k is None:
                return False
            target[k] = Fraction(c)
    # RREF basis: each vector is 1 on its own free column, 0 on the others
    free = [next(k for k, x in enumerate(vec) if x == 1 and all(b[k] == 0 for b in basis if b is not vec)) for vec in basis]
    combo = [Fraction(0)] * len(unknowns)
    for f, vec in zip(free, basis):
        w = target[f]
        if w:
            combo = [a + w * b for a, b in zip(combo, vec)]
    return combo == target


def _candidates(basis: list):
    """Basis vectors first, then small integer combinations (up to sign).

    Vectors are scaled to primitive integers; the nilpotency test is scale free.
    """
    basis = [_primitive(b) for b in basis]
    k = len(basis)
    yield from basis
    if k < 2:
        return
    if k <= COMBINATION_DIM:
        coeff_sets = product((-1, 0, 1), repeat=k)
    else:
        coeff_sets = []
        for a in range(k):
            for b in range(a + 1, k):
                for sb in (1, -1):
                    c = [0] * k
                    c[a], c[b] = 1, sb
                    coeff_sets.append(tuple(c))
    for coeffs in coeff_sets:
        nz = [c for c in coeffs if c]
        if len(nz) < 2 or nz[0] < 0:
            continue
        vec = [0] * len(basis[0])
        for c, b in zip(coeffs, basis):
            if c:
                vec = [x + c * y for x, y in zip(vec, b)]
        yield vec


def _divides_own_image(unknowns: list, selfdiv: list, vec) -> bool:
    """Some variable v has d(v) != 0 with every term divisible by v.

    Images are combinations of standard monomials, hence already normal, and
    v | d(v) with d(v) != 0 is impossible for an LND of a domain.
    """
    hit: dict = {}
    for (v, _), sd, c in zip(unknowns, selfdiv, vec):
        if c:
            hit[v] = hit.get(v, True) and sd
    return any(hit.values())


@dataclass
class Found:
    degree: tuple
    derivation: Derivation

    def to_json(self) -> dict:
        out = {"degree": list(self.degree), **self.derivation.to_json()}
        if self.derivation.certificate is not None:
            out["certificate"] = self.derivation.certificate.to_json()
        return out


@dataclass
class SearchResult:
    bound: int
    grading: Grading
    found: list = field(default_factory=list)
    cells: int = 0
    solved: int = 0

    @property
    def empty(self) -> bool:
        return not self.found

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "grading": self.grading.to_json(),
            "cells": self.cells,
            "nonzero_cells": self.solved,
            "found": [f.to_json() for f in self.found],
            "verdict": "LND found" if self.found else "no LND up to bound",
        }


def cell_order(ring: PresentedRing, grading: Grading, bound: int) -> list:
    """Degrees sorted by least total image degree in the cell, then lexicographically."""
    table = _cell_table(ring, grading, bound)
    return sorted(table, key=lambda e: (min(sum(m) for _, m in table[e]), e))


def search_lnd(
    ring: PresentedRing,
    degree_bound: int,
    grading: Grading | None = None,
    first_only: bool = False,
    cap: int = ORACLE_CAP,
) -> SearchResult:
    """Solve every degree cell and keep the candidates that pass ``verify_lnd``.

    At most one LND is kept per cell (the first candidate that passes).
    """
    grading = grading or fine_grading(ring)
    result = SearchResult(degree_bound, grading)
    for e in cell_order(ring, grading, degree_bound):
        result.cells += 1
        s = SearchSpace(ring, grading, e, degree_bound)
        unknowns, basis = solution_vectors(s)
        if not basis:
            continue
        result.solved += 1
        selfdiv = [m[v] > 0 for v, m in unknowns]
        for vec in _candidates(basis):
            if _divides_own_image(unknowns, selfdiv, vec):
                continue
            d = _derivation_from_vector(ring, unknowns, vec)
            try:
                verify_lnd(d, cap, ORACLE_TERM_GUARD)
            except (Inadmissible, NotLocallyNilpotent):
                continue
            result.found.append(Found(e, d))
            break
        if first_only and result.found:
            break
    return result
