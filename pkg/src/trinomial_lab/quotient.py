"""Coordinate rings ``K[T, S] / (g_1, ..., g_s)``: normal forms and membership."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from . import linalg
from .algebra import (
    Poly,
    SpaceMismatch,
    VariableSpace,
    grlex_key,
    monomial_div,
    monomial_divides,
    monomial_lcm,
)

DEFAULT_DEGREE_SLACK = 2


def _tidy(c):
    # integral Fractions become ints, which keeps hot loops off Fraction arithmetic
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _reduce_terms(terms: dict, basis: Sequence[tuple]) -> dict:
    """Full remainder of ``terms`` modulo ``basis`` = [(lm, lc, tail_terms)]."""
    work = dict(terms)
    rem = {}
    while work:
        m = max(work, key=grlex_key)
        c = work.pop(m)
        for lm, lc, tail in basis:
            if monomial_divides(lm, m):
                q = monomial_div(m, lm)
                f = c if lc == 1 else _tidy(Fraction(c) / lc)
                for tm, tc in tail.items():
                    k = tuple([a + b for a, b in zip(tm, q)])
                    v = work.get(k, 0) - f * tc
                    if v:
                        work[k] = v
                    else:
                        work.pop(k, None)
                break
        else:
            rem[m] = c
    return rem


def _basis_entry(p: Poly) -> tuple:
    lm = p.leading_monomial()
    lc = _tidy(Fraction(p.terms[lm]))
    tail = {m: _tidy(c) for m, c in p.terms.items() if m != lm}
    return (lm, lc, tail)


def groebner_basis(polys: Sequence[Poly]) -> list:
    """Reduced Groebner basis under graded lex (Buchberger with the coprime
    leading-monomial criterion), leading coefficients normalised to 1."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return []
    space = polys[0].space
    basis = [p.scale(1 / p.leading_coefficient()) for p in polys]
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    while pairs:
        pairs.sort(key=lambda ij: grlex_key(monomial_lcm(basis[ij[0]].leading_monomial(), basis[ij[1]].leading_monomial())))
        i, j = pairs.pop(0)
        a, b = basis[i], basis[j]
        la, lb = a.leading_monomial(), b.leading_monomial()
        if all(x == 0 or y == 0 for x, y in zip(la, lb)):
            continue
        lcm = monomial_lcm(la, lb)
        s = a.mul_monomial(monomial_div(lcm, la)) - b.mul_monomial(monomial_div(lcm, lb))
        rem = _reduce_terms(s.terms, [_basis_entry(g) for g in basis])
        if rem:
            r = Poly(space, rem)
            r = r.scale(1 / r.leading_coefficient())
            basis.append(r)
            n = len(basis) - 1
            pairs.extend((n, k) for k in range(n))
    # minimise and interreduce
    basis.sort(key=lambda g: grlex_key(g.leading_monomial()))
    minimal = []
    for g in basis:
        lm = g.leading_monomial()
        if not any(monomial_divides(h.leading_monomial(), lm) for h in minimal):
            minimal = [h for h in minimal if not monomial_divides(lm, h.leading_monomial())]
            minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = [_basis_entry(h) for k, h in enumerate(minimal) if k != idx]
        lm = g.leading_monomial()
        tail = {m: c for m, c in g.terms.items() if m != lm}
        rem = _reduce_terms(tail, others)
        rem[lm] = Fraction(1)
        reduced.append(Poly(space, rem))
    reduced.sort(key=lambda g: grlex_key(g.leading_monomial()))
    return reduced


@dataclass(frozen=True)
class Membership:
    status: str  # "yes" | "no-within-bound" | "undecided"
    cofactors: tuple = ()
    decided: bool = False

    @property
    def member(self) -> bool:
        return self.status == "yes"


class PresentedRing:
    """``K[ambient] / (relations)`` with graded-lex normal forms.

    A single relation is its own standard basis; several relations are
    completed once, at construction, by :func:`groebner_basis`.
    """

    def __init__(self, ambient: VariableSpace, relations: Sequence[Poly] = (), complete: bool = True):
        rels = []
        for g in relations:
            if g.space != ambient:
                raise SpaceMismatch("relation over another space")
            if g.is_zero():
                raise ValueError("relations must be nonzero")
            rels.append(g)
        self.ambient = ambient
        self.relations = tuple(rels)
        self.reduction_order = "grlex"
        if len(rels) <= 1:
            self.standard_basis = tuple(rels)
        elif complete:
            self.standard_basis = tuple(groebner_basis(rels))
        else:
            self.standard_basis = None
        self._entries = None if self.standard_basis is None else [_basis_entry(g) for g in self.standard_basis]
        self._mono_cache: dict = {}

    @property
    def completed(self) -> bool:
        return self.standard_basis is not None

    def __repr__(self):
        rels = ", ".join(g.to_text() for g in self.relations)
        return f"PresentedRing({', '.join(self.ambient.names)} / ({rels}))"

    def __eq__(self, other):
        return isinstance(other, PresentedRing) and self.ambient == other.ambient and self.relations == other.relations

    def __hash__(self):
        return hash((self.ambient, self.relations))

    def leading_monomials(self) -> list:
        return [e[0] for e in self._entries]

    def is_standard(self, m) -> bool:
        return not any(monomial_divides(lm, m) for lm, _, _ in self._entries)

    def normal_form(self, p: Poly) -> Poly:
        if p.space != self.ambient:
            raise SpaceMismatch("polynomial over another space")
        if self._entries is None:
            raise ValueError("ring not completed: normal forms need a standard basis")
        if not self._entries:
            return p
        out: dict = {}
        cache = self._mono_cache
        for m, c in p.terms.items():
            nf = cache.get(m)
            if nf is None:
                nf = {k: _tidy(v) for k, v in _reduce_terms({m: 1}, self._entries).items()}
                cache[m] = nf
            for k, v in nf.items():
                nv = out.get(k, 0) + c * v
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return Poly._raw(self.ambient, out)

    def equal(self, p: Poly, q: Poly) -> bool:
        return self.normal_form(p - q).is_zero()

    def ideal_member(self, p: Poly, degree_slack: int = DEFAULT_DEGREE_SLACK) -> Membership:
        """Decide ``p in (relations)`` with a cofactor certificate when possible.

        One relation: exact division.  Several relations: a bounded-degree
        linear solve for cofactors, cross-checked by the standard basis.
        """
        if degree_slack < 0:
            raise ValueError("degree_slack must be nonnegative")
        if not self.relations:
            return Membership("yes" if p.is_zero() else "no-within-bound", (), True)
        if p.is_zero():
            return Membership("yes", tuple(self.ambient.zero() for _ in self.relations), True)
        if len(self.relations) == 1:
            g = self.relations[0]
            q, r = divide(p, g)
            if r.is_zero():
                return Membership("yes", (q,), True)
            return Membership("no-within-bound", (), True)
        cof = bounded_cofactors(p, self.relations, degree_slack)
        if cof is not None:
            return Membership("yes", cof, True)
        if self._entries is not None and not self.normal_form(p).is_zero():
            return Membership("no-within-bound", (), True)
        return Membership("undecided", (), False)


def divide(p: Poly, g: Poly) -> tuple:
    """Multivariate division by a single polynomial: returns (quotient, remainder)."""
    lm, lc, tail = _basis_entry(g)
    work = dict(p.terms)
    quot: dict = {}
    rem: dict = {}
    while work:
        m = max(work, key=grlex_key)
        c = work.pop(m)
        if monomial_divides(lm, m):
            q = monomial_div(m, lm)
            f = c if lc == 1 else _tidy(Fraction(c) / lc)
            quot[q] = quot.get(q, 0) + f
            for tm, tc in tail.items():
                k = tuple([a + b for a, b in zip(tm, q)])
                v = work.get(k, 0) - f * tc
                if v:
                    work[k] = v
                else:
                    work.pop(k, None)
        else:
            rem[m] = c
    return Poly(p.space, quot), Poly._raw(p.space, rem)


def divides(g: Poly, p: Poly) -> bool:
    """Does ``g`` divide ``p`` in the ambient polynomial ring?  Stops at the
    first leading term that ``lm(g)`` does not divide."""
    if p.is_zero():
        return True
    if g.is_zero():
        return False
    lm, lc, tail = _basis_entry(g)
    work = dict(p.terms)
    while work:
        m = max(work, key=grlex_key)
        c = work.pop(m)
        if not monomial_divides(lm, m):
            return False
        q = monomial_div(m, lm)
        f = c if lc == 1 else _tidy(Fraction(c) / lc)
        for tm, tc in tail.items():
            k = tuple([a + b for a, b in zip(tm, q)])
            v = work.get(k, 0) - f * tc
            if v:
                work[k] = v
            else:
                work.pop(k, None)
    return True


def monomials_up_to(nvars: int, degree: int) -> list:
    """All exponent vectors of total degree <= ``degree`` (graded order)."""
    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def bounded_cofactors(p: Poly, relations: Sequence[Poly], degree_slack: int):
    """Cofactors ``h_i`` with ``sum h_i g_i == p`` and
    ``deg h_i <= deg p - min deg g_i + degree_slack``, by exact linear solve."""
    bound = p.total_degree() - min(g.total_degree() for g in relations) + degree_slack
    if bound < 0:
        return None
    n = p.space.size
    unknowns = []
    for gi, g in enumerate(relations):
        cap = bound
        for m in monomials_up_to(n, cap):
            unknowns.append((gi, m))
    rows: dict = {}
    for col, (gi, m) in enumerate(unknowns):
        for tm, tc in relations[gi].terms.items():
            k = tuple([a + b for a, b in zip(tm, m)])
            rows.setdefault(k, {})[col] = tc
    keys = sorted(set(rows) | set(p.terms), key=grlex_key)
    sol = linalg.solve([rows.get(k, {}) for k in keys], [p.terms.get(k, 0) for k in keys], len(unknowns))
    if sol is None:
        return None
    cof = [dict() for _ in relations]
    for (gi, m), v in zip(unknowns, sol):
        if v:
            cof[gi][m] = v
    hs = tuple(Poly(p.space, c) for c in cof)
    check = p.space.zero()
    for h, g in zip(hs, relations):
        check = check + h * g
    if check != p:
        raise AssertionError("cofactor certificate does not recompose")
    return hs


def normal_form(p: Poly, ring: PresentedRing) -> Poly:
    return ring.normal_form(p)


def ideal_member(p: Poly, ring: PresentedRing, degree_slack: int = DEFAULT_DEGREE_SLACK) -> Membership:
    return ring.ideal_member(p, degree_slack)
