"""Explicit paths of additive-group actions between rational points.

Two recipes are automated:

* ``gamma`` paths on hypersurfaces with an exponent-one variable ``T_kp``:
  each coordinate outside group ``k`` is moved by ``exp(s gamma)``, a
  translation by ``s c_k dT_k/dT_kp``; the pivot ``T_kp`` follows from the
  equation.
* ``delta`` paths on ``c_0 A^2 + c_1 B^2 + c_2 T_2^{l_2}`` (split
  coefficients): the group-2 coordinates are matched with ``delta_{i+-}``,
  then ``alpha`` with ``delta_{1+}``, then ``T_21`` with ``delta_{1-}``.  A
  case-one repair is used when both square-root pivots vanish.

Anything else is reported as not covered.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import as_rational, rational_text
from .derivations import exp_automorphism, iterate_chain
from .lnd import (
    PreconditionError,
    SignPatternError,
    Witness,
    alpha_beta,
    witness_case1,
    witness_delta_pm,
    witness_gamma,
)
from .varieties import TrinomialHypersurface, _is_even_with_two


class OffVariety(ValueError):
    """A point does not satisfy the defining equation."""


@dataclass
class OrbitStep:
    witness: Witness
    t: Fraction
    point: tuple  # the point after this step

    def to_json(self) -> dict:
        return {
            "tag": self.witness.tag,
            "params": self.witness.params,
            "images": self.witness.derivation.to_json()["images"],
            "t": rational_text(self.t),
            "point": [rational_text(c) for c in self.point],
        }


@dataclass
class OrbitPath:
    source: tuple
    target: tuple
    steps: list = field(default_factory=list)
    recipe: str = "identity"

    @property
    def endpoint(self) -> tuple:
        return self.steps[-1].point if self.steps else self.source

    def replay(self) -> tuple:
        """Recompute the endpoint from the recorded exponentials."""
        pt = self.source
        for st in self.steps:
            pt = exp_automorphism(st.witness.derivation, st.t).on_point(pt)
        return pt

    def to_json(self) -> dict:
        return {
            "result": "path",
            "recipe": self.recipe,
            "source": [rational_text(c) for c in self.source],
            "target": [rational_text(c) for c in self.target],
            "steps": [s.to_json() for s in self.steps],
        }


@dataclass
class NotCovered:
    reasons: list

    def to_json(self) -> dict:
        return {"result": "not-covered", "reasons": list(self.reasons)}


class _Skip(Exception):
    pass


def _point(X: TrinomialHypersurface, P: Sequence, label: str) -> tuple:
    pt = tuple(as_rational(c) for c in P)
    if len(pt) != X.space.size:
        raise OffVariety(f"{label} has {len(pt)} coordinates, expected {X.space.size}")
    if X.polynomial().evaluate(pt) != 0:
        raise OffVariety(f"{label} is not on the hypersurface")
    return pt


def _advance(X, path: OrbitPath, w: Witness, t) -> tuple:
    t = as_rational(t)
    pt = exp_automorphism(w.derivation, t).on_point(path.endpoint)
    if X.polynomial().evaluate(pt) != 0:
        raise AssertionError("an orbit step left the hypersurface")
    path.steps.append(OrbitStep(w, t, pt))
    return pt


def _rational_roots(coeffs: Sequence[Fraction], limit: int = 10**12) -> list:
    """Rational roots of ``sum coeffs[k] s^k``; empty if the constant or leading
    coefficient is too large to enumerate divisors."""
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if len(coeffs) < 2:
        return []
    if coeffs[0] == 0:
        return [Fraction(0)] + [r for r in _rational_roots(coeffs[1:], limit) if r]
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    a0, an = abs(ints[0]), abs(ints[-1])
    if max(a0, an) > limit:
        return []

    def divisors(n):
        out = set()
        for k in range(1, math.isqrt(n) + 1):
            if n % k == 0:
                out.update((k, n // k))
        return out

    roots = set()
    for p in divisors(a0):
        for q in divisors(an):
            for r in (Fraction(p, q), Fraction(-p, q)):
                if sum(c * r**k for k, c in enumerate(ints)) == 0:
                    roots.add(r)
    return sorted(roots)


# -- gamma paths ------------------------------------------------------------------


def _gamma_path(X: TrinomialHypersurface, P: tuple, Q: tuple, k: int, p: int) -> OrbitPath:
    sp = X.space
    pivot = X.var(k, p)
    fixed = [v for v in sp.group_vars(k) if v != pivot]
    if any(P[v] != Q[v] for v in fixed):
        raise _Skip(f"pivot T_{k}{p}: the other coordinates of group {k} differ between P and Q")
    if any(P[v] == 0 for v in fixed):
        raise _Skip(f"pivot T_{k}{p}: a fixed coordinate of group {k} vanishes")
    path = OrbitPath(P, Q, recipe="gamma")
    speed = X.monomial(k).diff(pivot).scale(X.coeffs[k])
    for i in range(3):
        if i == k:
            continue
        for j in range(1, len(X.groups[i]) + 1):
            v = X.var(i, j)
            cur = path.endpoint
            if cur[v] == Q[v]:
                continue
            w = witness_gamma(X, i, j, k, p)
            w.verify()
            _advance(X, path, w, (Q[v] - cur[v]) / speed.evaluate(cur))
    if path.endpoint != Q:
        raise AssertionError("gamma path did not reach the target")
    return path


# -- delta paths ------------------------------------------------------------------


def _square_position(group: tuple) -> int:
    return group.index(2) + 1


def _delta_path(X: TrinomialHypersurface, P: tuple, Q: tuple, g0: int, g1: int) -> OrbitPath:
    g2 = ({0, 1, 2} - {g0, g1}).pop()
    sp = X.space
    if X.free_term or not (_is_even_with_two(X.groups[g0]) and _is_even_with_two(X.groups[g1])):
        raise _Skip(f"groups {g0}, {g1}: not of shape (2, even, ...)")
    a, b = _square_position(X.groups[g0]), _square_position(X.groups[g1])
    x, y = X.var(g0, a), X.var(g1, b)
    fixed = [v for v in list(sp.group_vars(g0)) + list(sp.group_vars(g1)) if v not in (x, y)]
    if any(P[v] != Q[v] or P[v] == 0 for v in fixed):
        raise _Skip(f"groups {g0}, {g1}: fixed coordinates differ or vanish")
    if any(Q[v] == 0 for v in range(sp.size)):
        raise _Skip("the target has a zero coordinate")
    groups, pos = (g0, g1, g2), (a, b)
    try:
        plus = [witness_delta_pm(X, i, "+", groups, pos) for i in range(1, len(X.groups[g2]) + 1)]
        minus = [witness_delta_pm(X, i, "-", groups, pos) for i in range(1, len(X.groups[g2]) + 1)]
    except SignPatternError as exc:
        raise _Skip(f"groups {g0}, {g1}: {exc}") from None
    for w in plus + minus:
        w.verify()
    path = OrbitPath(P, Q, recipe="delta")

    # match T_{g2,i} one at a time
    for i in range(1, len(X.groups[g2]) + 1):
        z = X.var(g2, i)
        cur = path.endpoint
        if cur[z] == Q[z]:
            continue
        if cur[x] == 0 and cur[y] == 0:
            _repair(X, path, g1, b, g2, i)
            cur = path.endpoint
        for w in (plus[i - 1], minus[i - 1]):
            speed = w.derivation.images[z].evaluate(cur)
            if speed:
                _advance(X, path, w, (Q[z] - cur[z]) / speed)
                break
        else:
            raise _Skip(f"delta_{i}+- both vanish at an intermediate point")

    # match alpha with delta_{1+}, a polynomial equation in the time
    alpha, _ = alpha_beta(X, groups)
    cur = path.endpoint
    target = alpha.evaluate(Q)
    if alpha.evaluate(cur) != target:
        chain = iterate_chain(plus[0].derivation, alpha)
        coeffs = [alpha.evaluate(cur) - target]
        for k, term in enumerate(chain, start=1):
            coeffs.append(term.evaluate(cur) / math.factorial(k))
        roots = _rational_roots(coeffs)
        if not roots:
            raise _Skip("the alpha-matching time is not rational")
        _advance(X, path, plus[0], roots[0])

    # match T_{g2,1} with delta_{1-}, which keeps alpha
    z = X.var(g2, 1)
    cur = path.endpoint
    if cur[z] != Q[z]:
        speed = minus[0].derivation.images[z].evaluate(cur)
        if not speed:
            raise _Skip("delta_1- does not move T_21 at the intermediate point")
        _advance(X, path, minus[0], (Q[z] - cur[z]) / speed)
    if path.endpoint != Q:
        raise _Skip("delta path ended at a different point with the same invariants")
    return path


def _repair(X, path: OrbitPath, g1: int, b: int, g2: int, i: int) -> None:
    """Both pivots vanish: move ``T_{g1,b}`` off zero with the case-one
    witness on the unique vanishing exponent-one ``T_{g2,k}``, ``k >= i``."""
    cur = path.endpoint
    zeros = [k for k in range(1, len(X.groups[g2]) + 1) if cur[X.var(g2, k)] == 0]
    if len(zeros) != 1 or zeros[0] < i or X.groups[g2][zeros[0] - 1] != 1:
        raise _Skip("zero-coordinate repair does not apply")
    w = witness_case1(X, g2, zeros[0], partner=(g1, b))
    w.verify()
    if not w.derivation.images[X.var(g1, b)].evaluate(cur):
        raise _Skip("zero-coordinate repair does not move the pivot")
    _advance(X, path, w, 1)


# -- entry point ------------------------------------------------------------------


def orbit_path(X: TrinomialHypersurface, P: Sequence, Q: Sequence):
    """An :class:`OrbitPath` from ``P`` to ``Q`` or :class:`NotCovered`.

    Raises :class:`OffVariety` if either point is not on ``X``.
    """
    if not isinstance(X, TrinomialHypersurface):
        raise PreconditionError("shape", "orbit paths are implemented for hypersurfaces")
    if X.slack:
        raise PreconditionError("shape", "orbit paths are not implemented with slack variables")
    P = _point(X, P, "source")
    Q = _point(X, Q, "target")
    if P == Q:
        return OrbitPath(P, Q)
    reasons = []
    for k in range(3):
        for p, e in enumerate(X.groups[k], start=1):
            if e != 1:
                continue
            try:
                return _gamma_path(X, P, Q, k, p)
            except _Skip as exc:
                reasons.append(str(exc))
    for g0, g1 in ((0, 1), (0, 2), (1, 2)):
        try:
            return _delta_path(X, P, Q, g0, g1)
        except _Skip as exc:
            reasons.append(str(exc))
    if not reasons:
        reasons.append("no exponent-one variable and no pair of (2, even) groups")
    return NotCovered(reasons)
