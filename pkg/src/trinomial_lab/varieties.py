"""Descriptors for trinomial hypersurfaces, trinomial varieties and suspensions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .algebra import (
    Poly,
    VariableSpace,
    as_rational,
    gcd_tuple,
    poly_power_root,
    rational_text,
)
from .quotient import PresentedRing


class InvalidDescriptor(ValueError):
    """Descriptor data violates the structural constraints."""


def _monomial(space: VariableSpace, label: int, exps: Sequence[int]) -> Poly:
    e = [0] * space.size
    for v, l in zip(space.group_vars(label), exps):
        e[v] = l
    return Poly.monomial(space, e)


def _is_even_with_two(group: Sequence[int]) -> bool:
    """Shape ``(2, 2m_2, ..., 2m_n)``: nonempty, all even, contains a 2."""
    return bool(group) and all(l % 2 == 0 for l in group) and 2 in group


@dataclass(frozen=True)
class TrinomialHypersurface:
    """``c_0 T_0^{l_0} + c_1 T_1^{l_1} + c_2 T_2^{l_2} = 0`` in ``K^{n} x K^{slack}``.

    ``groups[i]`` lists the exponents ``l_i1, ..., l_in_i``.  Group 0 may be
    empty, in which case its monomial is the free term ``c_0``.
    """

    groups: tuple
    coeffs: tuple = (1, 1, 1)
    slack: int = 0

    def __post_init__(self):
        groups = tuple(tuple(int(l) for l in g) for g in self.groups)
        coeffs = tuple(as_rational(c) for c in self.coeffs)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "coeffs", coeffs)
        if len(groups) != 3 or len(coeffs) != 3:
            raise InvalidDescriptor("a trinomial hypersurface has exactly three groups and three coefficients")
        if not groups[1] or not groups[2]:
            raise InvalidDescriptor("groups 1 and 2 must be nonempty (n_1, n_2 >= 1)")
        if any(l < 1 for g in groups for l in g):
            raise InvalidDescriptor("exponents must be positive")
        if any(c == 0 for c in coeffs):
            raise InvalidDescriptor("coefficients must be nonzero")
        if self.slack < 0:
            raise InvalidDescriptor("slack count must be nonnegative")

    @cached_property
    def space(self) -> VariableSpace:
        return VariableSpace(tuple(len(g) for g in self.groups), self.slack, 0)

    @property
    def n(self) -> int:
        return sum(len(g) for g in self.groups)

    @property
    def free_term(self) -> bool:
        return not self.groups[0]

    def monomial(self, i: int) -> Poly:
        return _monomial(self.space, i, self.groups[i])

    def polynomial(self) -> Poly:
        sp = self.space
        f = sp.zero()
        for i in range(3):
            f = f + self.monomial(i).scale(self.coeffs[i])
        return f

    def defining_polynomials(self) -> list:
        return [self.polynomial()]

    @cached_property
    def ring(self) -> PresentedRing:
        return PresentedRing(self.space, [self.polynomial()])

    def var(self, i: int, j: int) -> int:
        return self.space.var(i, j)

    def d(self) -> tuple:
        """``d_i = gcd(l_i1, ..., l_in_i)``; ``None`` for an empty group."""
        return tuple(gcd_tuple(g) if g else None for g in self.groups)

    def with_coeffs(self, coeffs) -> "TrinomialHypersurface":
        return replace(self, coeffs=tuple(coeffs))

    def is_point(self, point: Sequence) -> bool:
        return self.polynomial().evaluate(point) == 0

    def to_json(self) -> dict:
        return {
            "kind": "hypersurface",
            "groups": [list(g) for g in self.groups],
            "coeffs": [rational_text(c) for c in self.coeffs],
            "slack": self.slack,
        }

    def label(self) -> str:
        return self.polynomial().to_text()


@dataclass(frozen=True)
class TrinomialVariety:
    """Trinomial variety of Type 1 (``a``: r distinct rationals, groups 1..r)
    or Type 2 (``A``: 2 x (r+1) matrix with pairwise independent columns,
    groups 0..r)."""

    type: int
    l: tuple
    a: tuple = ()
    A: tuple = ()
    slack: int = 0

    def __post_init__(self):
        l = tuple(tuple(int(x) for x in g) for g in self.l)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "a", tuple(as_rational(x) for x in self.a))
        object.__setattr__(self, "A", tuple(tuple(as_rational(x) for x in row) for row in self.A))
        if any(not g for g in l):
            raise InvalidDescriptor("every group must be nonempty")
        if any(x < 1 for g in l for x in g):
            raise InvalidDescriptor("exponents must be positive")
        if self.slack < 0:
            raise InvalidDescriptor("slack count must be nonnegative")
        if self.type == 1:
            r = len(l)
            if len(self.a) != r:
                raise InvalidDescriptor("Type 1 needs one constant a_i per group")
            if len(set(self.a)) != r:
                raise InvalidDescriptor("Type 1 constants must be pairwise distinct")
        elif self.type == 2:
            cols = len(l)
            if len(self.A) != 2 or any(len(row) != cols for row in self.A):
                raise InvalidDescriptor("Type 2 needs a 2 x (r+1) matrix")
            for i in range(cols):
                for j in range(i):
                    if self.A[0][i] * self.A[1][j] - self.A[0][j] * self.A[1][i] == 0:
                        raise InvalidDescriptor("columns of A must be pairwise linearly independent")
        else:
            raise InvalidDescriptor("type must be 1 or 2")
        if self.r < 2:
            raise InvalidDescriptor("r must be at least 2 (at least one relation)")

    @property
    def q(self) -> int:
        return 1 if self.type == 1 else 0

    @property
    def r(self) -> int:
        return len(self.l) if self.type == 1 else len(self.l) - 1

    @property
    def labels(self) -> range:
        return range(self.q, self.r + 1)

    def group(self, i: int) -> tuple:
        return self.l[i - self.q]

    @cached_property
    def space(self) -> VariableSpace:
        return VariableSpace(tuple(len(g) for g in self.l), self.slack, self.q)

    def monomial(self, i: int) -> Poly:
        return _monomial(self.space, i, self.group(i))

    def defining_polynomials(self) -> list:
        sp = self.space
        out = []
        if self.type == 1:
            a = dict(zip(self.labels, self.a))
            for i in range(1, self.r):
                out.append(self.monomial(i) - self.monomial(i + 1) - (a[i + 1] - a[i]))
        else:
            A = self.A
            for i in range(0, self.r - 1):
                t0, t1, t2 = (self.monomial(k) for k in (i, i + 1, i + 2))
                m0 = A[0][i + 1] * A[1][i + 2] - A[0][i + 2] * A[1][i + 1]
                m1 = A[0][i] * A[1][i + 2] - A[0][i + 2] * A[1][i]
                m2 = A[0][i] * A[1][i + 1] - A[0][i + 1] * A[1][i]
                out.append(t0.scale(m0) - t1.scale(m1) + t2.scale(m2))
        return out

    @cached_property
    def ring(self) -> PresentedRing:
        return PresentedRing(self.space, self.defining_polynomials())

    def d(self) -> tuple:
        return tuple(gcd_tuple(g) for g in self.l)

    def as_hypersurface(self) -> TrinomialHypersurface:
        """Re-encode an ``r = 2`` variety as a single trinomial."""
        if self.r != 2:
            raise InvalidDescriptor("only r = 2 varieties are hypersurfaces")
        if self.type == 1:
            a1, a2 = self.a
            return TrinomialHypersurface(((), self.l[0], self.l[1]), (-(a2 - a1), 1, -1), self.slack)
        (g,) = self.defining_polynomials()
        A = self.A
        c = (
            A[0][1] * A[1][2] - A[0][2] * A[1][1],
            -(A[0][0] * A[1][2] - A[0][2] * A[1][0]),
            A[0][0] * A[1][1] - A[0][1] * A[1][0],
        )
        return TrinomialHypersurface(self.l, c, self.slack)

    def to_json(self) -> dict:
        out = {"kind": "variety", "type": self.type, "l": [list(g) for g in self.l], "slack": self.slack}
        if self.type == 1:
            out["a"] = [rational_text(x) for x in self.a]
        else:
            out["A"] = [[rational_text(x) for x in row] for row in self.A]
        return out


def defining_polynomials(X) -> list:
    return X.defining_polynomials()


def descriptor_from_json(data: dict):
    """Parse the JSON descriptor schema (hypersurface or variety)."""
    if not isinstance(data, dict):
        raise InvalidDescriptor("descriptor must be a JSON object")
    kind = data.get("kind")
    try:
        slack = _strict_int(data.get("slack", 0), "slack")
        if kind == "hypersurface":
            groups = _strict_groups(data["groups"])
            coeffs = data.get("coeffs", ["1", "1", "1"])
            if not isinstance(coeffs, list):
                raise InvalidDescriptor("coeffs must be a list")
            return TrinomialHypersurface(groups, tuple(_strict_rational(c) for c in coeffs), slack)
        if kind == "variety":
            t = _strict_int(data["type"], "type")
            l = _strict_groups(data["l"])
            if t == 1:
                return TrinomialVariety(1, l, a=tuple(_strict_rational(x) for x in data["a"]), slack=slack)
            return TrinomialVariety(2, l, A=tuple(tuple(_strict_rational(x) for x in row) for row in data["A"]), slack=slack)
    except (KeyError, TypeError) as exc:
        raise InvalidDescriptor(f"malformed descriptor: {exc}") from exc
    raise InvalidDescriptor(f"unknown descriptor kind {kind!r}")


def _strict_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidDescriptor(f"{what} must be an integer")
    return value


def _strict_groups(groups) -> tuple:
    if not isinstance(groups, list) or not all(isinstance(g, list) for g in groups):
        raise InvalidDescriptor("groups must be a list of lists of exponents")
    return tuple(tuple(_strict_int(x, "exponent") for x in g) for g in groups)


def _strict_rational(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise InvalidDescriptor("rationals must be integers or 'num/den' strings")
    try:
        return as_rational(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InvalidDescriptor(str(exc)) from exc


# -- canonical form --------------------------------------------------------


@dataclass(frozen=True)
class Canonical:
    """Canonical hypersurface plus the relabelling that produced it.

    ``var_map[k]`` is the canonical index of original variable ``k``;
    ``group_map[i]`` is the canonical group label of original group ``i``.
    """

    hypersurface: TrinomialHypersurface
    var_map: tuple
    group_map: tuple

    def inverse_var_map(self) -> tuple:
        inv = [0] * len(self.var_map)
        for k, c in enumerate(self.var_map):
            inv[c] = k
        return tuple(inv)


def _group_key(group: tuple, coeff: Fraction) -> tuple:
    return (len(group), tuple(sorted(group, reverse=True)), coeff)


def canonical_form(X: TrinomialHypersurface) -> Canonical:
    """Sort exponents descending inside groups; order groups by
    (size, sorted exponents, coefficient), keeping an empty group at 0."""
    sp = X.space
    order_in_group = []
    for i, g in enumerate(X.groups):
        # stable: ties keep their original relative order
        order_in_group.append(sorted(range(len(g)), key=lambda j: -g[j]))
    labels = sorted(range(3), key=lambda i: (len(X.groups[i]) > 0, _group_key(X.groups[i], X.coeffs[i]), i))
    new_groups = tuple(tuple(X.groups[i][j] for j in order_in_group[i]) for i in labels)
    new_coeffs = tuple(X.coeffs[i] for i in labels)
    canon = TrinomialHypersurface(new_groups, new_coeffs, X.slack)
    var_map = [0] * sp.size
    group_map = [0] * 3
    for new_label, old in enumerate(labels):
        group_map[old] = new_label
        for new_pos, old_pos in enumerate(order_in_group[old]):
            var_map[sp.var(old, old_pos + 1)] = canon.space.var(new_label, new_pos + 1)
    for k in range(1, X.slack + 1):
        var_map[sp.slack_var(k)] = canon.space.slack_var(k)
    return Canonical(canon, tuple(var_map), tuple(group_map))


def permute_hypersurface(X: TrinomialHypersurface, group_perm: Sequence[int], position_perms: Sequence[Sequence[int]]):
    """Relabel: new group ``k`` is old group ``group_perm[k]``, with positions
    reordered by ``position_perms[old group]``.  An empty group must stay at 0.
    Returns the new hypersurface and the old->new variable index map."""
    groups = []
    coeffs = []
    for k in range(3):
        old = group_perm[k]
        perm = position_perms[old]
        groups.append(tuple(X.groups[old][j] for j in perm))
        coeffs.append(X.coeffs[old])
    Y = TrinomialHypersurface(tuple(groups), tuple(coeffs), X.slack)
    var_map = [0] * X.space.size
    for k in range(3):
        old = group_perm[k]
        for new_pos, old_pos in enumerate(position_perms[old]):
            var_map[X.space.var(old, old_pos + 1)] = Y.space.var(k, new_pos + 1)
    for s in range(1, X.slack + 1):
        var_map[X.space.slack_var(s)] = Y.space.slack_var(s)
    return Y, tuple(var_map)


# -- factoriality ------------------------------------------------------------


@dataclass(frozen=True)
class FactorialityVerdict:
    verdict: str  # "factorial" | "not factorial" | "criterion inapplicable"
    reason: str
    d: tuple = ()

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "reason": self.reason, "d": [x for x in self.d]}


def _pairwise_coprime(values) -> bool:
    vals = list(values)
    return all(math.gcd(vals[i], vals[j]) == 1 for i in range(len(vals)) for j in range(i))


def is_factorial(X) -> FactorialityVerdict:
    if isinstance(X, TrinomialHypersurface):
        d = X.d()
        if X.free_term:
            ok = d[1] == 1 and d[2] == 1
            reason = "free term: factorial iff gcd of each nonempty group is 1"
            return FactorialityVerdict("factorial" if ok else "not factorial", reason, d)
        ok = _pairwise_coprime(d)
        return FactorialityVerdict("factorial" if ok else "not factorial", "d_i pairwise coprime" if ok else "d_i not pairwise coprime", d)
    if isinstance(X, TrinomialVariety):
        d = X.d()
        if any(len(g) == 1 and g[0] == 1 for g in X.l):
            return FactorialityVerdict(
                "criterion inapplicable", "some group is a single variable with exponent 1 (n_i l_i1 = 1)", d
            )
        if X.type == 1:
            ok = all(x == 1 for x in d)
            return FactorialityVerdict("factorial" if ok else "not factorial", "Type 1: factorial iff all d_i = 1", d)
        ok = _pairwise_coprime(d)
        return FactorialityVerdict("factorial" if ok else "not factorial", "Type 2: factorial iff d_i pairwise coprime", d)
    raise TypeError("expected a trinomial hypersurface or variety")


# -- suspensions ---------------------------------------------------------------


@dataclass(frozen=True)
class AffineSpace:
    """The base ``K^n`` with named coordinates."""

    names: tuple

    @cached_property
    def space(self) -> VariableSpace:
        return VariableSpace.affine(self.names)

    @cached_property
    def ring(self) -> PresentedRing:
        return PresentedRing(self.space, [])

    def defining_polynomials(self) -> list:
        return []


@dataclass(frozen=True)
class PresentedVariety:
    """A generic presented ring, used for suspensions without trinomial shape."""

    space: VariableSpace
    relations: tuple

    @cached_property
    def ring(self) -> PresentedRing:
        return PresentedRing(self.space, list(self.relations))

    def defining_polynomials(self) -> list:
        return list(self.relations)


@dataclass(frozen=True)
class SuspensionSpec:
    """``Susp(base, f, k_1, ..., k_m) = V(y_1^{k_1} ... y_m^{k_m} - f)``."""

    base: object
    f: Poly
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(k) for k in self.weights))
        if not self.weights or any(k < 1 for k in self.weights):
            raise InvalidDescriptor("suspension weights must be positive and m >= 1")
        if self.f.space != self.base.space:
            raise InvalidDescriptor("f must live over the base space")
        if self.f.is_constant():
            raise InvalidDescriptor("f must be nonconstant")


@dataclass(frozen=True)
class Suspension:
    spec: SuspensionSpec
    presented: PresentedVariety
    y_vars: tuple
    irreducible: bool
    report: str
    trinomial: object = None  # TrinomialHypersurface | TrinomialVariety | None

    @property
    def ring(self) -> PresentedRing:
        return self.presented.ring

    @property
    def d(self) -> int:
        return gcd_tuple(self.spec.weights)


def _prime_divisors(n: int) -> list:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def suspension_irreducibility(f: Poly, weights: Sequence[int]) -> tuple:
    """Conservative irreducibility test for ``y^k - f``: returns (irreducible, reason)."""
    d = gcd_tuple(weights)
    if d == 1:
        return True, "gcd of weights is 1"
    for p in _prime_divisors(d):
        if poly_power_root(f, p) is not None:
            return False, f"possibly reducible: f is a constant times a {p}-th power and {p} divides gcd {d}"
    if d % 4 == 0:
        g4 = poly_power_root(f.scale(Fraction(-1, 4)), 4)
        if g4 is not None and f.leading_coefficient() < 0:
            return False, "possibly reducible: f = -4 g^4 and 4 divides the gcd"
    return True, f"f is not a p-th power for any prime p dividing gcd {d}"


def suspend(spec: SuspensionSpec, y_names: Sequence[str] | None = None) -> Suspension:
    base = spec.base
    bsp = base.space
    m = len(spec.weights)
    if y_names is None:
        y_names = [f"y_{k + 1}" for k in range(m)]
        taken = set(bsp.names)
        y_names = [n if n not in taken else f"{n}'" for n in y_names]
    sp = VariableSpace.affine(tuple(bsp.names) + tuple(y_names))
    emb = list(range(bsp.size))
    rels = [g.embed(sp, emb) for g in base.defining_polynomials()]
    ymono = [0] * sp.size
    for k, w in enumerate(spec.weights):
        ymono[bsp.size + k] = w
    rel = Poly.monomial(sp, ymono) - spec.f.embed(sp, emb)
    rels.append(rel)
    irreducible, reason = suspension_irreducibility(spec.f, spec.weights)
    presented = PresentedVariety(sp, tuple(rels))
    y_vars = tuple(range(bsp.size, sp.size))
    trinomial = _as_trinomial(spec, base)
    return Suspension(spec, presented, y_vars, irreducible, reason, trinomial)


def _as_trinomial(spec: SuspensionSpec, base):
    """Re-express the suspension as a trinomial descriptor when it has that shape."""
    f = spec.f
    if isinstance(base, AffineSpace):
        terms = [(m, c) for m, c in f.terms.items()]
        if len(terms) != 2:
            return None
        nonconst = [(m, c) for m, c in terms if any(m)]
        const = [(m, c) for m, c in terms if not any(m)]
        supports = [frozenset(i for i, e in enumerate(m) if e) for m, _ in nonconst]
        if len(nonconst) == 2 and supports[0] & supports[1]:
            return None
        # y^k - f = 0  <=>  (-f) + y^k = 0
        groups, coeffs, used = [], [], set()
        if const:
            groups.append(())
            coeffs.append(-Fraction(const[0][1]))
        for (m, c), sup in zip(nonconst, supports):
            idx = sorted(sup)
            used |= sup
            groups.append(tuple(m[i] for i in idx))
            coeffs.append(-Fraction(c))
        groups.append(spec.weights)
        coeffs.append(Fraction(1))
        slack = base.space.size - len(used)
        return TrinomialHypersurface(tuple(groups), tuple(coeffs), slack)
    if isinstance(base, TrinomialVariety) and base.type == 1 and base.slack == 0:
        r = base.r
        last = base.monomial(r)
        diff = f - last
        if diff.is_constant():
            p = diff.constant_value() if not diff.is_zero() else Fraction(0)
            a_new = base.a[-1] - p
            if a_new not in base.a:
                return TrinomialVariety(1, base.l + (spec.weights,), a=base.a + (a_new,))
    return None


# -- fibres -------------------------------------------------------------------


@dataclass(frozen=True)
class FiberDescriptor:
    """``X`` with ``T_ij`` deleted: its monomial is divided by ``T_ij^{l_ij}``
    and the coefficient becomes the transcendental unit ``unit``."""

    hypersurface: TrinomialHypersurface
    unit: str
    unit_group: int
    removed: tuple
    group_map: tuple


def fiber_variety(X: TrinomialHypersurface, group: int, position: int) -> FiberDescriptor:
    if not 0 <= group <= 2 or not 1 <= position <= len(X.groups[group]):
        raise IndexError(f"no variable T_{group}{position}")
    exps = X.groups[group]
    removed_exp = exps[position - 1]
    groups = [list(g) for g in X.groups]
    del groups[group][position - 1]
    coeffs = list(X.coeffs)
    labels = [0, 1, 2]
    if not groups[group] and group != 0:
        if groups[0]:
            # keep the empty group in position 0
            labels = [group] + [i for i in range(3) if i != group]
        else:
            raise InvalidDescriptor("deleting the variable leaves two free terms")
    new_groups = tuple(tuple(groups[i]) for i in labels)
    new_coeffs = tuple(coeffs[i] for i in labels)
    name = X.space.names[X.var(group, position)]
    Y = TrinomialHypersurface(new_groups, new_coeffs, X.slack)
    group_map = tuple(labels.index(i) for i in range(3))
    return FiberDescriptor(Y, f"{name}^{removed_exp}" if removed_exp != 1 else name, group_map[group], (group, position), group_map)
