"""Exact rational arithmetic, sparse multivariate polynomials and integer kernels.

Coefficients are :class:`fractions.Fraction` (or plain ``int``, which compares
and hashes identically).  Polynomials live over a :class:`VariableSpace` whose
variables are grouped as ``T_ij`` (group ``i``, position ``j``) followed by
slack variables ``S_k``.
"""
from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence, Union

Rational = Union[int, Fraction]
Monomial = tuple  # tuple[int, ...]


class SpaceMismatch(ValueError):
    """Operands live over different variable spaces."""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def rational_text(value: Rational) -> str:
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _group_var_name(i: int, j: int) -> str:
    if i < 10 and j < 10:
        return f"T_{i}{j}"
    return f"T_{i}_{j}"


@dataclass(frozen=True)
class VariableSpace:
    """Ordered variables ``T_ij`` grouped by ``groups`` plus ``slack`` variables.

    ``first`` is the label of the first group (0 for hypersurfaces and Type 2
    varieties, 1 for Type 1).  ``names`` overrides the generated names; it is
    used for suspension spaces over arbitrary bases.
    """

    groups: tuple = ()
    slack: int = 0
    first: int = 0
    names: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(int(n) for n in self.groups))
        if any(n < 0 for n in self.groups) or self.slack < 0:
            raise ValueError("group sizes and slack count must be nonnegative")
        if self.names is None:
            names = []
            for offset, n in enumerate(self.groups):
                names.extend(_group_var_name(self.first + offset, j + 1) for j in range(n))
            names.extend(f"S_{k + 1}" for k in range(self.slack))
            object.__setattr__(self, "names", tuple(names))
        else:
            object.__setattr__(self, "names", tuple(self.names))
            if len(self.names) != sum(self.groups) + self.slack:
                raise ValueError("names do not match the number of variables")
            if len(set(self.names)) != len(self.names):
                raise ValueError("duplicate variable names")

    @classmethod
    def affine(cls, names: Sequence[str]) -> "VariableSpace":
        """A space of ungrouped variables with the given names."""
        return cls(groups=(len(names),), names=tuple(names))

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def group_offset(self, label: int) -> int:
        pos = label - self.first
        if not 0 <= pos < len(self.groups):
            raise IndexError(f"no group {label}")
        return sum(self.groups[:pos])

    def var(self, label: int, position: int) -> int:
        """Flat index of ``T_{label,position}`` (position is 1-based)."""
        pos = label - self.first
        if not 0 <= pos < len(self.groups) or not 1 <= position <= self.groups[pos]:
            raise IndexError(f"no variable T_{label}{position}")
        return self.group_offset(label) + position - 1

    def group_vars(self, label: int) -> range:
        start = self.group_offset(label)
        return range(start, start + self.groups[label - self.first])

    def slack_var(self, k: int) -> int:
        if not 1 <= k <= self.slack:
            raise IndexError(f"no slack variable S_{k}")
        return sum(self.groups) + k - 1

    def locate(self, index: int) -> tuple:
        """Inverse of :meth:`var`: ``("T", i, j)`` or ``("S", k)``."""
        if not 0 <= index < self.size:
            raise IndexError(index)
        for offset, n in enumerate(self.groups):
            if index < n:
                return ("T", self.first + offset, index + 1)
            index -= n
        return ("S", index + 1)

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly.constant(self, 1)

    def gen(self, index_or_name) -> "Poly":
        i = self.index(index_or_name) if isinstance(index_or_name, str) else index_or_name
        if not 0 <= i < self.size:
            raise IndexError(i)
        e = [0] * self.size
        e[i] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self) -> list:
        return [self.gen(i) for i in range(self.size)]


def grlex_key(m: Monomial):
    """Sort key of the graded lexicographic order (variable 0 highest)."""
    return (sum(m), m)


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class Poly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("space", "terms", "_hash")

    def __init__(self, space: VariableSpace, terms: Mapping | None = None):
        self.space = space
        clean = {}
        if terms:
            n = space.size
            for m, c in terms.items():
                if c:
                    if len(m) != n:
                        raise ValueError("exponent vector length does not match the space")
                    clean[tuple(m)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, space, terms):
        p = cls.__new__(cls)
        p.space = space
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, space: VariableSpace, value) -> "Poly":
        value = as_rational(value) if not isinstance(value, int) else value
        return cls._raw(space, {(0,) * space.size: value} if value else {})

    @classmethod
    def monomial(cls, space: VariableSpace, exps: Sequence[int], coeff=1) -> "Poly":
        return cls(space, {tuple(exps): coeff})

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return Fraction(next(iter(self.terms.values()), 0))

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self) -> Fraction:
        return Fraction(self.terms[self.leading_monomial()])

    def variables(self) -> set:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    # -- arithmetic ----------------------------------------------------
    def _check(self, other: "Poly"):
        if self.space is not other.space and self.space != other.space:
            raise SpaceMismatch("polynomials over different variable spaces")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.space, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m, 0) + c
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return Poly._raw(self.space, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.space, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        if not c:
            return Poly._raw(self.space, {})
        return Poly._raw(self.space, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict = {}
        get = terms.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple([a + b for a, b in zip(m1, m2)])
                v = get(m, 0) + c1 * c2
                terms[m] = v
        return Poly._raw(self.space, {m: c for m, c in terms.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / as_rational(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.space.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, m: Monomial, c=1) -> "Poly":
        return Poly._raw(
            self.space,
            {tuple([a + b for a, b in zip(k, m)]): v * c for k, v in self.terms.items()},
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.space, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- calculus and substitution ------------------------------------
    def diff(self, v: int) -> "Poly":
        """Formal partial derivative with respect to variable index ``v``."""
        if not 0 <= v < self.space.size:
            raise IndexError(f"invalid variable index {v}")
        terms = {}
        for m, c in self.terms.items():
            e = m[v]
            if e:
                k = list(m)
                k[v] = e - 1
                terms[tuple(k)] = c * e
        return Poly._raw(self.space, terms)

    def substitute(self, assignment: Mapping, target: VariableSpace | None = None) -> "Poly":
        """Replace variables by polynomials or rationals.

        ``assignment`` maps variable indices (or names) to a :class:`Poly` over
        ``target`` (default: this space) or to a rational.  Unassigned variables
        are kept, which requires ``target`` to equal this space.
        """
        target = target or self.space
        subst = {}
        for key, val in assignment.items():
            i = self.space.index(key) if isinstance(key, str) else key
            if isinstance(val, Poly):
                if val.space != target:
                    raise SpaceMismatch("substituted value lives over another space")
                subst[i] = val
            else:
                subst[i] = Poly.constant(target, as_rational(val))
        if target != self.space and len(subst) != self.space.size:
            raise SpaceMismatch("every variable must be assigned when changing spaces")
        powers: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = subst[i] ** e
            return powers[key]

        result = target.zero()
        for m, c in self.terms.items():
            kept = [0] * target.size
            term = Poly.constant(target, c)
            for i, e in enumerate(m):
                if not e:
                    continue
                if i in subst:
                    term = term * power(i, e)
                else:
                    kept[i] = e
            if any(kept):
                term = term.mul_monomial(tuple(kept))
            result = result + term
        return result

    def evaluate(self, point: Sequence) -> Fraction:
        """Value at a rational point given as a full coordinate sequence."""
        if len(point) != self.space.size:
            raise ValueError("point dimension does not match the space")
        pt = [as_rational(x) if not isinstance(x, int) else x for x in point]
        total = Fraction(0)
        for m, c in self.terms.items():
            v = Fraction(c)
            for x, e in zip(pt, m):
                if e:
                    v *= x**e
            total += v
        return total

    def embed(self, target: VariableSpace, index_map: Sequence[int]) -> "Poly":
        """Rename variables: variable ``i`` becomes ``index_map[i]`` of ``target``."""
        terms = {}
        for m, c in self.terms.items():
            k = [0] * target.size
            for i, e in enumerate(m):
                if e:
                    k[index_map[i]] += e
            k = tuple(k)
            terms[k] = terms.get(k, 0) + c
        return Poly._raw(target, {m: c for m, c in terms.items() if c})

    # -- text ------------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        names = self.space.names
        out = []
        for m, c in self.sorted_terms():
            q = Fraction(c)
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(names[i])
                elif e:
                    factors.append(f"{names[i]}^{e}")
            mag = abs(q)
            if factors:
                body = "*".join(factors)
                if mag != 1:
                    body = f"{rational_text(mag)}*{body}"
            else:
                body = rational_text(mag)
            if not out:
                out.append(body if q > 0 else f"-{body}")
            else:
                out.append(f"+ {body}" if q > 0 else f"- {body}")
        return " ".join(out)

    __str__ = to_text

    def __repr__(self):
        return f"Poly({self.to_text()!r})"

    @classmethod
    def parse(cls, text: str, space: VariableSpace) -> "Poly":
        """Parse an expression using ``+ - * / ^`` (or ``**``), parentheses,
        integer literals and the space's variable names.  Division is allowed
        only by constants."""
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ValueError(f"cannot parse polynomial {text!r}") from exc
        return _eval_node(tree.body, space)


def _eval_node(node, space: VariableSpace) -> Poly:
    if isinstance(node, ast.BinOp):
        left = _eval_node(node.left, space)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise ValueError("exponents must be integer literals")
            return left ** node.right.value
        right = _eval_node(node.right, space)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right.is_constant() or right.is_zero():
                raise ValueError("division only by nonzero constants")
            return left / right.constant_value()
        raise ValueError(f"unsupported operator {type(node.op).__name__}")
    if isinstance(node, ast.UnaryOp):
        inner = _eval_node(node.operand, space)
        if isinstance(node.op, ast.USub):
            return -inner
        if isinstance(node.op, ast.UAdd):
            return inner
        raise ValueError("unsupported unary operator")
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Poly.constant(space, node.value)
    if isinstance(node, ast.Name):
        return space.gen(space.index(node.id))
    raise ValueError(f"unsupported syntax in polynomial: {ast.dump(node)}")


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def partial_derivative(p: Poly, v) -> Poly:
    if isinstance(v, str):
        v = p.space.index(v)
    return p.diff(v)


def substitute(p: Poly, assignment: Mapping, target: VariableSpace | None = None) -> Poly:
    return p.substitute(assignment, target)


def gcd_tuple(values: Iterable[int]) -> int:
    values = list(values)
    if not values:
        raise ValueError("gcd of an empty tuple")
    if any(v < 1 for v in values):
        raise ValueError("entries must be positive integers")
    return reduce(math.gcd, values)


# -- integer lattices ------------------------------------------------------


def _row_echelon(rows: list, ncols: int, transform: list | None = None) -> list:
    """Integer row echelon form by unimodular row operations, in place.

    Pivots are made positive and entries above each pivot are reduced into
    ``[0, pivot)``, i.e. the nonzero rows come out in Hermite normal form.
    ``transform`` (if given) receives the same row operations.  Returns the
    list of pivot columns.
    """
    pivots = []
    r = 0
    for col in range(ncols):
        if r >= len(rows):
            break
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(rows[i][col]))
            rows[r], rows[piv] = rows[piv], rows[r]
            if transform is not None:
                transform[r], transform[piv] = transform[piv], transform[r]
            done = True
            for i in range(r + 1, len(rows)):
                if rows[i][col]:
                    q = rows[i][col] // rows[r][col]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    if transform is not None:
                        transform[i] = [a - q * b for a, b in zip(transform[i], transform[r])]
                    if rows[i][col]:
                        done = False
            if done:
                break
        if r < len(rows) and rows[r][col]:
            if rows[r][col] < 0:
                rows[r] = [-a for a in rows[r]]
                if transform is not None:
                    transform[r] = [-a for a in transform[r]]
            for i in range(r):
                q = rows[i][col] // rows[r][col]
                if q:
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    if transform is not None:
                        transform[i] = [a - q * b for a, b in zip(transform[i], transform[r])]
            pivots.append(col)
            r += 1
    return pivots


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list:
    """Row-style Hermite normal form; zero rows are dropped."""
    rows = [list(map(int, r)) for r in rows]
    if not rows:
        return []
    _row_echelon(rows, len(rows[0]))
    return [r for r in rows if any(r)]


def integer_kernel_basis(matrix: Sequence[Sequence[int]], ncols: int | None = None) -> list:
    """Hermite-reduced Z-basis of ``{v in Z^n : M v = 0}``.

    Rows of the unimodular transform that annihilate ``M^T`` span the integer
    kernel; the basis is then brought into Hermite normal form so the result
    is deterministic.
    """
    rows = [list(map(int, r)) for r in matrix]
    if ncols is None:
        if not rows:
            raise ValueError("ncols is required for an empty matrix")
        ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    if not rows:
        return [tuple(1 if i == j else 0 for j in range(ncols)) for i in range(ncols)]
    transposed = [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]
    transform = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    _row_echelon(transposed, len(rows), transform)
    kernel = [transform[i] for i in range(ncols) if not any(transposed[i])]
    return [tuple(r) for r in hermite_normal_form(kernel)]


def integer_solve(basis: Sequence[Sequence[int]], target: Sequence[int]):
    """Integer coordinates of ``target`` in the lattice spanned by ``basis``
    (rows, linearly independent), or ``None`` if it is not a lattice vector."""
    k = len(basis)
    if k == 0:
        return () if not any(target) else None
    coeffs = rational_solve([list(col) for col in zip(*basis)], list(target))
    if coeffs is None or any(c.denominator != 1 for c in coeffs):
        return None
    return tuple(int(c) for c in coeffs)


def rational_solve(matrix: Sequence[Sequence], rhs: Sequence):
    """One exact solution of ``A x = b`` over Q (free variables set to 0), or None."""
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if aug[i][col]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    if any(all(x == 0 for x in row[:-1]) and row[-1] for row in aug):
        return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = aug[i][-1]
    return x


def integer_matrix_rank(rows: Sequence[Sequence[int]]) -> int:
    return len(hermite_normal_form(rows))


def rational_power_root(q: Fraction, k: int):
    """Exact ``k``-th root of a rational, or None when it is irrational."""
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    sign = 1
    if q < 0:
        if k % 2 == 0:
            return None
        sign = -1
        q = -q
    num = _int_root(q.numerator, k)
    den = _int_root(q.denominator, k)
    if num is None or den is None:
        return None
    return sign * Fraction(num, den)


def _int_root(n: int, k: int):
    if n < 0:
        return None
    r = round(n ** (1.0 / k)) if n < 2**52 else _int_root_newton(n, k)
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


def _int_root_newton(n: int, k: int) -> int:
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def poly_power_root(p: Poly, k: int):
    """Return ``g`` with ``g^k == p / LC(p)`` when one exists over Q, else None.

    Builds the root term by term from the leading monomial downward.
    """
    if p.is_zero():
        return p.space.zero()
    lc = p.leading_coefficient()
    target = p.scale(1 / lc)
    lm = target.leading_monomial()
    if any(e % k for e in lm):
        return None
    root_lm = tuple(e // k for e in lm)
    g = Poly.monomial(p.space, root_lm)
    denom_mono = tuple(e * (k - 1) for e in root_lm)
    for _ in range(len(target.terms) * (sum(lm) + 2) + 4):
        diff = target - g**k
        if diff.is_zero():
            return g
        m = diff.leading_monomial()
        if grlex_key(m) >= grlex_key(lm) or not monomial_divides(denom_mono, m):
            return None
        q = monomial_div(m, denom_mono)
        if grlex_key(q) >= grlex_key(root_lm):
            return None
        g = g + Poly.monomial(p.space, q, Fraction(diff.terms[m]) / k)
    return None
