"""Witness catalog: explicit LNDs on trinomial hypersurfaces and varieties,
suspension lifts and graded descent."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import Poly, VariableSpace, _row_echelon, integer_kernel_basis, rational_power_root, rational_text
from .derivations import (
    DEFAULT_NILPOTENCY_CAP,
    Derivation,
    Grading,
    Inadmissible,
    LndCertificate,
    NotLocallyNilpotent,
    check_admissible,
    derivation_degrees,
    partial_derivation,
    verify_lnd,
)
from .quotient import PresentedRing
from .varieties import (
    AffineSpace,
    InvalidDescriptor,
    Suspension,
    SuspensionSpec,
    TrinomialHypersurface,
    TrinomialVariety,
    _is_even_with_two,
    suspend,
)

TAGS = ("rt-case1", "rt-case2", "nenul-gamma", "dve-delta+", "dve-delta-", "prodol-lift", "nod-descent", "slack-partial")


class PreconditionError(ValueError):
    """The requested construction does not apply; ``clause`` names the violated condition."""

    def __init__(self, clause: str, message: str):
        self.clause = clause
        super().__init__(f"{clause}: {message}")


class SignPatternError(PreconditionError):
    """The coefficients do not give a rational square root; ``scaling`` says how to fix it."""

    def __init__(self, message: str, scaling: dict):
        self.scaling = scaling
        super().__init__("coefficient-pattern", message)


@dataclass
class Witness:
    """A catalog derivation together with the model it lives on.

    ``model`` is the hypersurface or variety whose ring carries the
    derivation; it differs from the input only by a recorded variable
    scaling (``scaling``) when the input coefficients are not split over Q.
    """

    tag: str
    derivation: Derivation
    model: object
    params: dict = field(default_factory=dict)
    scaling: dict | None = None

    @property
    def certificate(self) -> LndCertificate | None:
        return self.derivation.certificate

    def verify(self, cap: int = DEFAULT_NILPOTENCY_CAP) -> LndCertificate:
        return verify_lnd(self.derivation, cap)

    def to_json(self) -> dict:
        out = {
            "tag": self.tag,
            "params": self.params,
            "model": self.model.to_json() if hasattr(self.model, "to_json") else None,
            **self.derivation.to_json(),
        }
        if self.scaling is not None:
            out["scaling"] = self.scaling
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


def _images(space: VariableSpace, assignment: dict) -> list:
    imgs = [space.zero() for _ in range(space.size)]
    for v, p in assignment.items():
        imgs[v] = p
    return imgs


def _require_hypersurface(X):
    if not isinstance(X, TrinomialHypersurface):
        raise PreconditionError("shape", "a trinomial hypersurface is required")


def _check_var(X: TrinomialHypersurface, i: int, a: int) -> int:
    if not 0 <= i <= 2 or not 1 <= a <= len(X.groups[i]):
        raise PreconditionError("index", f"no variable T_{i}{a}")
    return X.var(i, a)


# -- case 1 ------------------------------------------------------------------


def witness_case1(X: TrinomialHypersurface, i: int, a: int, partner: tuple | None = None) -> Witness:
    """``d(T_ia) = c_j dT_j/dT_jb``, ``d(T_jb) = -c_i dT_i/dT_ia`` for ``l_ia = 1``.

    The partner defaults to ``T_21`` (or ``T_11`` when ``i = 2``).
    """
    _require_hypersurface(X)
    x = _check_var(X, i, a)
    if X.groups[i][a - 1] != 1:
        raise PreconditionError("rt-1", f"exponent of T_{i}{a} is {X.groups[i][a - 1]}, not 1")
    j, b = partner if partner is not None else ((2, 1) if i != 2 else (1, 1))
    if j == i:
        raise PreconditionError("index", "partner must lie in another group")
    y = _check_var(X, j, b)
    Ti, Tj = X.monomial(i), X.monomial(j)
    ci, cj = X.coeffs[i], X.coeffs[j]
    imgs = _images(X.space, {x: Tj.diff(y).scale(cj), y: Ti.diff(x).scale(-ci)})
    d = Derivation(X.ring, imgs)
    return Witness("rt-case1", d, X, {"variable": [i, a], "partner": [j, b]})


def witness_gamma(X: TrinomialHypersurface, i: int, j: int, k: int = 2, p: int = 1) -> Witness:
    """``gamma(T_kp) = -c_i dT_i/dT_ij``, ``gamma(T_ij) = c_k dT_k/dT_kp`` where ``l_kp = 1``."""
    _require_hypersurface(X)
    z = _check_var(X, k, p)
    if X.groups[k][p - 1] != 1:
        raise PreconditionError("nenul-shape", f"T_{k}{p} must have exponent 1")
    if i == k:
        raise PreconditionError("nenul-shape", "T_ij must lie outside the group of the exponent-1 variable")
    x = _check_var(X, i, j)
    imgs = _images(
        X.space,
        {z: X.monomial(i).diff(x).scale(-X.coeffs[i]), x: X.monomial(k).diff(z).scale(X.coeffs[k])},
    )
    return Witness("nenul-gamma", Derivation(X.ring, imgs), X, {"moved": [i, j], "pivot": [k, p]})


# -- case 2 and the delta pair ------------------------------------------------


def sqrt_monomial(X: TrinomialHypersurface, i: int) -> Poly:
    """``sqrt(T_i^{l_i})`` for an all-even group."""
    if not X.groups[i] or any(l % 2 for l in X.groups[i]):
        raise PreconditionError("rt-2", f"group {i} is not all even")
    e = [0] * X.space.size
    for v, l in zip(X.space.group_vars(i), X.groups[i]):
        e[v] = l // 2
    return Poly.monomial(X.space, e)


def square_ratio(X: TrinomialHypersurface, i: int, j: int):
    """``mu`` with ``mu^2 = -c_j / c_i``, or None if it is not a rational square."""
    return rational_power_root(-X.coeffs[j] / X.coeffs[i], 2)


def split_model(X: TrinomialHypersurface, i: int, j: int, b: int) -> tuple:
    """Model with ``c_j`` replaced by ``-c_i``, plus the substitution relating it to ``X``.

    ``X`` becomes the model under ``T_jb = lambda * T_jb`` with
    ``lambda^2 = -c_i / c_j``; the scaling is returned as data and never
    performed, since ``lambda`` may be irrational.
    """
    coeffs = list(X.coeffs)
    coeffs[j] = -X.coeffs[i]
    Y = X.with_coeffs(coeffs)
    lam2 = -X.coeffs[i] / X.coeffs[j]
    lam = rational_power_root(lam2, 2)
    scaling = {
        "variable": X.space.names[X.var(j, b)],
        "substitution": f"{X.space.names[X.var(j, b)]} = lambda*{X.space.names[X.var(j, b)]}",
        "lambda_squared": rational_text(lam2),
        "lambda": rational_text(lam) if lam is not None else None,
    }
    return Y, scaling


def _case2_images(X: TrinomialHypersurface, i: int, a: int, j: int, b: int, t: int, c: int, nu: Fraction) -> list:
    x, y, z = X.var(i, a), X.var(j, b), X.var(t, c)
    A, B = sqrt_monomial(X, i), sqrt_monomial(X, j)
    Ap = A.diff(x)  # A / T_ia since T_ia appears to the first power in A
    Bp = B.diff(y)
    dC = X.monomial(t).diff(z)
    ci, ct = X.coeffs[i], X.coeffs[t]
    return _images(
        X.space,
        {
            x: (Bp * dC).scale(-ct),
            y: (Ap * dC).scale(-ct / nu),
            z: (Ap * Bp * (A - B.scale(nu))).scale(2 * ci),
        },
    )


def _case2_checks(X: TrinomialHypersurface, i: int, a: int, j: int, b: int, t: int, c: int):
    _require_hypersurface(X)
    if len({i, j, t}) != 3:
        raise PreconditionError("index", "groups i, j and t must be distinct")
    if X.free_term:
        raise PreconditionError("rt-2", "n_0 must be nonzero")
    _check_var(X, i, a)
    _check_var(X, j, b)
    _check_var(X, t, c)
    for g, pos in ((i, a), (j, b)):
        if not _is_even_with_two(X.groups[g]):
            raise PreconditionError("rt-2", f"group {g} is not of shape (2, even, ...)")
        if X.groups[g][pos - 1] != 2:
            raise PreconditionError("rt-2", f"T_{g}{pos} must have exponent 2")


def witness_case2(X: TrinomialHypersurface, i: int, a: int, j: int, b: int, t: int | None = None, c: int = 1) -> Witness:
    """Square-root witness on ``c_i A^2 + c_j B^2 + c_t C`` with ``A = sqrt(T_i)``,
    ``B = sqrt(T_j)``; needs ``-c_j/c_i = mu^2`` with ``mu`` rational.

    ``d(T_ia) = -c_t B' dC``, ``d(T_jb) = -(c_t/mu) A' dC``,
    ``d(T_tc) = 2 c_i A'B' (A - mu B)`` where ``A' = A/T_ia``, ``B' = B/T_jb``.
    """
    if t is None:
        t = ({0, 1, 2} - {i, j}).pop()
    _case2_checks(X, i, a, j, b, t, c)
    mu = square_ratio(X, i, j)
    if mu is None:
        _, scaling = split_model(X, i, j, b)
        raise SignPatternError(f"-c_{j}/c_{i} is not a square in Q", scaling)
    d = Derivation(X.ring, _case2_images(X, i, a, j, b, t, c, mu))
    return Witness("rt-case2", d, X, {"squares": [[i, a], [j, b]], "moved": [t, c], "mu": rational_text(mu)})


def witness_delta_pm(X: TrinomialHypersurface, i: int, sign: str, groups: Sequence[int] = (0, 1, 2), positions: Sequence[int] = (1, 1)) -> Witness:
    """``delta_{i+}`` / ``delta_{i-}``: the square-root witness moving ``T_{g2,i}``
    with ``nu = -mu`` (sign ``+``) or ``nu = mu`` (sign ``-``).

    ``delta_{i-}`` kills ``alpha = A - mu B``; ``delta_{i+}`` kills ``beta = A + mu B``.
    """
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    g0, g1, g2 = groups
    _case2_checks(X, g0, positions[0], g1, positions[1], g2, i)
    mu = square_ratio(X, g0, g1)
    if mu is None:
        _, scaling = split_model(X, g0, g1, positions[1])
        raise SignPatternError(f"-c_{g1}/c_{g0} is not a square in Q", scaling)
    nu = mu if sign == "-" else -mu
    d = Derivation(X.ring, _case2_images(X, g0, positions[0], g1, positions[1], g2, i, nu))
    return Witness(f"dve-delta{sign}", d, X, {"groups": list(groups), "positions": list(positions), "moved": [g2, i], "mu": rational_text(mu)})


def alpha_beta(X: TrinomialHypersurface, groups: Sequence[int] = (0, 1, 2)) -> tuple:
    """``(alpha, beta) = (A - mu B, A + mu B)``; ``c_i alpha beta = c_i A^2 + c_j B^2``."""
    g0, g1, _ = groups
    mu = square_ratio(X, g0, g1)
    if mu is None:
        raise PreconditionError("coefficient-pattern", "coefficients are not split")
    A, B = sqrt_monomial(X, g0), sqrt_monomial(X, g1)
    return A - B.scale(mu), A + B.scale(mu)


# -- slack ---------------------------------------------------------------------


def witness_slack(X) -> Witness:
    """``d/dS_1`` on a descriptor with at least one slack variable."""
    if X.slack < 1:
        raise PreconditionError("ridfac-1", "no slack variable")
    d = partial_derivation(X.ring, X.space.slack_var(1))
    return Witness("slack-partial", d, X, {"variable": X.space.names[X.space.slack_var(1)]})


# -- suspensions -----------------------------------------------------------------


def lift_suspension(d: Derivation, susp: Suspension) -> Witness:
    """Lift ``d`` on the base to ``Y = Susp(X, f, 1, k_2, ..., k_m)``:
    ``y_1 -> d(f)``, ``y_j -> 0`` and ``x -> d(x) y_2^{k_2}...y_m^{k_m}``."""
    spec = susp.spec
    if spec.weights[0] != 1:
        raise PreconditionError("prodol-weight", "the first suspension weight must be 1")
    if not susp.irreducible:
        raise PreconditionError("irreducibility", susp.report)
    base_space = spec.base.space
    if d.space != base_space:
        raise PreconditionError("shape", "derivation does not live on the suspension base")
    ring = susp.ring
    sp = ring.ambient
    emb = list(range(base_space.size))
    e = [0] * sp.size
    for k, w in zip(susp.y_vars[1:], spec.weights[1:]):
        e[k] = w
    yprod = Poly.monomial(sp, e)
    imgs = [sp.zero() for _ in range(sp.size)]
    for v, img in enumerate(d.images):
        imgs[v] = img.embed(sp, emb) * yprod
    imgs[susp.y_vars[0]] = d.apply(spec.f).embed(sp, emb)
    return Witness("prodol-lift", Derivation(ring, imgs), susp, {"weights": list(spec.weights)})


def suspension_torus_grading(susp: Suspension) -> Grading:
    """Grading by the torus acting on the ``y`` variables: ``deg y = column of P``
    where the rows of ``P`` span ``{s : sum k_i s_i = 0}``; base variables have degree 0."""
    k = susp.spec.weights
    d = susp.d
    P = integer_kernel_basis([[w // d for w in k]], len(k))
    sp = susp.ring.ambient
    rank = len(P)
    weights = [tuple([0] * rank) for _ in range(sp.size)]
    for idx, v in enumerate(susp.y_vars):
        weights[v] = tuple(P[r][idx] for r in range(rank))
    return Grading(sp, rank, tuple(weights))


@dataclass
class Descent:
    """``K[Y]_0 = K[X][h] / (h^d - f)`` with the descended derivation."""

    ring: PresentedRing
    witness: Witness
    h_var: int
    divisor: tuple
    degree: tuple


def _minimal_shift(P: list, k_red: Sequence[int], beta: Sequence[int]):
    """Least nonnegative ``s`` with ``P s = beta``; solutions differ by multiples of ``k_red``."""
    m = len(k_red)
    s0 = _integer_preimage(P, beta, m) if P else [0] * m
    if s0 is None:
        return None
    t = max(-(s0[i] // k_red[i]) for i in range(m))  # ceil(-s0_i / k_i)
    return tuple(s0[i] + t * k_red[i] for i in range(m))


def _integer_preimage(P: list, beta: Sequence[int], m: int):
    """Integers ``x`` with ``P x = beta`` (None if there are none)."""
    rows = [[P[r][i] for r in range(len(P))] for i in range(m)]
    transform = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    pivots = _row_echelon(rows, len(P), transform)
    target = list(beta)
    x = [0] * m
    for r, col in enumerate(pivots):
        if target[col] % rows[r][col]:
            return None
        q = target[col] // rows[r][col]
        target = [a - q * b for a, b in zip(target, rows[r])]
        x = [a + q * b for a, b in zip(x, transform[r])]
    if any(target):
        return None
    return x


def descend_nod(d: Derivation, susp: Suspension, cap: int = DEFAULT_NILPOTENCY_CAP) -> Descent:
    """Descend a torus-homogeneous LND of ``Y = Susp(X, f, k)`` to ``K[Y]_0``.

    With ``beta = deg d`` and ``y^s`` the least monomial of degree ``beta``:
    ``delta(x) = d(x) / y^s`` and ``delta(h) = d(h) / y^s`` for ``h = y^{k/d}``.
    """
    if not susp.irreducible:
        raise PreconditionError("irreducibility", susp.report)
    if d.ring != susp.ring:
        raise PreconditionError("shape", "derivation is not defined on the suspension ring")
    g = suspension_torus_grading(susp)
    parts = derivation_degrees(d.normalized(), g)
    if len(parts) > 1:
        raise PreconditionError("nod-homogeneous", "derivation is not homogeneous for the suspension torus")
    beta = next(iter(parts)) if parts else tuple([0] * g.rank)
    k = susp.spec.weights
    dd = susp.d
    k_red = [w // dd for w in k]
    P = integer_kernel_basis([k_red], len(k))
    s = _minimal_shift([list(r) for r in P], k_red, beta)
    if s is None:
        raise PreconditionError("nod-homogeneous", "degree is not attained by a y-monomial")
    base = susp.spec.base
    bsp = base.space
    names = tuple(bsp.names) + (_fresh_name(bsp.names, "h"),)
    sp = VariableSpace.affine(names)
    emb = list(range(bsp.size))
    h = sp.gen(bsp.size)
    rels = [r.embed(sp, emb) for r in base.defining_polynomials()]
    rels.append(h ** dd - susp.spec.f.embed(sp, emb))
    ring0 = PresentedRing(sp, rels)
    yv = susp.y_vars

    def divide_down(p: Poly) -> Poly:
        out = sp.zero()
        for m, c in susp.ring.normal_form(p).terms.items():
            ye = [m[v] - si for v, si in zip(yv, s)]
            if any(e < 0 for e in ye):
                raise PreconditionError("nod-homogeneous", "image not divisible by the degree monomial")
            t, rem = None, None
            for e, kr in zip(ye, k_red):
                if e % kr:
                    rem = True
                    break
                q = e // kr
                if t is None:
                    t = q
                elif t != q:
                    rem = True
                    break
            if rem:
                raise PreconditionError("nod-homogeneous", "quotient is not a power of h")
            bm = [m[i] for i in range(bsp.size)] + [t or 0]
            out = out + Poly.monomial(sp, bm, c)
        return out

    imgs = [divide_down(d.images[v]) for v in range(bsp.size)]
    hmono = [0] * susp.ring.ambient.size
    for v, kr in zip(yv, k_red):
        hmono[v] = kr
    imgs.append(divide_down(d.apply(Poly.monomial(susp.ring.ambient, hmono))))
    delta = Derivation(ring0, imgs)
    verify_lnd(delta, cap)
    return Descent(ring0, Witness("nod-descent", delta, AffineSpace(names), {"divisor": list(s), "degree": list(beta)}), bsp.size, s, beta)


def _fresh_name(taken, stem: str) -> str:
    name, k = stem, 0
    while name in taken:
        k += 1
        name = f"{stem}{k}"
    return name


# -- varieties (iterated lifts) --------------------------------------------------


def _exponent_one_position(group: tuple):
    for pos, l in enumerate(group, start=1):
        if l == 1:
            return pos
    return None


def variety_witness(V: TrinomialVariety) -> Witness:
    """Nonrigidity witness for the trinomial-variety clauses, built by iterated
    weight-1 suspension lifts over the affine base of the exceptional group(s).

    Type 1: ``T_i^{l_i} = T_b^{l_b} + (a_b - a_i)`` over ``K^{n_b}``.
    Type 2: ``T_i^{l_i} = p_i T_b^{l_b} + q_i T_c^{l_c}`` over ``K^{n_b + n_c}``.
    """
    if V.slack:
        return witness_slack(V)
    labels = list(V.labels)
    lacking = [i for i in labels if _exponent_one_position(V.group(i)) is None]
    need = 1 if V.type == 1 else 2
    if len(lacking) > need:
        raise PreconditionError(
            "ridfac-2" if V.type == 1 else "ridfac-3",
            f"{len(lacking)} groups have no exponent-1 variable",
        )
    base_groups = list(lacking)
    for i in labels:
        if len(base_groups) >= need:
            break
        if i not in base_groups:
            base_groups.append(i)
    base_groups.sort()
    sp = V.space
    imgs = {v: sp.zero() for v in range(sp.size)}
    imgs[sp.var(base_groups[0], 1)] = sp.one()
    if V.type == 1:
        b = base_groups[0]
        a = dict(zip(V.labels, V.a))
        fs = {i: V.monomial(b) + (a[b] - a[i]) for i in labels if i != b}
    else:
        b, c = base_groups
        Acol = {i: (V.A[0][i], V.A[1][i]) for i in labels}
        fs = {}
        for i in labels:
            if i in (b, c):
                continue
            det = Acol[b][0] * Acol[c][1] - Acol[c][0] * Acol[b][1]
            p = (Acol[i][0] * Acol[c][1] - Acol[c][0] * Acol[i][1]) / det
            q = (Acol[b][0] * Acol[i][1] - Acol[i][0] * Acol[b][1]) / det
            fs[i] = V.monomial(b).scale(p) + V.monomial(c).scale(q)
    order = [i for i in labels if i not in base_groups]
    for i in order:
        pos = _exponent_one_position(V.group(i))
        y1 = sp.var(i, pos)
        others = [v for v in sp.group_vars(i) if v != y1]
        e = [0] * sp.size
        for v in others:
            e[v] = V.group(i)[v - sp.group_offset(i)]
        yprod = Poly.monomial(sp, e)
        # current derivation applied to f_i (only base and earlier groups occur in f_i)
        df = sp.zero()
        for v in fs[i].variables():
            df = df + fs[i].diff(v) * imgs[v]
        for v in list(imgs):
            if imgs[v]:
                imgs[v] = imgs[v] * yprod
        imgs[y1] = df
    d = Derivation(V.ring, [imgs[v] for v in range(sp.size)])
    return Witness("prodol-lift", d, V, {"base_groups": base_groups, "lift_order": order})


# -- enumeration ----------------------------------------------------------------------


def catalog_witnesses(X: TrinomialHypersurface, split: bool = True) -> list:
    """Every case-1 and case-2 witness the engine can build on ``X``.

    Case-2 witnesses on non-split coefficients are built on the split model
    when ``split`` is set (the scaling is recorded on the witness).
    """
    out = []
    for i in range(3):
        for a, l in enumerate(X.groups[i], start=1):
            if l != 1:
                continue
            for j in range(3):
                if j == i:
                    continue
                for b in range(1, len(X.groups[j]) + 1):
                    out.append(witness_case1(X, i, a, (j, b)))
    if not X.free_term:
        for i in range(3):
            for j in range(3):
                if i == j or not (_is_even_with_two(X.groups[i]) and _is_even_with_two(X.groups[j])):
                    continue
                t = ({0, 1, 2} - {i, j}).pop()
                for a, la in enumerate(X.groups[i], start=1):
                    for b, lb in enumerate(X.groups[j], start=1):
                        if la != 2 or lb != 2:
                            continue
                        for c in range(1, len(X.groups[t]) + 1):
                            try:
                                out.append(witness_case2(X, i, a, j, b, t, c))
                            except SignPatternError as exc:
                                if not split:
                                    continue
                                Y, scaling = split_model(X, i, j, b)
                                w = witness_case2(Y, i, a, j, b, t, c)
                                w.scaling = scaling
                                out.append(w)
    if X.slack:
        out.append(witness_slack(X))
    return out


def regularity_rank(X, point: Sequence) -> tuple:
    """Diagnostic: ``(rank of the Jacobian at point, number of relations)``."""
    from .linalg import rank

    rels = X.defining_polynomials()
    sp = X.space
    rows = []
    for g in rels:
        rows.append({v: g.diff(v).evaluate(point) for v in range(sp.size)})
    return rank(rows), len(rels)


def is_regular_point(X, point: Sequence) -> bool:
    r, k = regularity_rank(X, point)
    return r == k
