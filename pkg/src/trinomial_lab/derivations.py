"""Derivations of presented rings, gradings, nilpotency certificates and exponentials."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import Poly, SpaceMismatch, VariableSpace, as_rational, integer_kernel_basis
from .quotient import DEFAULT_DEGREE_SLACK, PresentedRing, divides

DEFAULT_NILPOTENCY_CAP = 64
# guards used when iterating candidates that may not be nilpotent
DEFAULT_TERM_GUARD = 4000


class Inadmissible(ValueError):
    """The derivation does not preserve the defining ideal."""

    def __init__(self, relation: Poly, residue: Poly, index: int):
        self.relation = relation
        self.residue = residue
        self.index = index
        super().__init__(
            f"relation g_{index} = {relation.to_text()} is not preserved: "
            f"normal form of its image is {residue.to_text()}"
        )


class NotLocallyNilpotent(ValueError):
    """Iteration did not reach zero; ``status`` says why."""

    def __init__(self, status: str, variable: str, steps: int):
        self.status = status
        self.variable = variable
        self.steps = steps
        super().__init__(f"{status} on {variable} after {steps} steps")


class Derivation:
    """A derivation of ``ring`` given by the images of the ambient variables."""

    __slots__ = ("ring", "images", "certificate")

    def __init__(self, ring: PresentedRing, images: Sequence[Poly], certificate=None):
        space = ring.ambient
        if len(images) != space.size:
            raise ValueError("one image per ambient variable is required")
        for p in images:
            if p.space != space:
                raise SpaceMismatch("image over another space")
        self.ring = ring
        self.images = tuple(images)
        self.certificate = certificate

    @property
    def space(self) -> VariableSpace:
        return self.ring.ambient

    def __call__(self, p: Poly) -> Poly:
        return self.apply(p)

    def apply(self, p: Poly) -> Poly:
        """Leibniz extension: ``sum_v dp/dv * images[v]``."""
        out = self.space.zero()
        for v in p.variables():
            img = self.images[v]
            if img:
                out = out + p.diff(v) * img
        return out

    def image(self, name_or_index) -> Poly:
        i = self.space.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        return self.images[i]

    def is_zero(self) -> bool:
        return not any(self.images)

    def __add__(self, other: "Derivation") -> "Derivation":
        if self.ring != other.ring:
            raise SpaceMismatch("derivations of different rings")
        return Derivation(self.ring, [a + b for a, b in zip(self.images, other.images)])

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + other.scale(-1)

    def scale(self, c) -> "Derivation":
        return Derivation(self.ring, [p.scale(c) for p in self.images])

    def times(self, k: Poly) -> "Derivation":
        """``k * self`` for a ring element ``k``."""
        return Derivation(self.ring, [k * p for p in self.images])

    def normalized(self) -> "Derivation":
        nf = self.ring.normal_form
        return Derivation(self.ring, [nf(p) for p in self.images], self.certificate)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        if self.ring != other.ring:
            return False
        nf = self.ring.normal_form
        return all(nf(a - b).is_zero() for a, b in zip(self.images, other.images))

    def __hash__(self):
        return hash((self.ring, tuple(self.ring.normal_form(p) for p in self.images)))

    def to_json(self) -> dict:
        names = self.space.names
        return {"images": {names[i]: p.to_text() for i, p in enumerate(self.images) if p}}

    @classmethod
    def from_json(cls, data: Mapping, ring: PresentedRing) -> "Derivation":
        images = data.get("images", data)
        return cls.from_images(images, ring)

    @classmethod
    def from_images(cls, images: Mapping, ring: PresentedRing) -> "Derivation":
        space = ring.ambient
        out = [space.zero() for _ in range(space.size)]
        for key, val in images.items():
            i = space.index(key) if isinstance(key, str) else int(key)
            if not 0 <= i < space.size:
                raise IndexError(i)
            if isinstance(val, Poly):
                out[i] = val
            elif isinstance(val, str):
                out[i] = Poly.parse(val, space)
            else:
                out[i] = Poly.constant(space, as_rational(val))
        return cls(ring, out)

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in self.to_json()["images"].items())
        return f"Derivation({{{body}}})"


def check_admissible(d: Derivation) -> None:
    """Raise :class:`Inadmissible` unless every relation's image lies in the ideal."""
    ring = d.ring
    for idx, g in enumerate(ring.relations):
        residue = ring.normal_form(d.apply(g))
        if not residue.is_zero():
            raise Inadmissible(g, residue, idx)


def relation_certificates(d: Derivation, degree_slack: int = DEFAULT_DEGREE_SLACK) -> list:
    """Cofactor certificates (``d(g_i) = sum_k h_ik g_k``), one entry per relation."""
    out = []
    for g in d.ring.relations:
        out.append(d.ring.ideal_member(d.apply(g), degree_slack))
    return out


def extend_and_check(images, ring: PresentedRing) -> Derivation:
    """Build the derivation with the given images and verify it preserves the ideal.

    Missing variables get image 0.  Membership is decided by normal forms
    (single relation: division; several: the completed basis).
    """
    d = images if isinstance(images, Derivation) else Derivation.from_images(images, ring)
    check_admissible(d)
    return d


# -- certificates -----------------------------------------------------------


@dataclass(frozen=True)
class LndCertificate:
    """``chains[v] = (d(v), d^2(v), ..., 0)`` as normal forms."""

    space: VariableSpace
    chains: tuple

    @property
    def lengths(self) -> tuple:
        return tuple(len(c) for c in self.chains)

    @property
    def bound(self) -> int:
        return max(self.lengths, default=0)

    def nu(self, v: int) -> int:
        return len(self.chains[v]) - 1

    def to_json(self) -> dict:
        names = self.space.names
        return {"chain_lengths": {names[i]: len(c) for i, c in enumerate(self.chains)}, "bound": self.bound}


def _chain_steps(d: Derivation, p: Poly, term_guard: int, label: str):
    """Yield ``d(p), d^2(p), ...`` as normal forms, stopping after the first 0."""
    nf = d.ring.normal_form
    cur = nf(p)
    step = 0
    while True:
        step += 1
        nxt = nf(d.apply(cur))
        yield nxt
        if nxt.is_zero():
            return
        # in a domain, a | d(a) forces d(a) = 0 for an LND
        if not cur.is_constant() and divides(cur, nxt):
            raise NotLocallyNilpotent("not-nilpotent (element divides its image)", label, step)
        if len(nxt.terms) > term_guard:
            raise NotLocallyNilpotent("unknown-within-cap (term guard)", label, step)
        cur = nxt


def iterate_chain(d: Derivation, p: Poly, cap: int = DEFAULT_NILPOTENCY_CAP, term_guard: int = DEFAULT_TERM_GUARD, label: str = "") -> tuple:
    """``(d(p), d^2(p), ..., 0)`` as normal forms; raises when it does not close."""
    chain = []
    for q in _chain_steps(d, p, term_guard, label):
        chain.append(q)
        if q.is_zero():
            return tuple(chain)
        if len(chain) >= cap:
            break
    raise NotLocallyNilpotent("unknown-within-cap", label, cap)


def verify_lnd(d: Derivation, cap: int = DEFAULT_NILPOTENCY_CAP, term_guard: int = DEFAULT_TERM_GUARD) -> LndCertificate:
    """Check admissibility, then iterate ``d`` on every generator until 0.

    Local nilpotency on generators implies it on the whole finitely generated
    ring, so success yields a full certificate.  The generator chains advance
    in lockstep so that a cheap rejection on one of them comes early.  Raises
    :class:`Inadmissible` or :class:`NotLocallyNilpotent`.
    """
    check_admissible(d)
    space = d.space
    chains = [[] for _ in range(space.size)]
    live = {v: _chain_steps(d, space.gen(v), term_guard, space.names[v]) for v in range(space.size)}
    for _ in range(cap):
        if not live:
            break
        for v in list(live):
            q = next(live[v])
            chains[v].append(q)
            if q.is_zero():
                del live[v]
    if live:
        v = min(live)
        raise NotLocallyNilpotent("unknown-within-cap", space.names[v], cap)
    cert = LndCertificate(space, tuple(tuple(c) for c in chains))
    d.certificate = cert
    return cert


def is_lnd(d: Derivation, cap: int = DEFAULT_NILPOTENCY_CAP, term_guard: int = DEFAULT_TERM_GUARD) -> bool:
    try:
        verify_lnd(d, cap, term_guard)
    except (Inadmissible, NotLocallyNilpotent):
        return False
    return True


def nu_degree(d: Derivation, p: Poly, cap: int = DEFAULT_NILPOTENCY_CAP) -> int:
    """``nu_d(p)``: one less than the least power of ``d`` killing ``p``.

    Raises :class:`NotLocallyNilpotent` with status ``exceeds-cap`` when the
    chain does not close within ``cap`` steps, and ValueError for ``p = 0``.
    """
    if d.certificate is None:
        raise ValueError("nu_degree needs a derivation with an LND certificate (run verify_lnd)")
    p = d.ring.normal_form(p)
    if p.is_zero():
        raise ValueError("nu of the zero element is -infinity")
    try:
        return len(iterate_chain(d, p, cap, term_guard=10**9)) - 1
    except NotLocallyNilpotent as exc:
        raise NotLocallyNilpotent("exceeds-cap", exc.variable, exc.steps) from None


# -- exponentials -------------------------------------------------------------


class RingMap:
    """Endomorphism of a presented ring given by the images of the variables."""

    def __init__(self, ring: PresentedRing, images: Sequence[Poly]):
        self.ring = ring
        self.images = tuple(images)

    def apply(self, p: Poly) -> Poly:
        return self.ring.normal_form(p.substitute(dict(enumerate(self.images))))

    __call__ = apply

    def compose(self, other: "RingMap") -> "RingMap":
        """``self o other`` as ring maps: first ``other``, then ``self``.

        On generators: ``(self o other)(v) = self(other(v))``.
        """
        return RingMap(self.ring, [self.apply(p) for p in other.images])

    def preserves_relations(self) -> bool:
        return all(self.apply(g).is_zero() for g in self.ring.relations)

    def on_point(self, point: Sequence) -> tuple:
        """Image of a point under the morphism of varieties dual to this map."""
        return tuple(p.evaluate(point) for p in self.images)

    def __eq__(self, other):
        if not isinstance(other, RingMap) or other.ring != self.ring:
            return NotImplemented
        nf = self.ring.normal_form
        return all(nf(a - b).is_zero() for a, b in zip(self.images, other.images))

    def is_identity(self) -> bool:
        return self == RingMap(self.ring, self.ring.ambient.gens())

    def to_json(self) -> dict:
        names = self.ring.ambient.names
        return {names[i]: p.to_text() for i, p in enumerate(self.images)}


def exp_automorphism(d: Derivation, t) -> RingMap:
    """``v -> sum_k t^k d^k(v) / k!`` using the certificate chains."""
    if d.certificate is None:
        verify_lnd(d)
    t = as_rational(t)
    space = d.space
    images = []
    for v, chain in enumerate(d.certificate.chains):
        img = space.gen(v)
        power = Fraction(1)
        for k, term in enumerate(chain, start=1):
            if term.is_zero():
                break
            power = power * t
            img = img + term.scale(power / math.factorial(k))
        images.append(d.ring.normal_form(img))
    return RingMap(d.ring, images)


# -- gradings -------------------------------------------------------------------


@dataclass(frozen=True)
class Grading:
    """``weights[v]`` is the degree of variable ``v`` in ``Z^rank``."""

    space: VariableSpace
    rank: int
    weights: tuple

    def __post_init__(self):
        w = tuple(tuple(int(x) for x in row) for row in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) != self.space.size or any(len(row) != self.rank for row in w):
            raise ValueError("weights must give one rank-length vector per variable")

    def degree(self, m) -> tuple:
        """Degree of an exponent vector."""
        out = [0] * self.rank
        for e, w in zip(m, self.weights):
            if e:
                for k in range(self.rank):
                    out[k] += e * w[k]
        return tuple(out)

    def is_homogeneous(self, p: Poly) -> bool:
        return len({self.degree(m) for m in p.terms}) <= 1

    def homogenizes(self, ring: PresentedRing) -> bool:
        return all(self.is_homogeneous(g) for g in ring.relations)

    def to_json(self) -> dict:
        return {"rank": self.rank, "weights": {n: list(w) for n, w in zip(self.space.names, self.weights)}}


def fine_grading(ring: PresentedRing) -> Grading:
    """Finest ``Z^k``-grading making every relation homogeneous.

    Each relation contributes rows ``m_t - m_0`` (term exponent differences);
    the weight lattice is the integer kernel of that matrix, Hermite-reduced.
    """
    space = ring.ambient
    rows = []
    for g in ring.relations:
        ms = [m for m, _ in g.sorted_terms()]
        for m in ms[1:]:
            rows.append([a - b for a, b in zip(m, ms[0])])
    basis = integer_kernel_basis(rows, space.size) if rows else integer_kernel_basis([], space.size)
    k = len(basis)
    weights = [tuple(b[v] for b in basis) for v in range(space.size)]
    return Grading(space, k, tuple(weights))


def coarsen(g: Grading, projection: Sequence[Sequence[int]]) -> Grading:
    """Compose weights with an ``s x k`` integer matrix."""
    P = [list(map(int, row)) for row in projection]
    if any(len(row) != g.rank for row in P):
        raise ValueError("projection must have one column per grading coordinate")
    s = len(P)
    weights = [tuple(sum(row[k] * w[k] for k in range(g.rank)) for row in P) for w in g.weights]
    return Grading(g.space, s, tuple(weights))


def derivation_degrees(d: Derivation, g: Grading) -> dict:
    """Split images by the degree ``deg(u) - deg(v)`` of each term ``u`` of ``d(v)``."""
    parts: dict = {}
    for v, img in enumerate(d.images):
        dv = g.weights[v]
        for m, c in img.terms.items():
            e = tuple(a - b for a, b in zip(g.degree(m), dv))
            parts.setdefault(e, {}).setdefault(v, {})[m] = c
    return parts


@dataclass(frozen=True)
class HomogeneousPart:
    degree: tuple
    derivation: Derivation
    extreme: bool

    def to_json(self) -> dict:
        return {"degree": list(self.degree), "extreme": self.extreme, **self.derivation.to_json()}


def homogeneous_parts(d: Derivation, g: Grading, normalize: bool = True) -> list:
    """Decompose ``d`` into homogeneous summands, sorted by degree.

    Images are reduced to normal form first so that the split does not
    depend on the representative.  The lexicographically smallest and
    largest degrees are vertices of the convex hull of the degree set and
    are flagged ``extreme``.
    """
    if not g.homogenizes(d.ring):
        raise ValueError("grading does not make the relations homogeneous")
    src = d.normalized() if normalize else d
    parts = derivation_degrees(src, g)
    space = d.space
    out = []
    degrees = sorted(parts)
    for e in degrees:
        imgs = [space.zero() for _ in range(space.size)]
        for v, terms in parts[e].items():
            imgs[v] = Poly(space, terms)
        extreme = e == degrees[0] or e == degrees[-1]
        out.append(HomogeneousPart(e, Derivation(d.ring, imgs), extreme))
    return out


def is_homogeneous_derivation(d: Derivation, g: Grading):
    """Degree of ``d`` if it is homogeneous (``None`` for the zero derivation), else False."""
    parts = derivation_degrees(d.normalized(), g)
    if not parts:
        return None
    if len(parts) > 1:
        return False
    return next(iter(parts))


def partial_derivation(ring: PresentedRing, v) -> Derivation:
    """``d/dv`` as a derivation of ``ring`` (admissible only if no relation uses ``v``)."""
    space = ring.ambient
    i = space.index(v) if isinstance(v, str) else v
    imgs = [space.zero() for _ in range(space.size)]
    imgs[i] = space.one()
    return Derivation(ring, imgs)
