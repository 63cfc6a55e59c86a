"""Rigidity, flexibility and Makar-Limanov reports for trinomial hypersurfaces and varieties."""
from __future__ import annotations

from dataclasses import dataclass, field

from .derivations import DEFAULT_NILPOTENCY_CAP
from .lnd import (
    SignPatternError,
    Witness,
    split_model,
    variety_witness,
    witness_case1,
    witness_case2,
    witness_slack,
)
from .varieties import (
    FactorialityVerdict,
    TrinomialHypersurface,
    TrinomialVariety,
    _is_even_with_two,
    is_factorial,
)

H_TYPES = ("H1", "H2", "H3", "H4", "H5")


@dataclass
class MLReport:
    """``kind``: full-ring | ground-field | generators | contains | unknown."""

    kind: str
    generators: tuple = ()

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind in ("generators", "contains"):
            out["generators"] = list(self.generators)
        return out


@dataclass
class ClassificationReport:
    rigidity: str  # rigid | nonrigid | undetermined
    clause: str  # rt-1 | rt-2 | ridfac-1 | ridfac-2 | ridfac-3 | none
    reason: dict
    flexibility: object  # sorted list of H tags, or one of the string verdicts
    proven: bool
    factorial: FactorialityVerdict
    ml: MLReport
    witnesses: list = field(default_factory=list)
    intermediate: dict | None = None
    notes: list = field(default_factory=list)

    def verdict(self) -> tuple:
        """Coordinate-free summary used for invariance checks."""
        flex = tuple(self.flexibility) if isinstance(self.flexibility, list) else self.flexibility
        inter = None
        if self.intermediate is not None:
            # group labels move under permutations; the k-parameters do not
            params = {k: v for k, v in self.intermediate["params"].items() if k.startswith("k")}
            inter = (self.intermediate["type"], tuple(sorted(params.items())))
        return (self.rigidity, self.clause, flex, self.proven, self.ml.kind, len(self.ml.generators), inter)

    def to_json(self, with_witnesses: bool = True) -> dict:
        out = {
            "rigidity": self.rigidity,
            "clause": self.clause,
            "reason": self.reason,
            "flexibility": self.flexibility,
            "proven": self.proven,
            "factorial": self.factorial.to_json(),
            "ml": self.ml.to_json(),
            "notes": list(self.notes),
        }
        if self.intermediate is not None:
            out["intermediate"] = self.intermediate
        if with_witnesses:
            out["witnesses"] = [w.to_json() for w in self.witnesses]
        return out


# -- shapes -------------------------------------------------------------------


def _has_one(group) -> bool:
    return 1 in group


def _all_ones(group) -> bool:
    return bool(group) and all(l == 1 for l in group)


def _all_twos(group) -> bool:
    return bool(group) and all(l == 2 for l in group)


def match_flexible_type(X: TrinomialHypersurface) -> dict:
    """All H-types matched up to permutation, each with a witnessing group order.

    The order ``[g0, g1, g2]`` lists which input group plays the role of the
    table's group 0, 1 and 2.  Exponent order inside groups is irrelevant.
    """
    G = X.groups
    idx = range(3)
    empty = any(not g for g in G)
    found: dict = {}

    def others(*used):
        return [k for k in idx if k not in used]

    for k in idx:
        if _all_ones(G[k]) and "H1" not in found:
            found["H1"] = others(k) + [k]
    if not empty:
        twos = [k for k in idx if _all_twos(G[k])]
        if len(twos) >= 2:
            found["H2"] = twos[:2] + others(*twos[:2])
    ones = [k for k in idx if _has_one(G[k])]
    if len(ones) >= 2:
        found["H3"] = others(*ones[:2]) + ones[:2]
    if not empty:
        shaped = [k for k in idx if _is_even_with_two(G[k])]
        for k in ones:
            rest = others(k)
            if all(r in shaped for r in rest):
                found["H4"] = [k] + rest
                break
        if len(shaped) == 3:
            found["H5"] = [0, 1, 2]
    return {t: found[t] for t in H_TYPES if t in found}


def rigidity_clause(X: TrinomialHypersurface):
    """``("rt-1", (i, a))``, ``("rt-2", (i, j))`` or ``None`` (rigid)."""
    for i, g in enumerate(X.groups):
        for a, l in enumerate(g, start=1):
            if l == 1:
                return "rt-1", (i, a)
    if not X.free_term:
        shaped = [k for k in range(3) if _is_even_with_two(X.groups[k])]
        if len(shaped) >= 2:
            return "rt-2", tuple(shaped[:2])
    return None


def _names(X, group: int, skip_positions=()) -> tuple:
    sp = X.space
    return tuple(sp.names[v] for pos, v in enumerate(sp.group_vars(group), start=1) if pos not in skip_positions)


def intermediate_type(X: TrinomialHypersurface):
    """Sort a nonrigid input without an H-type into Type A or Type B.

    Returns a dict with the type, its parameters, whether a proposition
    settles it, and the Makar-Limanov report; ``None`` when neither applies.
    """
    G = X.groups
    ones = [k for k in range(3) if _has_one(G[k])]
    if ones:
        if len(ones) != 1:
            return None
        g = ones[0]
        k = G[g].count(1)
        if k == len(G[g]):
            return None
        rest = [r for r in range(3) if r != g]
        if not X.free_term and all(_is_even_with_two(G[r]) for r in rest):
            return None
        params = {"group": g, "k": k}
        if k == 1:
            pos = G[g].index(1) + 1
            gens = _names(X, g, (pos,))
            return {"type": "A", "params": params, "proven": True, "ml": MLReport("generators", gens)}
        return {"type": "A", "params": params, "proven": False, "ml": MLReport("unknown")}
    if X.free_term:
        return None
    shaped = [k for k in range(3) if _is_even_with_two(G[k])]
    if len(shaped) != 2:
        return None
    if all(_all_twos(G[k]) for k in shaped):
        return None
    counts = {k: G[k].count(2) for k in shaped}
    candidates = []
    for g0, g1 in (tuple(shaped), tuple(reversed(shaped))):
        if counts[g0] == 1 and len(G[g0]) >= 2:
            candidates.append((g0, g1))
    for g0, g1 in candidates:
        if counts[g1] in (1, len(G[g1])):
            tail0 = _names(X, g0, (G[g0].index(2) + 1,))
            if counts[g1] == 1:
                gens = tail0 + _names(X, g1, (G[g1].index(2) + 1,))
            else:
                gens = tail0
            params = {"g0": g0, "g1": g1, "k0": 1, "k1": counts[g1]}
            return {"type": "B", "params": params, "proven": True, "ml": MLReport("generators", gens)}
    if candidates:
        g0, g1 = candidates[0]
        params = {"g0": g0, "g1": g1, "k0": 1, "k1": counts[g1]}
        tail0 = _names(X, g0, (G[g0].index(2) + 1,))
        return {"type": "B", "params": params, "proven": False, "ml": MLReport("contains", tail0)}
    g0, g1 = sorted(shaped, key=lambda k: (counts[k], len(G[k]), k))
    params = {"g0": g0, "g1": g1, "k0": counts[g0], "k1": counts[g1]}
    return {"type": "B", "params": params, "proven": False, "ml": MLReport("unknown")}


# -- witnesses -----------------------------------------------------------------


def primary_witness(X: TrinomialHypersurface, clause: str, where: tuple) -> Witness:
    """The witness the rigidity clause calls for; case 2 falls back to the split model."""
    if clause == "rt-1":
        return witness_case1(X, *where)
    i, j = where
    t = ({0, 1, 2} - {i, j}).pop()
    a = X.groups[i].index(2) + 1
    b = X.groups[j].index(2) + 1
    try:
        return witness_case2(X, i, a, j, b, t, 1)
    except SignPatternError:
        Y, scaling = split_model(X, i, j, b)
        w = witness_case2(Y, i, a, j, b, t, 1)
        w.scaling = scaling
        return w


# -- hypersurfaces ---------------------------------------------------------------


def classify_hypersurface(X: TrinomialHypersurface, verify: bool = True, cap: int = DEFAULT_NILPOTENCY_CAP) -> ClassificationReport:
    """Decision tree: affine-space degeneration, H-types, rigidity clauses,
    then Types A/B for what remains nonrigid."""
    fac = is_factorial(X)
    sp = X.space
    if X.slack:
        w = witness_slack(X)
        if verify:
            w.verify(cap)
        return ClassificationReport(
            "nonrigid",
            "ridfac-1",
            {"slack": X.slack, "variable": sp.names[sp.slack_var(1)]},
            "unclassified",
            True,
            fac,
            MLReport("unknown"),
            [w],
            notes=["slack variable present: flexibility not classified"],
        )
    hit = rigidity_clause(X)
    if hit is None:
        return ClassificationReport("rigid", "none", {}, "none", True, fac, MLReport("full-ring"))
    clause, where = hit
    reason = {"variable": sp.names[sp.var(*where)]} if clause == "rt-1" else {"groups": list(where)}
    w = primary_witness(X, clause, where)
    if verify:
        w.verify(cap)
    for i, g in enumerate(X.groups):
        if g == (1,):
            reason = {"variable": sp.names[sp.var(i, 1)]}
            w = witness_case1(X, i, 1)
            if verify:
                w.verify(cap)
            return ClassificationReport(
                "nonrigid", "rt-1", reason, "affine-space", True, fac, MLReport("ground-field"), [w],
                notes=[f"{sp.names[sp.var(i, 1)]} is a coordinate function: X is an affine space"],
            )
    types = match_flexible_type(X)
    if types:
        report = ClassificationReport("nonrigid", clause, reason, sorted(types), True, fac, MLReport("ground-field"), [w])
        report.notes.append("group orders: " + ", ".join(f"{t}={types[t]}" for t in sorted(types)))
        return report
    inter = intermediate_type(X)
    if inter is None:
        return ClassificationReport(
            "nonrigid", clause, reason, "unclassified", False, fac, MLReport("unknown"), [w],
            notes=["DEFECT: nonrigid input matches neither an H-type nor Type A/B"],
        )
    flex = "intermediate-" + inter["type"] if inter["proven"] else "open"
    notes = [] if inter["proven"] else ["whether this type is intermediate is an open question"]
    return ClassificationReport(
        "nonrigid",
        clause,
        reason,
        flex,
        inter["proven"],
        fac,
        inter["ml"],
        [w],
        intermediate={"type": inter["type"], "params": inter["params"]},
        notes=notes,
    )


def ml_invariant(X: TrinomialHypersurface) -> MLReport:
    return classify_hypersurface(X, verify=False).ml


# -- varieties -------------------------------------------------------------------------


def classify_variety(V: TrinomialVariety, verify: bool = True, cap: int = DEFAULT_NILPOTENCY_CAP) -> ClassificationReport:
    if V.r == 2:
        report = classify_hypersurface(V.as_hypersurface(), verify, cap)
        report.notes.append("r = 2: classified as the equivalent trinomial hypersurface")
        return report
    fac = is_factorial(V)
    if V.slack:
        w = witness_slack(V)
        if verify:
            w.verify(cap)
        return ClassificationReport(
            "nonrigid", "ridfac-1", {"slack": V.slack}, "unclassified", True, fac, MLReport("unknown"), [w]
        )
    if V.type == 2 and fac.verdict != "factorial":
        return ClassificationReport(
            "undetermined",
            "none",
            {"d": list(fac.d)},
            "not-applicable",
            False,
            fac,
            MLReport("unknown"),
            notes=["Type 2 criterion needs a factorial ring: outside its scope"],
        )
    lacking = [i for i in V.labels if 1 not in V.group(i)]
    allowed = 1 if V.type == 1 else 2
    clause = "ridfac-2" if V.type == 1 else "ridfac-3"
    notes = []
    if V.type == 1 and fac.verdict != "factorial":
        notes.append(f"ring is {fac.verdict} ({fac.reason}); the Type 1 criterion is applied as stated")
    if len(lacking) > allowed:
        return ClassificationReport(
            "rigid", "none", {"groups_without_exponent_one": lacking}, "none", True, fac, MLReport("full-ring"), notes=notes
        )
    w = variety_witness(V)
    if verify:
        w.verify(cap)
    return ClassificationReport(
        "nonrigid",
        clause,
        {"groups_without_exponent_one": lacking},
        "unclassified",
        True,
        fac,
        MLReport("unknown"),
        [w],
        notes=notes + ["flexibility of trinomial varieties is not classified"],
    )


def classify(X, verify: bool = True, cap: int = DEFAULT_NILPOTENCY_CAP) -> ClassificationReport:
    if isinstance(X, TrinomialHypersurface):
        return classify_hypersurface(X, verify, cap)
    if isinstance(X, TrinomialVariety):
        return classify_variety(X, verify, cap)
    raise TypeError("expected a trinomial hypersurface or variety")
