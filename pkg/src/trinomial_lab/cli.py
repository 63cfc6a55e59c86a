"""``trinomial-lab``: JSON in, deterministic JSON out.

Exit status: 0 success, 1 malformed input, 2 precondition violation,
3 when a corpus run has failing rows.
"""
from __future__ import annotations

import argparse
import json
import sys

from .algebra import Poly, VariableSpace, as_rational
from .classify import classify
from .corpus import bundled_examples
from .derivations import (
    DEFAULT_NILPOTENCY_CAP,
    Derivation,
    Inadmissible,
    NotLocallyNilpotent,
    check_admissible,
    fine_grading,
    relation_certificates,
    verify_lnd,
)
from .lnd import (
    PreconditionError,
    variety_witness,
    witness_case1,
    witness_case2,
    witness_delta_pm,
    witness_gamma,
)
from .oracle import ORACLE_CAP, search_lnd
from .orbits import OffVariety, orbit_path
from .quotient import DEFAULT_DEGREE_SLACK
from .serialize import dumps, read_json
from .varieties import (
    AffineSpace,
    InvalidDescriptor,
    SuspensionSpec,
    TrinomialHypersurface,
    TrinomialVariety,
    descriptor_from_json,
    suspend,
)

DEFAULT_SEARCH_BOUND = 8


class Malformed(ValueError):
    pass


class Violation(Exception):
    def __init__(self, clause: str, message: str, extra: dict | None = None):
        super().__init__(message)
        self.clause = clause
        self.extra = extra or {}


# -- input helpers -------------------------------------------------------------


def _load(source: str):
    try:
        return read_json(source)
    except (OSError, json.JSONDecodeError) as exc:
        raise Malformed(f"cannot read JSON input: {exc}") from None


def _descriptor(data):
    if isinstance(data, dict) and "kind" not in data:
        for key in ("descriptor", "model"):
            if key in data:
                data = data[key]
                break
    return descriptor_from_json(data)


def _pair(params: dict, key: str, default=None):
    val = params.get(key, default)
    if val is None:
        return None
    if not (isinstance(val, list) and len(val) == 2 and all(isinstance(x, int) for x in val)):
        raise Malformed(f"parameter {key!r} must be a pair of integers")
    return tuple(val)


def _build_witness(X, tag: str, params: dict):
    if tag == "auto":
        if isinstance(X, TrinomialVariety) and X.r > 2:
            report = classify(X, verify=False)
            if report.rigidity != "nonrigid":
                raise Violation(report.clause, f"no witness: the input is {report.rigidity}")
            return variety_witness(X)
        report = classify(X, verify=False)
        if not report.witnesses:
            raise Violation("rigid", f"no witness: the input is {report.rigidity}")
        return report.witnesses[0]
    if not isinstance(X, TrinomialHypersurface):
        raise Violation("shape", f"witness tag {tag!r} needs a hypersurface descriptor")
    if tag == "rt-case1":
        i, a = _pair(params, "variable")
        return witness_case1(X, i, a, _pair(params, "partner"))
    if tag == "rt-case2":
        sq = params.get("squares")
        if not (isinstance(sq, list) and len(sq) == 2):
            raise Malformed("rt-case2 needs 'squares': [[i, a], [j, b]]")
        (i, a), (j, b) = (tuple(s) for s in sq)
        moved = _pair(params, "moved")
        t, c = moved if moved else (None, 1)
        return witness_case2(X, i, a, j, b, t, c)
    if tag == "nenul-gamma":
        i, j = _pair(params, "moved")
        k, p = _pair(params, "pivot", [2, 1])
        return witness_gamma(X, i, j, k, p)
    if tag in ("dve-delta+", "dve-delta-"):
        groups = tuple(params.get("groups", (0, 1, 2)))
        positions = tuple(params.get("positions", (1, 1)))
        moved = _pair(params, "moved")
        if moved is None:
            raise Malformed("delta witnesses need 'moved': [group, index]")
        return witness_delta_pm(X, moved[1], tag[-1], groups, positions)
    raise Malformed(f"unknown witness tag {tag!r}")


def _point(values) -> list:
    if not isinstance(values, list):
        raise Malformed("points must be JSON lists")
    try:
        return [as_rational(v) for v in values]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise Malformed(str(exc)) from None


def _base(data):
    if isinstance(data, dict) and data.get("kind") == "affine":
        names = data.get("names")
        if not (isinstance(names, list) and names and all(isinstance(n, str) for n in names)):
            raise Malformed("affine base needs a nonempty list of 'names'")
        return AffineSpace(tuple(names))
    return descriptor_from_json(data)


# -- verbs ----------------------------------------------------------------------


def cmd_classify(args) -> dict:
    X = _descriptor(_load(args.input))
    report = classify(X, verify=True, cap=args.nilpotency_cap)
    return {"descriptor": X.to_json(), "report": report.to_json(with_witnesses=args.witnesses)}


def cmd_witness(args) -> dict:
    X = _descriptor(_load(args.input))
    try:
        params = json.loads(args.params)
    except json.JSONDecodeError as exc:
        raise Malformed(f"--params is not JSON: {exc}") from None
    w = _build_witness(X, args.tag, params)
    w.verify(args.nilpotency_cap)
    certs = relation_certificates(w.derivation, args.degree_slack)
    out = {"descriptor": X.to_json(), "witness": w.to_json()}
    out["relations"] = [
        {"status": m.status, "cofactors": [c.to_text() for c in m.cofactors]} for m in certs
    ]
    return out


def cmd_verify(args) -> dict:
    data = _load(args.input)
    if not isinstance(data, dict):
        raise Malformed("verify expects an object with a descriptor and images")
    if "witness" in data:
        data = {"descriptor": data["witness"].get("model") or data.get("descriptor"), **data["witness"]}
    X = _descriptor(data)
    images = data.get("images")
    if not isinstance(images, dict):
        raise Malformed("verify needs an 'images' object")
    try:
        d = Derivation.from_images(images, X.ring)
    except (KeyError, ValueError, IndexError) as exc:
        raise Malformed(f"bad images: {exc}") from None
    try:
        check_admissible(d)
    except Inadmissible as exc:
        raise Violation(
            "admissibility",
            str(exc),
            {"relation": exc.relation.to_text(), "relation_index": exc.index, "residue": exc.residue.to_text()},
        ) from None
    try:
        cert = verify_lnd(d, args.nilpotency_cap)
    except NotLocallyNilpotent as exc:
        raise Violation("local-nilpotency", str(exc), {"status": exc.status, "variable": exc.variable, "steps": exc.steps}) from None
    return {"descriptor": X.to_json(), "verdict": "LND", "certificate": cert.to_json(), **d.to_json()}


def cmd_search(args) -> dict:
    X = _descriptor(_load(args.input))
    res = search_lnd(X.ring, args.search_bound, first_only=args.first, cap=args.nilpotency_cap)
    return {"descriptor": X.to_json(), "search": res.to_json()}


def cmd_orbit(args) -> dict:
    data = _load(args.input)
    if not isinstance(data, dict) or "source" not in data or "target" not in data:
        raise Malformed("orbit expects an object with 'descriptor', 'source' and 'target'")
    X = _descriptor(data)
    res = orbit_path(X, _point(data["source"]), _point(data["target"]))
    return {"descriptor": X.to_json(), "orbit": res.to_json()}


def cmd_grading(args) -> dict:
    X = _descriptor(_load(args.input))
    return {"descriptor": X.to_json(), "grading": fine_grading(X.ring).to_json()}


def cmd_suspend(args) -> dict:
    data = _load(args.input)
    if not isinstance(data, dict) or not {"base", "f", "weights"} <= set(data):
        raise Malformed("suspend expects an object with 'base', 'f' and 'weights'")
    base = _base(data["base"])
    try:
        f = Poly.parse(str(data["f"]), base.space)
    except (ValueError, KeyError) as exc:
        raise Malformed(f"bad f: {exc}") from None
    weights = data["weights"]
    if not (isinstance(weights, list) and all(isinstance(k, int) and not isinstance(k, bool) for k in weights)):
        raise Malformed("weights must be a list of integers")
    susp = suspend(SuspensionSpec(base, f, tuple(weights)))
    if not susp.irreducible:
        raise Violation("irreducibility", susp.report)
    sp: VariableSpace = susp.ring.ambient
    return {
        "irreducible": True,
        "report": susp.report,
        "variables": list(sp.names),
        "relations": [g.to_text() for g in susp.presented.relations],
        "descriptor": susp.trinomial.to_json() if susp.trinomial is not None else None,
    }


def check_row(row: dict, cap: int = DEFAULT_NILPOTENCY_CAP) -> dict:
    """Classify one corpus row and compare against its ``expect`` block."""
    X = descriptor_from_json(row["descriptor"])
    report = classify(X, verify=True, cap=cap).to_json(with_witnesses=False)
    got = {
        "rigidity": report["rigidity"],
        "clause": report["clause"],
        "flexibility": report["flexibility"],
        "proven": report["proven"],
        "factorial": report["factorial"]["verdict"],
        "ml_kind": report["ml"]["kind"],
        "ml_generators": report["ml"].get("generators", []),
    }
    mismatches = []
    for key, want in sorted(row["expect"].items()):
        if key == "flexibility_includes":
            ok = isinstance(got["flexibility"], list) and want in got["flexibility"]
            have = got["flexibility"]
        else:
            have = got.get(key)
            ok = have == want
        if not ok:
            mismatches.append({"key": key, "expected": want, "got": have})
    return {"name": row["name"], "pass": not mismatches, "mismatches": mismatches}


def cmd_corpus(args) -> dict:
    if args.input is None:
        rows = bundled_examples()
    else:
        data = _load(args.input)
        rows = data.get("rows") if isinstance(data, dict) else data
        if not isinstance(rows, list):
            raise Malformed("corpus input must be a list of rows or an object with 'rows'")
    results = []
    for row in rows:
        if not isinstance(row, dict) or not {"name", "descriptor", "expect"} <= set(row):
            raise Malformed("every row needs 'name', 'descriptor' and 'expect'")
        results.append(check_row(row, args.nilpotency_cap))
    passed = sum(r["pass"] for r in results)
    return {"rows": results, "passed": passed, "failed": len(results) - passed, "all_pass": passed == len(results)}


VERBS = {
    "classify": cmd_classify,
    "witness": cmd_witness,
    "verify": cmd_verify,
    "search": cmd_search,
    "orbit": cmd_orbit,
    "grading": cmd_grading,
    "suspend": cmd_suspend,
    "corpus": cmd_corpus,
}


class _Parser(argparse.ArgumentParser):
    # usage errors are malformed input (1); argparse would use 2, our precondition code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--nilpotency-cap",
        type=int,
        default=None,
        help=f"default {DEFAULT_NILPOTENCY_CAP}; {ORACLE_CAP} for search candidates",
    )
    common.add_argument("--search-bound", type=int, default=DEFAULT_SEARCH_BOUND)
    common.add_argument("--degree-slack", type=int, default=DEFAULT_DEGREE_SLACK)
    common.add_argument("-o", "--output", help="write the JSON report here instead of stdout")

    parser = _Parser(prog="trinomial-lab", description="Rigidity and LND witnesses for trinomial varieties.")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        p = sub.add_parser(verb, parents=[common])
        if verb == "corpus":
            p.add_argument("input", nargs="?", help="rows file (default: the bundled examples)")
        else:
            p.add_argument("input", help="JSON text, a path to a JSON file, or - for stdin")
        if verb == "classify":
            p.add_argument("--no-witnesses", dest="witnesses", action="store_false")
        if verb == "witness":
            p.add_argument("--tag", default="auto")
            p.add_argument("--params", default="{}", help="JSON object with the witness indices")
        if verb == "search":
            p.add_argument("--first", action="store_true", help="stop at the first LND found")
    return parser


def _validate(args):
    if args.nilpotency_cap is None:
        args.nilpotency_cap = ORACLE_CAP if args.verb == "search" else DEFAULT_NILPOTENCY_CAP
    if args.nilpotency_cap < 1:
        raise Malformed("--nilpotency-cap must be positive")
    if args.search_bound < 0:
        raise Malformed("--search-bound must be nonnegative")
    if args.degree_slack < 0:
        raise Malformed("--degree-slack must be nonnegative")


def run(argv=None) -> tuple:
    """Returns ``(exit status, JSON text, output path or None)``."""
    args = build_parser().parse_args(argv)
    try:
        _validate(args)
        payload = VERBS[args.verb](args)
        status = 3 if args.verb == "corpus" and not payload["all_pass"] else 0
        payload = {"command": args.verb, "status": "ok" if status == 0 else "failures", **payload}
    except Violation as exc:
        status, payload = 2, {"command": args.verb, "status": "error", "error": "precondition", "clause": exc.clause, "message": str(exc), **exc.extra}
    except PreconditionError as exc:
        status, payload = 2, {"command": args.verb, "status": "error", "error": "precondition", "clause": exc.clause, "message": str(exc)}
    except OffVariety as exc:
        status, payload = 2, {"command": args.verb, "status": "error", "error": "precondition", "clause": "on-variety", "message": str(exc)}
    except (Malformed, InvalidDescriptor) as exc:
        status, payload = 1, {"command": args.verb, "status": "error", "error": "malformed-input", "message": str(exc)}
    return status, dumps(payload), args.output


def main(argv=None) -> int:
    status, text, output = run(argv)
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
