"""Exhaustive small corpora of trinomial hypersurfaces and the bundled example file."""
from __future__ import annotations

import json
from importlib import resources
from itertools import combinations_with_replacement

from .varieties import TrinomialHypersurface, canonical_form, descriptor_from_json


def _groups_of_size(n: int, max_exp: int):
    # exponents sorted descending, matching the canonical form
    for combo in combinations_with_replacement(range(max_exp, 0, -1), n):
        yield tuple(combo)


def hypersurface_corpus(max_vars: int = 5, max_exp: int = 4, labelled: bool = False) -> list:
    """All hypersurfaces with ``n_0 + n_1 + n_2 <= max_vars`` and exponents
    ``<= max_exp``, coefficients 1, in a fixed order.

    By default one representative per permutation class is kept.  With
    ``labelled`` every assignment of exponent multisets to the three groups
    is kept (exponents still sorted inside a group).
    """
    seen = set()
    out = []
    for n0 in range(0, max_vars - 1):
        for n1 in range(1, max_vars - n0):
            for n2 in range(1, max_vars - n0 - n1 + 1):
                for g0 in _groups_of_size(n0, max_exp):
                    for g1 in _groups_of_size(n1, max_exp):
                        for g2 in _groups_of_size(n2, max_exp):
                            X = TrinomialHypersurface((g0, g1, g2))
                            if labelled:
                                out.append(X)
                                continue
                            canon = canonical_form(X).hypersurface
                            key = canon.groups
                            if key in seen:
                                continue
                            seen.add(key)
                            out.append(canon)
    out.sort(key=lambda X: (X.n, X.groups))
    return out


def bundled_examples() -> list:
    """Rows of the bundled example file: ``{"name", "descriptor", "expect"}``."""
    text = resources.files("trinomial_lab").joinpath("data/examples.json").read_text()
    return json.loads(text)["rows"]


def load_rows(rows: list) -> list:
    return [(row["name"], descriptor_from_json(row["descriptor"]), row["expect"]) for row in rows]
