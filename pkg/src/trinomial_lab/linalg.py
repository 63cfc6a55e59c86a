"""Sparse exact linear algebra over Q (rows are dicts ``column -> coefficient``)."""
from __future__ import annotations

from fractions import Fraction


def _eliminate(rows: list) -> tuple:
    """Reduce ``rows`` to reduced row echelon form; returns (pivot rows, pivot cols)."""
    pivot_rows: list = []
    pivot_of: dict = {}
    for row in rows:
        row = {k: Fraction(v) for k, v in row.items() if v}
        for col, prow in pivot_of.items():
            if col in row:
                f = row[col]
                for k, v in prow.items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        if not row:
            continue
        col = min(row)
        inv = 1 / row[col]
        row = {k: v * inv for k, v in row.items()}
        for c, prow in pivot_of.items():
            if col in prow:
                f = prow[col]
                for k, v in row.items():
                    nv = prow.get(k, 0) - f * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
        pivot_of[col] = row
        pivot_rows.append(row)
    return pivot_of


def nullspace(rows: list, ncols: int) -> list:
    """Basis of ``{x : R x = 0}`` as dense Fraction lists, one per free column.

    Each basis vector has a 1 in its free column and 0 in the other free
    columns (the usual RREF basis), so the order is deterministic.
    """
    pivot_of = _eliminate(rows)
    free = [c for c in range(ncols) if c not in pivot_of]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for col, prow in pivot_of.items():
            v = prow.get(f)
            if v:
                vec[col] = -v
        basis.append(vec)
    return basis


def solve(rows: list, rhs: list, ncols: int):
    """One solution of ``R x = b`` (free variables 0) or None if inconsistent."""
    aug = []
    for row, b in zip(rows, rhs):
        r = dict(row)
        if b:
            r[ncols] = b
        aug.append(r)
    pivot_of = _eliminate(aug)
    if ncols in pivot_of:
        return None
    x = [Fraction(0)] * ncols
    for col, prow in pivot_of.items():
        x[col] = prow.get(ncols, Fraction(0))
    return x


def rank(rows: list) -> int:
    return len(_eliminate(rows))
