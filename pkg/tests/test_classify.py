import pytest

from trinomial_lab.classify import (
    classify,
    intermediate_type,
    match_flexible_type,
    ml_invariant,
    rigidity_clause,
)
from trinomial_lab.cli import check_row
from trinomial_lab.corpus import bundled_examples, load_rows
from trinomial_lab.varieties import TrinomialHypersurface, TrinomialVariety


def H(*groups, coeffs=(1, 1, 1), slack=0):
    return TrinomialHypersurface(groups, coeffs, slack)


def test_rigid_example():
    rep = classify(H((2, 3), (5,), (7,)))
    assert rep.rigidity == "rigid" and rep.clause == "none"
    assert rep.ml.kind == "full-ring"
    assert rep.witnesses == []


def test_h2_example():
    rep = classify(H((2, 2), (2,), (5,)))
    assert rep.rigidity == "nonrigid" and rep.clause == "rt-2"
    assert "H2" in rep.flexibility
    assert rep.ml.kind == "ground-field"
    assert rep.witnesses[0].certificate is not None


def test_not_factorial_rigid():
    rep = classify(H((6, 3), (6, 3), (6, 3)))
    assert rep.rigidity == "rigid"
    assert rep.factorial.verdict == "not factorial"


def test_type_b_example():
    rep = classify(H((4, 2), (2,), (5,)))
    assert rep.clause == "rt-2"
    assert rep.flexibility == "intermediate-B" and rep.proven
    assert rep.ml.kind == "generators" and rep.ml.generators == ("T_01",)


def test_type_a_example():
    rep = classify(H((), (1, 2), (3,)))
    assert rep.clause == "rt-1"
    assert rep.flexibility == "intermediate-A" and rep.proven
    assert rep.ml.generators == ("T_12",)
    assert ml_invariant(H((), (1, 2), (3,))).generators == ("T_12",)


def test_open_type_a():
    rep = classify(H((), (1, 1, 2), (3,)))
    assert rep.flexibility == "open" and not rep.proven
    assert rep.intermediate == {"type": "A", "params": {"group": 1, "k": 2}}


def test_h_types():
    assert set(match_flexible_type(H((2,), (2,), (2,)))) == {"H2", "H5"}
    assert "H1" in match_flexible_type(H((), (1, 1), (3,)))
    assert "H2" not in match_flexible_type(H((), (2,), (2,)))
    assert "H3" in match_flexible_type(H((2, 1), (1,), (3,)))
    assert "H4" in match_flexible_type(H((1, 3), (2,), (2, 4)))


def test_free_term_squares_rigid():
    rep = classify(H((), (2,), (2,)))
    assert rep.rigidity == "rigid"


def test_affine_space():
    rep = classify(H((2, 3), (1,), (5,)))
    assert rep.flexibility == "affine-space"
    assert rep.ml.kind == "ground-field"


def test_slack():
    rep = classify(H((2,), (3,), (5,), slack=1))
    assert rep.clause == "ridfac-1" and rep.witnesses[0].tag == "slack-partial"


def test_rigidity_clause_positions():
    assert rigidity_clause(H((2,), (3, 1), (5,))) == ("rt-1", (1, 2))
    assert rigidity_clause(H((2,), (4, 2), (5,))) == ("rt-2", (0, 1))
    assert rigidity_clause(H((2,), (3,), (5,))) is None
    assert intermediate_type(H((2,), (3,), (5,))) is None


def test_varieties():
    rigid = TrinomialVariety(1, ((2,), (1, 1), (2,)), a=(1, 2, 3))
    assert classify(rigid).rigidity == "rigid"
    nonrigid = TrinomialVariety(1, ((2, 1), (1, 3), (5,)), a=(0, 1, 2))
    rep = classify(nonrigid)
    assert rep.rigidity == "nonrigid" and rep.clause == "ridfac-2"
    slack = TrinomialVariety(1, ((2,), (3,), (5,)), a=(0, 1, 2), slack=1)
    assert classify(slack).witnesses[0].tag == "slack-partial"
    gate = TrinomialVariety(2, ((2,), (2,), (2,), (2,)), A=((0, 1, 1, 2), (1, 0, 1, 3)))
    rep = classify(gate)
    assert rep.rigidity == "undetermined" and rep.flexibility == "not-applicable"
    assert rep.reason == {"d": [2, 2, 2, 2]}


def test_r2_variety_delegates():
    V = TrinomialVariety(1, ((2,), (3,)), a=(0, 1))
    rep = classify(V)
    assert any("r = 2" in n for n in rep.notes)


def test_classify_rejects_other():
    with pytest.raises(TypeError):
        classify("x^2")


@pytest.mark.parametrize("row", bundled_examples(), ids=lambda r: r["name"])
def test_bundled_rows(row):
    result = check_row(row)
    assert result["pass"], result["mismatches"]


def test_rows_load():
    rows = load_rows(bundled_examples())
    assert len(rows) >= 20
