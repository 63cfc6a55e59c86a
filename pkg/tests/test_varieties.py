import pytest

from trinomial_lab.algebra import Poly, VariableSpace
from trinomial_lab.varieties import (
    AffineSpace,
    InvalidDescriptor,
    SuspensionSpec,
    TrinomialHypersurface,
    TrinomialVariety,
    canonical_form,
    descriptor_from_json,
    fiber_variety,
    is_factorial,
    permute_hypersurface,
    suspend,
)


def test_hypersurface_polynomial():
    X = TrinomialHypersurface(((2,), (3,), (5,)))
    assert X.defining_polynomials() == [Poly.parse("T_01^2 + T_11^3 + T_21^5", X.space)]
    Y = TrinomialHypersurface(((), (1, 2), (3,)), coeffs=(1, 1, 1))
    assert Y.polynomial() == Poly.parse("1 + T_11*T_12^2 + T_21^3", Y.space)


def test_type1_relations():
    V = TrinomialVariety(1, ((2,), (1, 1), (2,)), a=(1, 2, 3))
    sp = V.space
    assert sp.names == ("T_11", "T_21", "T_22", "T_31")
    g1, g2 = V.defining_polynomials()
    assert g1 == Poly.parse("T_11^2 - T_21*T_22 - 1", sp)
    assert g2 == Poly.parse("T_21*T_22 - T_31^2 - 1", sp)


def test_type2_determinant():
    V = TrinomialVariety(2, ((1,), (1,), (1,)), A=((1, 0, -1), (0, 1, -1)))
    (g,) = V.defining_polynomials()
    assert g == Poly.parse("T_01 + T_11 + T_21", V.space)


def test_invalid_descriptors():
    with pytest.raises(InvalidDescriptor):
        TrinomialHypersurface(((2,), (), (3,)))
    with pytest.raises(InvalidDescriptor):
        TrinomialHypersurface(((2,), (0,), (3,)))
    with pytest.raises(InvalidDescriptor):
        TrinomialHypersurface(((2,), (2,), (3,)), coeffs=(1, 0, 1))
    with pytest.raises(InvalidDescriptor):
        TrinomialVariety(1, ((2,), (2,), (2,)), a=(1, 1, 2))
    with pytest.raises(InvalidDescriptor):
        TrinomialVariety(2, ((2,), (2,), (2,)), A=((1, 2, 0), (1, 2, 1)))


def test_json_round_trip():
    for X in (
        TrinomialHypersurface(((2, 1), (3,), (4, 4)), coeffs=(1, "-2/3", 5), slack=1),
        TrinomialVariety(1, ((2,), (1, 1), (2,)), a=(1, 2, "7/2")),
        TrinomialVariety(2, ((2,), (2,), (2,), (2,)), A=((0, 1, 1, 2), (1, 0, 1, 3))),
    ):
        assert descriptor_from_json(X.to_json()) == X


@pytest.mark.parametrize(
    "bad",
    [
        {"kind": "hypersurface", "groups": [[2.0], [3], [5]]},
        {"kind": "hypersurface", "groups": [[2], [3], [5]], "coeffs": [1, 1.5, 1]},
        {"kind": "hypersurface", "groups": [[True], [3], [5]]},
        {"kind": "hypersurface", "groups": "x^2"},
        {"kind": "surface"},
        [],
    ],
)
def test_descriptor_rejects(bad):
    with pytest.raises(InvalidDescriptor):
        descriptor_from_json(bad)


def test_canonical_form_sorts():
    X = TrinomialHypersurface(((3,), (2,), (5,)))
    c = canonical_form(X)
    assert c.hypersurface.groups == ((2,), (3,), (5,))
    assert c.group_map == (1, 0, 2)


def test_canonical_form_round_trip():
    X = TrinomialHypersurface(((1, 3), (2,), (2,)))
    c = canonical_form(X)
    Y = c.hypersurface
    assert Y.groups == ((2,), (2,), (3, 1))
    # substituting original variables for canonical ones reproduces the input
    inv = c.inverse_var_map()
    back = Y.polynomial().substitute({k: X.space.gen(inv[k]) for k in range(Y.space.size)}, X.space)
    assert back == X.polynomial()


def test_canonical_form_keeps_free_term_first():
    X = TrinomialHypersurface(((), (3,), (2, 2)), coeffs=(4, 1, 1))
    assert canonical_form(X).hypersurface.groups[0] == ()


def test_permute_hypersurface_map():
    X = TrinomialHypersurface(((2, 1), (3,), (5,)))
    Y, vm = permute_hypersurface(X, (2, 0, 1), ((1, 0), (0,), (0,)))
    assert Y.groups == ((5,), (1, 2), (3,))
    pt = [1, 2, 3, 4]
    img = [0] * 4
    for old, new in enumerate(vm):
        img[new] = pt[old]
    assert Y.polynomial().evaluate(img) == X.polynomial().evaluate(pt)


@pytest.mark.parametrize(
    "groups,verdict",
    [
        (((6, 3), (6, 3), (6, 3)), "not factorial"),
        (((1, 1), (2,), (3,)), "factorial"),
        (((), (2, 3), (5,)), "not factorial"),
        (((), (2, 3), (1,)), "factorial"),
        (((2,), (3,), (5,)), "factorial"),
        (((2,), (4,), (3,)), "not factorial"),
    ],
)
def test_factoriality(groups, verdict):
    assert is_factorial(TrinomialHypersurface(groups)).verdict == verdict


def test_factoriality_varieties():
    V = TrinomialVariety(1, ((2,), (1, 1), (2,)), a=(1, 2, 3))
    assert is_factorial(V).verdict == "not factorial"
    W = TrinomialVariety(1, ((1,), (2, 3), (5,)), a=(1, 2, 3))
    assert is_factorial(W).verdict == "criterion inapplicable"
    U = TrinomialVariety(2, ((2,), (3,), (5,), (7,)), A=((0, 1, 1, 2), (1, 0, 1, 3)))
    assert is_factorial(U).verdict == "factorial"


def test_suspension_to_trinomial():
    base = AffineSpace(("x", "y"))
    f = Poly.parse("-(x^2 + y^3)", base.space)
    s = suspend(SuspensionSpec(base, f, (2, 5)))
    assert s.irreducible
    assert s.trinomial == TrinomialHypersurface(((2,), (3,), (2, 5)))


def test_suspension_reducible():
    base = AffineSpace(("x",))
    s = suspend(SuspensionSpec(base, Poly.parse("x^2", base.space), (2, 2)))
    assert not s.irreducible
    assert "reducible" in s.report


def test_suspension_weight_one_graph():
    base = AffineSpace(("x",))
    s = suspend(SuspensionSpec(base, Poly.parse("x", base.space), (1,)))
    assert s.irreducible
    (rel,) = s.presented.relations
    assert rel == Poly.parse("y_1 - x", s.ring.ambient)


def test_suspension_rejects():
    base = AffineSpace(("x",))
    with pytest.raises(InvalidDescriptor):
        SuspensionSpec(base, Poly.parse("3", base.space), (1,))
    with pytest.raises(InvalidDescriptor):
        SuspensionSpec(base, Poly.parse("x", base.space), (0,))


def test_type1_suspension_extends_variety():
    V = TrinomialVariety(1, ((2,), (1, 1)), a=(0, 1))
    f = V.monomial(2) + 5
    s = suspend(SuspensionSpec(V, f, (3,)))
    W = s.trinomial
    assert W is not None and W.l == ((2,), (1, 1), (3,))
    assert W.a[-1] == -4


def test_fiber_variety():
    X = TrinomialHypersurface(((2,), (3,), (1, 2)))
    fib = fiber_variety(X, 2, 1)
    assert fib.hypersurface.groups == ((2,), (3,), (2,))
    assert fib.unit == "T_21"
    Y = TrinomialHypersurface(((2, 2), (3,), (5,)))
    fib = fiber_variety(Y, 1, 1)
    assert fib.hypersurface.groups == ((), (2, 2), (5,))
    assert fib.unit == "T_11^3"
    with pytest.raises(IndexError):
        fiber_variety(Y, 1, 2)


def test_variable_space_names():
    sp = VariableSpace((1, 2), slack=0, first=1)
    assert sp.names == ("T_11", "T_21", "T_22")
