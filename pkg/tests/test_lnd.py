import pytest

from trinomial_lab.algebra import Poly
from trinomial_lab.derivations import Derivation, iterate_chain, verify_lnd
from trinomial_lab.lnd import (
    PreconditionError,
    SignPatternError,
    alpha_beta,
    catalog_witnesses,
    descend_nod,
    lift_suspension,
    variety_witness,
    witness_case1,
    witness_case2,
    witness_delta_pm,
    witness_gamma,
    witness_slack,
)
from trinomial_lab.varieties import (
    AffineSpace,
    SuspensionSpec,
    TrinomialHypersurface,
    TrinomialVariety,
    suspend,
)


def images(w):
    return w.derivation.to_json()["images"]


def test_case1_linear():
    X = TrinomialHypersurface(((1,), (1,), (1,)))
    w = witness_case1(X, 0, 1)
    assert images(w) == {"T_01": "1", "T_21": "-1"}
    w.verify()


def test_case1_free_term():
    X = TrinomialHypersurface(((), (1, 2), (3,)))
    w = witness_case1(X, 1, 1)
    assert images(w) == {"T_11": "3*T_21^2", "T_21": "-T_12^2"}
    # l_21 + 1 = 4 applications kill T_11
    assert w.verify().bound == 4


def test_case1_preconditions():
    X = TrinomialHypersurface(((2,), (3,), (5,)))
    with pytest.raises(PreconditionError) as err:
        witness_case1(X, 0, 1)
    assert err.value.clause == "rt-1"
    Y = TrinomialHypersurface(((1,), (3,), (5,)))
    with pytest.raises(PreconditionError):
        witness_case1(Y, 0, 1, partner=(0, 1))
    with pytest.raises(PreconditionError):
        witness_case1(Y, 0, 4)


def test_case2_simple():
    X = TrinomialHypersurface(((2,), (2,), (3,)), coeffs=(1, -1, -1))
    w = witness_case2(X, 0, 1, 1, 1)
    assert images(w) == {"T_01": "3*T_21^2", "T_11": "3*T_21^2", "T_21": "2*T_01 - 2*T_11"}
    w.verify()
    z = X.var(2, 1)
    chain = iterate_chain(w.derivation, X.space.gen(z))
    assert chain[1].is_zero()


def test_case2_with_tail():
    X = TrinomialHypersurface(((2, 4), (2,), (3,)), coeffs=(1, -1, -1))
    w = witness_case2(X, 0, 1, 1, 1)
    sp = X.space
    d = w.derivation
    assert d.image("T_01") == Poly.parse("3*T_21^2", sp)
    assert d.image("T_11") == Poly.parse("3*T_21^2*T_02^2", sp)
    assert d.image("T_21") == Poly.parse("2*T_02^2*(T_01*T_02^2 - T_11)", sp)
    w.verify()


def test_case2_preconditions():
    with pytest.raises(PreconditionError):
        witness_case2(TrinomialHypersurface(((2, 3), (2,), (3,))), 0, 1, 1, 1)
    with pytest.raises(PreconditionError):
        witness_case2(TrinomialHypersurface(((), (2,), (2,))), 1, 1, 2, 1)
    with pytest.raises(SignPatternError) as err:
        witness_case2(TrinomialHypersurface(((2,), (2,), (3,))), 0, 1, 1, 1)
    assert err.value.scaling["lambda_squared"] == "-1"


def test_catalog_uses_split_model():
    X = TrinomialHypersurface(((2,), (2,), (2,)))
    ws = catalog_witnesses(X)
    assert ws and all(w.tag == "rt-case2" for w in ws)
    for w in ws:
        assert w.scaling is not None and w.model != X
        w.verify()
    assert catalog_witnesses(X, split=False) == []


def test_delta_pair():
    X = TrinomialHypersurface(((2,), (2,), (1, 3)), coeffs=(1, -1, -1))
    alpha, beta = alpha_beta(X)
    sp = X.space
    for i in (1, 2):
        plus = witness_delta_pm(X, i, "+")
        minus = witness_delta_pm(X, i, "-")
        plus.verify()
        minus.verify()
        assert minus.derivation.apply(alpha).is_zero()
        assert plus.derivation.apply(beta).is_zero()
        z = sp.gen(X.var(2, i))
        d2 = plus.derivation.apply(plus.derivation.apply(z))
        assert X.ring.normal_form(d2).is_zero()
    with pytest.raises(ValueError):
        witness_delta_pm(X, 1, "*")


def test_gamma():
    X = TrinomialHypersurface(((2,), (2,), (1, 1)))
    w = witness_gamma(X, 0, 1, 2, 1)
    assert images(w) == {"T_01": "T_22", "T_21": "-2*T_01"}
    w.verify()
    assert w.derivation.image("T_22").is_zero()
    with pytest.raises(PreconditionError):
        witness_gamma(X, 2, 2, 2, 1)
    with pytest.raises(PreconditionError):
        witness_gamma(X, 2, 1, 0, 1)


def test_slack_witness():
    X = TrinomialHypersurface(((2,), (3,), (5,)), slack=2)
    w = witness_slack(X)
    assert images(w) == {"S_1": "1"}
    with pytest.raises(PreconditionError):
        witness_slack(TrinomialHypersurface(((2,), (3,), (5,))))


def test_lift_suspension():
    base = AffineSpace(("x",))
    d = Derivation.from_images({"x": "1"}, base.ring)
    s = suspend(SuspensionSpec(base, Poly.parse("x^2", base.space), (1,)))
    w = lift_suspension(d, s)
    assert images(w) == {"x": "1", "y_1": "2*x"}
    w.verify()


def test_lift_suspension_preconditions():
    base = AffineSpace(("x",))
    d = Derivation.from_images({"x": "1"}, base.ring)
    s = suspend(SuspensionSpec(base, Poly.parse("x^2", base.space), (2, 2)))
    with pytest.raises(PreconditionError):
        lift_suspension(d, s)
    s = suspend(SuspensionSpec(base, Poly.parse("x", base.space), (1, 2)))
    w = lift_suspension(d, s)
    w.verify()


def test_descend_nod():
    base = AffineSpace(("x",))
    s = suspend(SuspensionSpec(base, Poly.parse("x", base.space), (2, 3)))
    # y_1^2 y_2^3 = x, so the ring is K[y_1, y_2]; d/dy_1 is homogeneous for the torus
    d = Derivation.from_images({"y_1": "1", "x": "2*y_1*y_2^3"}, s.ring)
    verify_lnd(d)
    desc = descend_nod(d, s)
    assert not desc.witness.derivation.is_zero()
    assert desc.witness.certificate is not None
    nonhom = Derivation.from_images({"y_1": "1 + y_1", "x": "2*y_1*y_2^3 + 2*y_1^2*y_2^3"}, s.ring)
    with pytest.raises(PreconditionError):
        descend_nod(nonhom, s)


def test_variety_witness_type1():
    V = TrinomialVariety(1, ((2, 1), (1, 3), (5,)), a=(0, 1, 2))
    w = variety_witness(V)
    cert = w.verify()
    assert cert.bound >= 2
    rigid = TrinomialVariety(1, ((2,), (1, 1), (2,)), a=(1, 2, 3))
    with pytest.raises(PreconditionError) as err:
        variety_witness(rigid)
    assert err.value.clause == "ridfac-2"


def test_variety_witness_type2():
    V = TrinomialVariety(2, ((2,), (3,), (1,), (2, 1)), A=((0, 1, 1, 2), (1, 0, 1, 3)))
    variety_witness(V).verify()
    W = TrinomialVariety(2, ((2,), (3,), (5,), (7, 1)), A=((0, 1, 1, 2), (1, 0, 1, 3)))
    with pytest.raises(PreconditionError) as err:
        variety_witness(W)
    assert err.value.clause == "ridfac-3"


def test_witness_json():
    X = TrinomialHypersurface(((1,), (1,), (1,)))
    w = witness_case1(X, 0, 1)
    w.verify()
    out = w.to_json()
    assert out["tag"] == "rt-case1"
    assert out["certificate"]["bound"] == 2
    assert out["model"] == X.to_json()
