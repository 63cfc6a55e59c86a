import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trinomial_lab.algebra import Poly
from trinomial_lab.derivations import (
    Derivation,
    Inadmissible,
    NotLocallyNilpotent,
    coarsen,
    exp_automorphism,
    extend_and_check,
    fine_grading,
    homogeneous_parts,
    is_homogeneous_derivation,
    iterate_chain,
    nu_degree,
    partial_derivation,
    verify_lnd,
)
from trinomial_lab.lnd import witness_case1
from trinomial_lab.varieties import TrinomialHypersurface, TrinomialVariety

# t^2 x^3 + y + z^5 as T_01^2 T_02^3 + T_11 + T_21^5
TXYZ = TrinomialHypersurface(((2, 3), (1,), (5,)))
XYZ = TrinomialHypersurface(((2,), (3,), (5,)))


def case1():
    d = Derivation.from_images({"T_11": "5*T_21^4", "T_21": "-1"}, TXYZ.ring)
    return d


def test_case1_admissible():
    d = extend_and_check({"T_11": "5*T_21^4", "T_21": "-1"}, TXYZ.ring)
    assert d.apply(TXYZ.polynomial()).is_zero()


def test_non_admissible_rejected():
    with pytest.raises(Inadmissible) as err:
        extend_and_check({"T_01": 1}, XYZ.ring)
    assert err.value.index == 0
    assert err.value.residue == Poly.parse("2*T_01", XYZ.space)


def test_slack_partial_admissible():
    V = TrinomialVariety(1, ((2,), (3,), (5,)), a=(0, 1, 2), slack=1)
    d = partial_derivation(V.ring, "S_1")
    cert = verify_lnd(d)
    assert cert.bound == 2


def test_zero_derivation_certificate():
    d = Derivation(XYZ.ring, [XYZ.space.zero()] * 3)
    cert = verify_lnd(d)
    assert cert.lengths == (1, 1, 1)


def test_case1_chain_bound():
    d = case1()
    cert = verify_lnd(d)
    # T_11 needs l_21 + 1 = 6 applications
    assert cert.lengths[TXYZ.var(1, 1)] == 6
    assert cert.lengths[TXYZ.var(2, 1)] == 2
    assert cert.bound == 6


def test_euler_rejected():
    sp = XYZ.space
    d = Derivation(XYZ.ring, [sp.gen(v) for v in range(3)])
    with pytest.raises((Inadmissible, NotLocallyNilpotent)):
        verify_lnd(d)


def test_euler_like_admissible_but_not_nilpotent():
    # weights (15, 10, 6) give an admissible semisimple derivation
    sp = XYZ.space
    d = Derivation(XYZ.ring, [sp.gen(0).scale(15), sp.gen(1).scale(10), sp.gen(2).scale(6)])
    extend_and_check(d, XYZ.ring)
    with pytest.raises(NotLocallyNilpotent) as err:
        verify_lnd(d)
    assert err.value.status.startswith("not-nilpotent")
    with pytest.raises(NotLocallyNilpotent):
        iterate_chain(d, sp.gen(0), cap=5)


def test_nu_degree():
    d = case1()
    with pytest.raises(ValueError):
        nu_degree(d, TXYZ.space.gen(0))
    verify_lnd(d)
    sp = TXYZ.space
    assert nu_degree(d, sp.gen(TXYZ.var(1, 1))) == 5
    assert nu_degree(d, sp.gen(TXYZ.var(2, 1))) == 1
    assert nu_degree(d, sp.gen(TXYZ.var(0, 1))) == 0
    with pytest.raises(ValueError):
        nu_degree(d, sp.zero())
    with pytest.raises(NotLocallyNilpotent) as err:
        nu_degree(d, sp.gen(TXYZ.var(1, 1)), cap=3)
    assert err.value.status == "exceeds-cap"


@settings(max_examples=25, deadline=None)
@given(st.fractions(min_value=-4, max_value=4, max_denominator=5), st.fractions(min_value=-4, max_value=4, max_denominator=5))
def test_exp_group_law(s, t):
    d = case1()
    verify_lnd(d)
    es, et, est = exp_automorphism(d, s), exp_automorphism(d, t), exp_automorphism(d, s + t)
    assert es.compose(et) == est
    assert es.preserves_relations()


def test_exp_zero_is_identity():
    d = case1()
    assert exp_automorphism(d, 0).is_identity()


def test_fine_grading_examples():
    g = fine_grading(XYZ.ring)
    assert g.rank == 1
    assert [w[0] for w in g.weights] in ([15, 10, 6], [-15, -10, -6])
    X = TrinomialHypersurface(((2,), (2,), (2,)))
    g = fine_grading(X.ring)
    assert g.rank == 1 and {w[0] for w in g.weights} in ({1}, {-1})
    Y = TrinomialHypersurface(((2,), (3,), (1, 2)))
    g = fine_grading(Y.ring)
    assert g.rank == 2 and g.homogenizes(Y.ring)


def test_coarsen():
    Y = TrinomialHypersurface(((2,), (3,), (1, 2)))
    g = fine_grading(Y.ring)
    c = coarsen(g, [[1, 0]])
    assert c.rank == 1 and c.homogenizes(Y.ring)
    z = coarsen(g, [[0, 0]])
    assert all(w == (0,) for w in z.weights)
    with pytest.raises(ValueError):
        coarsen(g, [[1, 0, 0]])


def test_homogeneous_parts():
    d = case1()
    g = fine_grading(TXYZ.ring)
    parts = homogeneous_parts(d, g)
    assert len(parts) == 1 and parts[0].derivation == d
    assert is_homogeneous_derivation(d, g) == parts[0].degree
    # add a multiple by a nonconstant homogeneous kernel element: two parts
    t = TXYZ.space.gen(0)
    mixed = d + d.times(t)
    parts = homogeneous_parts(mixed, g)
    assert len(parts) == 2 and all(p.extreme for p in parts)
    assert sum((p.derivation for p in parts[1:]), parts[0].derivation) == mixed
    assert is_homogeneous_derivation(mixed, g) is False


def test_from_images_errors():
    with pytest.raises(KeyError):
        Derivation.from_images({"q": "1"}, XYZ.ring)
    with pytest.raises(ValueError):
        Derivation(XYZ.ring, [XYZ.space.zero()])


def test_witness_json_images():
    w = witness_case1(TXYZ, 1, 1)
    assert w.derivation.to_json() == {"images": {"T_11": "5*T_21^4", "T_21": "-1"}}
