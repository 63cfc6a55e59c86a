from fractions import Fraction

import pytest

from trinomial_lab.lnd import PreconditionError
from trinomial_lab.orbits import NotCovered, OffVariety, OrbitPath, orbit_path
from trinomial_lab.varieties import TrinomialHypersurface

X = TrinomialHypersurface(((2,), (2,), (1, 1)))  # x^2 + y^2 + z w


def test_gamma_path_example():
    P, Q = (1, 0, 1, -1), (0, 1, 1, -1)
    path = orbit_path(X, P, Q)
    assert isinstance(path, OrbitPath) and path.recipe == "gamma"
    assert path.endpoint == Q
    assert path.replay() == Q
    # the x-step uses s = (0 - 1) / (-1) = 1
    assert path.steps[0].t == 1
    out = path.to_json()
    assert out["result"] == "path" and out["target"] == ["0", "1", "1", "-1"]


def test_identity_path():
    path = orbit_path(X, (1, 0, 1, -1), (1, 0, 1, -1))
    assert path.steps == [] and path.endpoint == path.source


def test_zero_fixed_coordinate_not_covered():
    # the z-pivot needs w fixed and nonzero; the w-pivot needs z fixed
    res = orbit_path(X, (0, 0, 0, 0), (0, 0, 1, 0))
    assert isinstance(res, NotCovered)
    assert res.to_json()["result"] == "not-covered"
    assert res.reasons


def test_off_variety():
    with pytest.raises(OffVariety):
        orbit_path(X, (1, 1, 1, 1), (0, 1, 1, -1))
    with pytest.raises(OffVariety):
        orbit_path(X, (1, 0, 1), (0, 1, 1, -1))


def test_preconditions():
    with pytest.raises(PreconditionError):
        orbit_path(TrinomialHypersurface(((2,), (2,), (1,)), slack=1), (0, 0, 0, 0), (0, 0, 0, 0))


def test_delta_path():
    Y = TrinomialHypersurface(((2,), (2,), (1, 3)), coeffs=(1, -1, -1))
    P = (3, 1, 8, 1)
    Q = (2, 1, Fraction(3, 8), 2)
    path = orbit_path(Y, P, Q)
    assert isinstance(path, OrbitPath) and path.recipe == "delta"
    assert path.replay() == Q


def test_no_recipe():
    Z = TrinomialHypersurface(((2,), (3,), (5,)))
    res = orbit_path(Z, (0, 0, 0), (1, -1, 0))
    assert isinstance(res, NotCovered)
