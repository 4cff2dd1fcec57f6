import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from symbreak import lie
from symbreak.errors import DimensionError, GroupMismatchError, NonCommutingError, UnsupportedGroupError

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def vec(n):
    return arrays(np.float64, n, elements=finite)


GROUPS = [lie.SO3, lie.SE2, lie.SO4]
e1, e2, e3 = np.eye(3)


def test_group_ids():
    assert lie.Dn(3).dim == 0 and lie.Dn(3).is_finite
    assert lie.SO4.dim == 6 and lie.Torus(4).dim == 4
    assert str(lie.Dn(3)) == "Dn(3)"
    assert lie.parse_group("Torus(2)") == lie.Torus(2)
    with pytest.raises(ValueError):
        lie.Dn(0)
    with pytest.raises(UnsupportedGroupError):
        lie.GroupId("SU2")


def test_vectors_check_dimension_and_are_readonly():
    with pytest.raises(DimensionError):
        lie.AlgebraVector(lie.SO3, [1.0, 2.0])
    v = lie.AlgebraVector(lie.SO3, [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        v.coords[0] = 5.0
    with pytest.raises(GroupMismatchError):
        v + lie.AlgebraVector(lie.SE2, [1, 2, 3])


def test_pairing_so4():
    mu = lie.CoalgebraVector(lie.SO4, np.concatenate([e1, e2]))
    xi = lie.AlgebraVector(lie.SO4, np.concatenate([e1, e2]))
    assert lie.pairing(mu, xi) == 2.0


def test_brackets():
    so4 = lambda a, b: lie.AlgebraVector(lie.SO4, np.concatenate([a, b]))  # noqa: E731
    assert np.allclose(lie.bracket(so4(e1, 0 * e1), so4(e2, 0 * e2)).coords, np.concatenate([e3, 0 * e3]))
    d = lie.bracket(so4(e1 / 2, e1 / 2), so4(e2 / 2, e2 / 2)).coords
    assert np.allclose(d, np.concatenate([e3 / 2, e3 / 2]))
    t = lie.Torus(3)
    assert not np.any(lie.bracket(lie.AlgebraVector(t, [1, 2, 3]), lie.AlgebraVector(t, [4, 5, 6])).coords)
    with pytest.raises(UnsupportedGroupError):
        lie.bracket(lie.AlgebraVector(lie.Dn(2), []), lie.AlgebraVector(lie.Dn(2), []))


def test_ad_star_examples():
    out = lie.ad_star(lie.AlgebraVector(lie.SE2, [1, 0, 0]), lie.CoalgebraVector(lie.SE2, [0, 1, 0]))
    assert np.array_equal(out.coords, [0, 0, -1])
    out = lie.ad_star(lie.AlgebraVector(lie.SO4, np.concatenate([e1, 0 * e1])), lie.CoalgebraVector(lie.SO4, np.concatenate([e2, 0 * e2])))
    assert np.allclose(out.coords, np.concatenate([-e3, 0 * e3]))
    with pytest.raises(GroupMismatchError):
        lie.ad_star(lie.AlgebraVector(lie.SO3, e1), lie.CoalgebraVector(lie.SE2, e1))


@pytest.mark.parametrize("g", GROUPS, ids=str)
@given(data=st.data())
def test_ad_star_is_dual_of_bracket(g, data):
    xi, y, mu = (data.draw(vec(g.dim)) for _ in range(3))
    xi, y, mu = lie.AlgebraVector(g, xi), lie.AlgebraVector(g, y), lie.CoalgebraVector(g, mu)
    lhs = lie.pairing(lie.ad_star(xi, mu), y)
    rhs = lie.pairing(mu, lie.bracket(xi, y))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, np.abs(xi.coords).max() * np.abs(y.coords).max() * np.abs(mu.coords).max())


@pytest.mark.parametrize("g", GROUPS, ids=str)
@given(data=st.data())
def test_bracket_antisymmetric_and_jacobi(g, data):
    x, y, z = (lie.AlgebraVector(g, data.draw(vec(g.dim))) for _ in range(3))
    B = lie.bracket
    assert np.allclose(B(x, y).coords, -B(y, x).coords, atol=1e-12)
    scale = max(1.0, *(np.abs(v.coords).max() for v in (x, y, z))) ** 3
    assert np.linalg.norm((B(x, B(y, z)) + B(y, B(z, x)) + B(z, B(x, y))).coords) <= 1e-12 * scale


@given(a=finite, b=finite, x=vec(6), y=vec(6), m=vec(6))
def test_pairing_bilinear(a, b, x, y, m):
    mu = lie.CoalgebraVector(lie.SO4, m)
    X, Y = lie.AlgebraVector(lie.SO4, x), lie.AlgebraVector(lie.SO4, y)
    lhs = lie.pairing(mu, a * X + b * Y)
    rhs = a * lie.pairing(mu, X) + b * lie.pairing(mu, Y)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(a) + abs(b)) * 1e3


def test_restrict():
    mu = lie.CoalgebraVector(lie.SO4, [1, 2, 3, 4, 5, 6])
    assert np.array_equal(lie.restrict(mu, lie.SO3_ROT_IN_SO4).coords, [1, 2, 3])
    assert np.allclose(lie.restrict(mu, lie.SO3_DIAG_IN_SO4).coords, [2.5, 3.5, 4.5])
    assert not np.any(lie.restrict(lie.CoalgebraVector(lie.SO4, np.zeros(6)), lie.SO3_DIAG_IN_SO4).coords)
    with pytest.raises(DimensionError):
        lie.restrict(lie.CoalgebraVector(lie.SO3, [1, 2, 3]), lie.SO3_ROT_IN_SO4)


def test_stabilizers():
    assert lie.stabilizer_algebra(lie.CoalgebraVector(lie.SO4, np.zeros(6))).shape[1] == 6
    g = lie.stabilizer_algebra(lie.CoalgebraVector(lie.SO4, np.concatenate([e3, 2 * e3])))
    assert g.shape[1] == 2
    # independent check: elements (x, a) with x, a parallel to e3
    for col in g.T:
        assert np.linalg.norm(np.cross(col[:3], e3)) < 1e-12 and np.linalg.norm(np.cross(col[3:], e3)) < 1e-12
    assert lie.stabilizer_algebra(lie.CoalgebraVector(lie.SE2, [0, 0.3, -2])).shape[1] == 1


def test_check_R_cases():
    so4 = lambda a, b: lie.AlgebraVector(lie.SO4, np.concatenate([a, b]))  # noqa: E731
    co4 = lambda a, b: lie.CoalgebraVector(lie.SO4, np.concatenate([a, b]))  # noqa: E731
    a = lie.check_R(co4(0 * e1, 0 * e1), so4(e1, 0 * e1))
    assert not a.holds and a.dims == (6, 2) and a.witness is not None
    assert lie.check_R(co4(e1, e2), so4(0 * e1, 0 * e1)).holds
    assert lie.check_R(co4(2 * e3, e3), so4(0.5 * e3, 0 * e3)).holds
    assert not lie.check_R(co4(e3, e3), so4(0.5 * e3, 0 * e3)).holds
    with pytest.raises(NonCommutingError):
        lie.check_R(co4(e1, 0 * e1), so4(e2, 0 * e2))


def test_group_elements():
    with pytest.raises(ValueError):
        lie.GroupElement(lie.SO3, matrix=np.diag([1.0, 1.0, -1.0]))
    assert len(lie.dihedral_elements(3)) == 6
    r = lie.so3_element([0, 0, np.pi / 2])
    assert np.allclose(r.matrix @ e1, e2)
