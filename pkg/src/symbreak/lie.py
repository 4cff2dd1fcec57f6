"""Fixed-basis Lie algebras used by the examples.

Conventions
-----------
Every algebra carries the standard (left) bracket and ``ad_star`` is the
transpose of ``ad``::

    <ad_star(xi, mu), y> == <mu, bracket(xi, y)>

With that choice the component formulas are

* se(2), xi = (theta_dot, v1, v2), nu = (x, a1, a2)::

      ad*_xi nu = (a1*v2 - a2*v1, theta_dot*a2, -theta_dot*a1)

* so(4) = R^3 x R^3 with [(x, a), (y, b)] = (x*y + a*b, x*b + a*y) (cross
  products) and ad*_(x, a)(chi, rho) = (chi*x + rho*a, chi*a + rho*x).

O(2) and D_n only enter through their identity component: o(2) = so(2) = R
and the algebra of D_n is zero-dimensional.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import (
    DimensionError,
    GroupMismatchError,
    NonCommutingError,
    UnsupportedGroupError,
)

# relative cutoff on singular values for numerical rank / nullspaces
RANK_RTOL = 1e-10
# absolute residual for subspace inclusion after projection
INCLUSION_TOL = 1e-9
COMMUTE_TOL = 1e-10

_KINDS = ("Trivial", "SO2", "O2", "Dn", "SO3", "SE2", "SO4", "Torus")


@dataclass(frozen=True)
class GroupId:
    kind: str
    n: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise UnsupportedGroupError(f"unknown group kind {self.kind!r}")
        if self.kind in ("Dn", "Torus"):
            if self.n is None or int(self.n) != self.n or self.n < 1:
                raise ValueError(f"{self.kind} requires an integer n >= 1, got {self.n!r}")
        elif self.n is not None:
            raise ValueError(f"{self.kind} takes no parameter")

    @property
    def dim(self) -> int:
        """Dimension of the Lie algebra (of the identity component)."""
        return {
            "Trivial": 0, "SO2": 1, "O2": 1, "Dn": 0,
            "SO3": 3, "SE2": 3, "SO4": 6,
        }.get(self.kind, self.n)

    @property
    def is_finite(self) -> bool:
        return self.kind in ("Trivial", "Dn")

    @property
    def is_abelian(self) -> bool:
        return self.kind in ("Trivial", "SO2", "O2", "Dn", "Torus")

    def __str__(self):
        if self.n is None:
            return self.kind
        return f"{self.kind}({self.n})"


TRIVIAL = GroupId("Trivial")
SO2 = GroupId("SO2")
O2 = GroupId("O2")
SO3 = GroupId("SO3")
SE2 = GroupId("SE2")
SO4 = GroupId("SO4")


def Dn(n: int) -> GroupId:
    return GroupId("Dn", n)


def Torus(n: int) -> GroupId:
    return GroupId("Torus", n)


def parse_group(text: str) -> GroupId:
    """Inverse of ``str(GroupId)``: ``"SO3"``, ``"Dn(3)"``, ``"Torus(2)"``."""
    text = text.strip()
    if "(" in text:
        kind, rest = text.split("(", 1)
        return GroupId(kind.strip(), int(rest.rstrip(")")))
    return GroupId(text)


def _frozen_array(values, length: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.size != length:
        raise DimensionError(f"{what} needs {length} coordinates, got {arr.size}")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class AlgebraVector:
    group: GroupId
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _frozen_array(self.coords, self.group.dim, f"{self.group} algebra vector"))

    def _check(self, other):
        if not isinstance(other, AlgebraVector) or other.group != self.group:
            raise GroupMismatchError(f"cannot combine {self.group} with {getattr(other, 'group', other)}")

    def __add__(self, other):
        self._check(other)
        return AlgebraVector(self.group, self.coords + other.coords)

    def __sub__(self, other):
        self._check(other)
        return AlgebraVector(self.group, self.coords - other.coords)

    def __mul__(self, scalar):
        return AlgebraVector(self.group, float(scalar) * self.coords)

    __rmul__ = __mul__

    def __neg__(self):
        return AlgebraVector(self.group, -self.coords)

    def __repr__(self):
        return f"AlgebraVector({self.group}, {self.coords.tolist()})"


@dataclass(frozen=True, eq=False)
class CoalgebraVector:
    group: GroupId
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _frozen_array(self.coords, self.group.dim, f"{self.group} coalgebra vector"))

    def __add__(self, other):
        if not isinstance(other, CoalgebraVector) or other.group != self.group:
            raise GroupMismatchError(f"cannot combine {self.group} with {getattr(other, 'group', other)}")
        return CoalgebraVector(self.group, self.coords + other.coords)

    def __mul__(self, scalar):
        return CoalgebraVector(self.group, float(scalar) * self.coords)

    __rmul__ = __mul__

    def __repr__(self):
        return f"CoalgebraVector({self.group}, {self.coords.tolist()})"


def zero(group: GroupId) -> AlgebraVector:
    return AlgebraVector(group, np.zeros(group.dim))


def basis(group: GroupId) -> list[AlgebraVector]:
    return [AlgebraVector(group, e) for e in np.eye(group.dim)]


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A concrete group element.

    Rotations of SO(2)/O(2)/D_n carry ``angle``; reflections of O(2)/D_n set
    ``reflection=True`` and use ``angle`` as the angle of the mirror axis.
    SO(3) elements carry a rotation ``matrix``; torus elements an angle vector.
    """

    group: GroupId
    angle: float | np.ndarray = 0.0
    reflection: bool = False
    matrix: np.ndarray | None = None

    def __post_init__(self):
        kind = self.group.kind
        if self.reflection and kind not in ("O2", "Dn"):
            raise GroupMismatchError(f"{self.group} has no reflections")
        if kind == "SO3":
            R = np.eye(3) if self.matrix is None else np.array(self.matrix, dtype=float)
            if R.shape != (3, 3):
                raise DimensionError("SO(3) payload must be 3x3")
            if np.abs(R.T @ R - np.eye(3)).max() > 1e-12 or abs(np.linalg.det(R) - 1.0) > 1e-12:
                raise ValueError("SO(3) payload is not a rotation matrix")
            R.flags.writeable = False
            object.__setattr__(self, "matrix", R)
        elif kind == "Torus":
            object.__setattr__(self, "angle", _frozen_array(np.broadcast_to(self.angle, (self.group.n,)), self.group.n, "torus element"))
        else:
            object.__setattr__(self, "angle", float(self.angle))
        if kind == "Dn":
            # D_n elements: rotations by 2 pi k / n, mirrors at pi k / n
            step = (np.pi if self.reflection else 2 * np.pi) / self.group.n
            k = self.angle / step
            if abs(k - round(k)) > 1e-9:
                raise ValueError(f"angle {self.angle} does not belong to {self.group}")

    @property
    def det(self) -> int:
        return -1 if self.reflection else 1

    def __repr__(self):
        if self.group.kind == "SO3":
            return f"GroupElement(SO3, rotvec={Rotation.from_matrix(self.matrix).as_rotvec().tolist()})"
        tag = "reflection" if self.reflection else "rotation"
        return f"GroupElement({self.group}, {tag}, angle={self.angle})"


def rotation(angle: float, group: GroupId = SO2) -> GroupElement:
    return GroupElement(group, angle=angle)


def reflection(axis_angle: float, group: GroupId = O2) -> GroupElement:
    return GroupElement(group, angle=axis_angle, reflection=True)


def so3_element(rotvec) -> GroupElement:
    """SO(3) element from an axis-angle vector."""
    return GroupElement(SO3, matrix=Rotation.from_rotvec(np.asarray(rotvec, dtype=float)).as_matrix())


def dihedral_elements(n: int) -> list[GroupElement]:
    """All 2n elements of D_n acting on the plane."""
    g = Dn(n)
    rots = [GroupElement(g, angle=2 * np.pi * k / n) for k in range(n)]
    refl = [GroupElement(g, angle=np.pi * k / n, reflection=True) for k in range(n)]
    return rots + refl


def _same(a, b):
    if a.group != b.group:
        raise GroupMismatchError(f"group mismatch: {a.group} vs {b.group}")


def pairing(mu: CoalgebraVector, xi: AlgebraVector) -> float:
    _same(mu, xi)
    return float(mu.coords @ xi.coords)


def _cross(a, b):
    return np.cross(a, b)


def bracket(x: AlgebraVector, y: AlgebraVector) -> AlgebraVector:
    _same(x, y)
    kind = x.group.kind
    a, b = x.coords, y.coords
    if kind == "SO3":
        out = _cross(a, b)
    elif kind == "SO4":
        out = np.concatenate([
            _cross(a[:3], b[:3]) + _cross(a[3:], b[3:]),
            _cross(a[:3], b[3:]) + _cross(a[3:], b[:3]),
        ])
    elif kind == "SE2":
        # [(w, v), (s, u)] = (0, w J u - s J v), J = rotation by +pi/2
        w, v = a[0], a[1:]
        s, u = b[0], b[1:]
        Jv = np.array([-v[1], v[0]])
        Ju = np.array([-u[1], u[0]])
        out = np.concatenate([[0.0], w * Ju - s * Jv])
    elif kind in ("Torus", "SO2", "O2", "Trivial"):
        out = np.zeros(x.group.dim)
    else:
        raise UnsupportedGroupError(f"bracket not defined for {x.group}")
    return AlgebraVector(x.group, out)


def ad_star(xi: AlgebraVector, mu: CoalgebraVector) -> CoalgebraVector:
    _same(xi, mu)
    kind = xi.group.kind
    x, m = xi.coords, mu.coords
    if kind == "SE2":
        th, v1, v2 = x
        _, a1, a2 = m
        out = np.array([a1 * v2 - a2 * v1, th * a2, -th * a1])
    elif kind == "SO3":
        out = _cross(m, x)
    elif kind == "SO4":
        chi, rho = m[:3], m[3:]
        xx, aa = x[:3], x[3:]
        out = np.concatenate([_cross(chi, xx) + _cross(rho, aa), _cross(chi, aa) + _cross(rho, xx)])
    elif kind in ("Torus", "SO2", "O2", "Trivial"):
        out = np.zeros(xi.group.dim)
    else:
        raise UnsupportedGroupError(f"ad* not defined for {xi.group}")
    return CoalgebraVector(xi.group, out)


def ad_matrix(xi: AlgebraVector) -> np.ndarray:
    """Matrix of y -> [xi, y]."""
    return np.column_stack([bracket(xi, e).coords for e in basis(xi.group)]) if xi.group.dim else np.zeros((0, 0))


def coadjoint_matrix(mu: CoalgebraVector) -> np.ndarray:
    """Matrix of the linear map x -> ad*_x mu."""
    g = mu.group
    if g.dim == 0:
        return np.zeros((0, 0))
    return np.column_stack([ad_star(e, mu).coords for e in basis(g)])


def nullspace(A: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis (columns) of ker A, singular values below rtol * s_max count as zero."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[1]
    if n == 0:
        return np.zeros((0, 0))
    if A.size == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(A)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        return np.eye(n)
    rank = int(np.sum(s > rtol * smax))
    return vt[rank:].T.copy()


def rank(A: np.ndarray, rtol: float = RANK_RTOL) -> int:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def orthonormal_span(A: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis of the column span of A."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.size == 0:
        return np.zeros((A.shape[0], 0))
    u, s, _ = np.linalg.svd(A, full_matrices=False)
    if s[0] == 0.0:
        return np.zeros((A.shape[0], 0))
    return u[:, : int(np.sum(s > rtol * s[0]))]


def orthogonal_complement(Q: np.ndarray, within: np.ndarray | None = None) -> np.ndarray:
    """Orthonormal complement of span(Q) inside span(within) (default: whole space)."""
    n = Q.shape[0]
    W = np.eye(n) if within is None else orthonormal_span(within)
    if Q.shape[1] == 0:
        return W
    Qo = orthonormal_span(Q)
    # coordinates of Q inside W, then nullspace of their transpose
    C = W.T @ Qo
    K = nullspace(C.T)
    return W @ K


def subspace_contains(big: np.ndarray, small: np.ndarray, tol: float = INCLUSION_TOL):
    """Check span(small) within span(big). Returns (ok, first violating column or None)."""
    Q = orthonormal_span(big) if big.size else np.zeros((small.shape[0], 0))
    for j in range(small.shape[1]):
        b = small[:, j]
        resid = b - Q @ (Q.T @ b)
        if np.linalg.norm(resid) > tol * max(1.0, np.linalg.norm(b)):
            return False, b.copy()
    return True, None


@dataclass(frozen=True, eq=False)
class SubalgebraEmbedding:
    """Linear inclusion i_h: h -> g given by the columns of ``matrix``."""

    sub: GroupId
    ambient: GroupId
    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float).reshape(self.ambient.dim, self.sub.dim)
        M.flags.writeable = False
        object.__setattr__(self, "matrix", M)

    def __call__(self, x: AlgebraVector) -> AlgebraVector:
        if x.group != self.sub:
            raise GroupMismatchError(f"embedding {self.name} expects {self.sub}, got {x.group}")
        return AlgebraVector(self.ambient, self.matrix @ x.coords)


def restrict(mu: CoalgebraVector, embedding: SubalgebraEmbedding) -> CoalgebraVector:
    """Dual of the inclusion: i_h^*(mu) = mu restricted to h."""
    if mu.group != embedding.ambient:
        raise DimensionError(f"{embedding.name or 'embedding'} acts on {embedding.ambient}*, got {mu.group}*")
    return CoalgebraVector(embedding.sub, embedding.matrix.T @ mu.coords)


_I3 = np.eye(3)
SO3_ROT_IN_SO4 = SubalgebraEmbedding(SO3, SO4, np.vstack([_I3, np.zeros((3, 3))]), "so(3)_r")
SO3_DIAG_IN_SO4 = SubalgebraEmbedding(SO3, SO4, np.vstack([_I3 / 2, _I3 / 2]), "so(3)_d")
SO2_IN_SO3 = SubalgebraEmbedding(SO2, SO3, np.array([[0.0], [0.0], [1.0]]), "so(2) about e3")


def identity_embedding(g: GroupId) -> SubalgebraEmbedding:
    return SubalgebraEmbedding(g, g, np.eye(g.dim), f"id_{g}")


def discrete_embedding(h: GroupId, g: GroupId) -> SubalgebraEmbedding:
    """Embedding of a zero-dimensional algebra (finite subgroup)."""
    return SubalgebraEmbedding(h, g, np.zeros((g.dim, 0)), f"{h} in {g}")


def subtorus_embedding(n: int, r: int) -> SubalgebraEmbedding:
    """T^r in T^n as the first r circle factors."""
    sub = TRIVIAL if r == 0 else Torus(r)
    return SubalgebraEmbedding(sub, Torus(n), np.eye(n)[:, :r], f"t^{r} in t^{n}")


def stabilizer_algebra(mu: CoalgebraVector) -> np.ndarray:
    """Orthonormal basis (columns, algebra coordinates) of g_mu = {x : ad*_x mu = 0}."""
    if mu.group.kind == "Dn":
        raise UnsupportedGroupError("D_n has a trivial algebra")
    if mu.group.dim == 0:
        return np.zeros((0, 0))
    return nullspace(coadjoint_matrix(mu))


def centralizer_algebra(xi: AlgebraVector) -> np.ndarray:
    """Orthonormal basis of g_xi = {y : [y, xi] = 0}."""
    if xi.group.dim == 0:
        return np.zeros((0, 0))
    return nullspace(ad_matrix(xi))


def sub_stabilizer(mu: CoalgebraVector, embedding: SubalgebraEmbedding) -> np.ndarray:
    """Basis of h_mu = h cap g_mu in subalgebra coordinates."""
    if embedding.sub.dim == 0:
        return np.zeros((0, 0))
    if mu.group.dim == 0 or not np.any(mu.coords):
        return np.eye(embedding.sub.dim)
    return nullspace(coadjoint_matrix(mu) @ embedding.matrix)


@dataclass(frozen=True)
class RCheck:
    holds: bool
    g_mu: np.ndarray = field(repr=False)
    g_xi: np.ndarray = field(repr=False)
    witness: np.ndarray | None = None

    @property
    def dims(self) -> tuple[int, int]:
        return self.g_mu.shape[1], self.g_xi.shape[1]


def check_R(mu: CoalgebraVector, xi: AlgebraVector) -> RCheck:
    """Regularity condition: is the stabilizer of mu contained in the centralizer of xi?"""
    _same(mu, xi)
    comm = ad_star(xi, mu).coords
    if np.linalg.norm(comm) > COMMUTE_TOL * max(1.0, np.linalg.norm(mu.coords) * np.linalg.norm(xi.coords)):
        raise NonCommutingError(f"ad*_xi mu = {comm.tolist()} is not zero")
    g_mu = stabilizer_algebra(mu)
    g_xi = centralizer_algebra(xi)
    ok, witness = subspace_contains(g_xi, g_mu)
    return RCheck(ok, g_mu, g_xi, witness)
