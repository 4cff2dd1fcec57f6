"""Phase spaces, group actions, momentum maps and the perturbed Hamiltonian families.

All computations use ambient coordinates:

* ``cylinder``      -- (theta, z) on S^1 x R, theta kept in [0, 2 pi)
* ``tstar_sphere``  -- (x, y) in R^6 with |x| = 1 and <x, y> = 0
* ``se2_dual``      -- nu = (x, alpha1, alpha2) in se(2)* = R^3

T*S^2 is handled extrinsically: gradients are ambient gradients projected onto
the tangent space of the two constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import lie
from .errors import ConstraintViolationError, GroupMismatchError, SpaceMismatchError
from .lie import AlgebraVector, CoalgebraVector, GroupElement, GroupId

TWO_PI = 2.0 * np.pi
SPACES = ("cylinder", "tstar_sphere", "se2_dual")
AMBIENT_DIM = {"cylinder": 2, "tstar_sphere": 6, "se2_dual": 3}
CONSTRAINT_TOL = 1e-10

Velocity = AlgebraVector


def wrap_angle(theta: float) -> float:
    t = float(np.mod(theta, TWO_PI))
    return 0.0 if t >= TWO_PI else t


@dataclass(frozen=True, eq=False)
class PhasePoint:
    space: str
    coords: np.ndarray

    def __post_init__(self):
        if self.space not in SPACES:
            raise SpaceMismatchError(f"unknown phase space {self.space!r}")
        c = np.array(self.coords, dtype=float).reshape(-1)
        if c.size != AMBIENT_DIM[self.space]:
            raise SpaceMismatchError(f"{self.space} needs {AMBIENT_DIM[self.space]} coordinates")
        if not np.all(np.isfinite(c)):
            raise ConstraintViolationError("non-finite coordinates")
        if self.space == "cylinder":
            c[0] = wrap_angle(c[0])
        elif self.space == "tstar_sphere":
            x, y = c[:3], c[3:]
            if abs(x @ x - 1.0) > CONSTRAINT_TOL or abs(x @ y) > CONSTRAINT_TOL * max(1.0, np.linalg.norm(y)):
                raise ConstraintViolationError(f"({x.tolist()}, {y.tolist()}) is not in T*S^2")
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    @classmethod
    def cylinder(cls, theta: float, z: float) -> PhasePoint:
        return cls("cylinder", [theta, z])

    @classmethod
    def tstar_sphere(cls, x, y) -> PhasePoint:
        return cls("tstar_sphere", np.concatenate([np.ravel(x), np.ravel(y)]))

    @classmethod
    def se2_dual(cls, nu) -> PhasePoint:
        return cls("se2_dual", nu)

    @property
    def theta(self) -> float:
        return float(self.coords[0])

    @property
    def z(self) -> float:
        return float(self.coords[1])

    @property
    def x(self) -> np.ndarray:
        return self.coords[:3]

    @property
    def y(self) -> np.ndarray:
        return self.coords[3:]

    @property
    def nu(self) -> np.ndarray:
        return self.coords

    def __repr__(self):
        return f"PhasePoint({self.space}, {np.round(self.coords, 12).tolist()})"


def retract(space: str, coords, casimir: float | None = None) -> np.ndarray:
    """Map ambient coordinates back onto the phase space (and Casimir leaf, if given)."""
    c = np.array(coords, dtype=float)
    if space == "cylinder":
        c[0] = wrap_angle(c[0])
    elif space == "tstar_sphere":
        x = c[:3] / np.linalg.norm(c[:3])
        y = c[3:] - (x @ c[3:]) * x
        c = np.concatenate([x, y])
    elif space == "se2_dual" and casimir is not None:
        r = np.hypot(c[1], c[2])
        if r > 0:
            c[1:] *= np.sqrt(casimir) / r
    return c


def distance(space: str, a, b) -> float:
    """Ambient distance, with the angle of the cylinder compared modulo 2 pi."""
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    if space == "cylinder":
        d = d.copy()
        d[0] = (d[0] + np.pi) % TWO_PI - np.pi
    return float(np.linalg.norm(d))


class Constraint(NamedTuple):
    value: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    hess: Callable[[np.ndarray], np.ndarray]


_TSTAR_CONSTRAINTS = (
    Constraint(
        lambda c: 0.5 * (c[:3] @ c[:3] - 1.0),
        lambda c: np.concatenate([c[:3], np.zeros(3)]),
        lambda c: np.diag([1.0, 1.0, 1.0, 0.0, 0.0, 0.0]),
    ),
    Constraint(
        lambda c: c[:3] @ c[3:],
        lambda c: np.concatenate([c[3:], c[:3]]),
        lambda c: np.block([[np.zeros((3, 3)), np.eye(3)], [np.eye(3), np.zeros((3, 3))]]),
    ),
)


def manifold_constraints(space: str) -> tuple[Constraint, ...]:
    return _TSTAR_CONSTRAINTS if space == "tstar_sphere" else ()


def casimir_constraint(level: float) -> Constraint:
    """Coadjoint cylinder alpha1^2 + alpha2^2 = level in se(2)*."""
    return Constraint(
        lambda c: 0.5 * (c[1] ** 2 + c[2] ** 2 - level),
        lambda c: np.array([0.0, c[1], c[2]]),
        lambda c: np.diag([0.0, 1.0, 1.0]),
    )


def tangent_basis(space: str, coords, extra: tuple[Constraint, ...] = ()) -> np.ndarray:
    """Orthonormal basis (columns) of the tangent space of the constraint set at coords."""
    cons = manifold_constraints(space) + tuple(extra)
    n = AMBIENT_DIM[space]
    if not cons:
        return np.eye(n)
    J = np.array([c.grad(np.asarray(coords, dtype=float)) for c in cons])
    return lie.nullspace(J)


def random_point(space: str, rng: np.random.Generator, scale: float = 1.0) -> PhasePoint:
    if space == "cylinder":
        return PhasePoint.cylinder(rng.uniform(0, TWO_PI), scale * rng.normal())
    if space == "tstar_sphere":
        x = rng.normal(size=3)
        x /= np.linalg.norm(x)
        y = scale * rng.normal(size=3)
        y -= (x @ y) * x
        return PhasePoint.tstar_sphere(x, y)
    return PhasePoint.se2_dual(scale * rng.normal(size=3))


# --------------------------------------------------------------------------
# Hamiltonian families


class HamiltonianFamily:
    """A smooth family h_lambda of H-invariant functions with G-invariant h_0.

    Subclasses provide ``energy``, ``grad`` and ``hess`` on ambient coordinates.
    """

    kind: str = ""
    space: str = ""
    G: GroupId = lie.TRIVIAL
    H: GroupId = lie.TRIVIAL

    @property
    def h_embedding(self) -> lie.SubalgebraEmbedding:
        return lie.discrete_embedding(self.H, self.G)

    def energy(self, lam: float, c: np.ndarray) -> float:
        raise NotImplementedError

    def grad(self, lam: float, c: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def hess(self, lam: float, c: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def params(self) -> dict:
        return {}


@dataclass(frozen=True)
class CylinderCos(HamiltonianFamily):
    """h_lambda(theta, z) = z^2 + lambda cos(n theta) on S^1 x R, broken from O(2) to D_n."""

    n: int = 3

    kind = "CylinderCos"
    space = "cylinder"
    G = lie.O2

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")

    @property
    def H(self):
        return lie.Dn(self.n)

    def energy(self, lam, c):
        return c[1] ** 2 + lam * np.cos(self.n * c[0])

    def grad(self, lam, c):
        return np.array([-lam * self.n * np.sin(self.n * c[0]), 2.0 * c[1]])

    def hess(self, lam, c):
        return np.array([[-lam * self.n**2 * np.cos(self.n * c[0]), 0.0], [0.0, 2.0]])

    def params(self):
        return {"n": self.n}


class _BodyFluid(HamiltonianFamily):
    """Kinetic energy 1/2 nu . diag(a, b, c) nu on se(2)*; subclasses supply the inverse inertia."""

    space = "se2_dual"
    G = lie.O2
    H = lie.Dn(2)

    def inverse_inertia(self, lam: float) -> np.ndarray:
        raise NotImplementedError

    def energy(self, lam, c):
        return 0.5 * float(self.inverse_inertia(lam) @ (np.asarray(c) ** 2))

    def grad(self, lam, c):
        return self.inverse_inertia(lam) * np.asarray(c)

    def hess(self, lam, c):
        return np.diag(self.inverse_inertia(lam))


@dataclass(frozen=True)
class BodyFluidAdded(_BodyFluid):
    """Ellipse in vacuum perturbed by adding fluid; lambda = d rho with d = (A^2 - B^2)/m."""

    m: float = 1.0
    I_B: float = 1.0
    A: float = 2.0
    B: float = 1.0
    d: float = field(init=False, repr=False)
    c1: float = field(init=False, repr=False)
    c2: float = field(init=False, repr=False)
    c3: float = field(init=False, repr=False)

    kind = "BodyFluidAdded"

    def __post_init__(self):
        if not (self.m > 0 and self.I_B > 0 and self.B > 0 and self.A > self.B):
            raise ValueError("BodyFluidAdded needs m > 0, I_B > 0 and A > B > 0")
        d = (self.A**2 - self.B**2) / self.m
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "c1", self.m**2 * d * np.pi / 4)
        object.__setattr__(self, "c2", np.pi * (self.A**2 - self.m * d) / (4 * d))
        object.__setattr__(self, "c3", np.pi * (self.B**2 + self.m * d) / (4 * d))

    def inverse_inertia(self, lam):
        return np.array([
            1.0 / (self.I_B + lam * self.c1),
            1.0 / (self.m + lam * self.c2),
            1.0 / (self.m + lam * self.c3),
        ])

    def rho(self, lam: float) -> float:
        """Fluid density that corresponds to the parameter value."""
        return lam / self.d

    def params(self):
        return {"m": self.m, "I_B": self.I_B, "A": self.A, "B": self.B}


@dataclass(frozen=True)
class BodyFluidShape(_BodyFluid):
    """Circular body in fluid deformed into an ellipse; lambda = (A^2 - B^2)/B^2."""

    m: float = 1.0
    I_B: float = 1.0
    B: float = 1.0
    rho: float = 1.0
    d1: float = field(init=False, repr=False)
    d2: float = field(init=False, repr=False)

    kind = "BodyFluidShape"

    def __post_init__(self):
        if not (self.m > 0 and self.I_B > 0 and self.B > 0 and self.rho > 0):
            raise ValueError("BodyFluidShape needs m, I_B, B, rho > 0")
        object.__setattr__(self, "d1", self.rho * np.pi * self.B**4 / 4)
        object.__setattr__(self, "d2", self.rho * np.pi * self.B**2 / 4)

    def inverse_inertia(self, lam):
        return np.array([
            1.0 / (self.I_B + lam**2 * self.d1),
            1.0 / (self.m + self.d2),
            1.0 / (self.m + (lam + 1.0) * self.d2),
        ])

    def semi_major_axis(self, lam: float) -> float:
        return self.B * np.sqrt(1.0 + lam)

    def params(self):
        return {"m": self.m, "I_B": self.I_B, "B": self.B, "rho": self.rho}


@dataclass(frozen=True)
class PendulumGravity(HamiltonianFamily):
    """h_lambda(x, y) = |y|^2 / 2 + lambda <x, e3> on T*S^2, broken from SO(3) to SO(2)."""

    kind = "PendulumGravity"
    space = "tstar_sphere"
    G = lie.SO3
    H = lie.SO2

    @property
    def h_embedding(self):
        return lie.SO2_IN_SO3

    def energy(self, lam, c):
        return 0.5 * float(c[3:] @ c[3:]) + lam * c[2]

    def grad(self, lam, c):
        return np.concatenate([[0.0, 0.0, lam], c[3:]])

    def hess(self, lam, c):
        return np.diag([0.0, 0.0, 0.0, 1.0, 1.0, 1.0])


@dataclass(frozen=True)
class Constant(HamiltonianFamily):
    """h = value everywhere; fully degenerate, used as a control case."""

    value: float = 0.0
    on: str = "cylinder"

    kind = "Constant"
    G = lie.O2
    H = lie.O2

    @property
    def space(self):
        return self.on

    @property
    def h_embedding(self):
        return lie.identity_embedding(self.G)

    def energy(self, lam, c):
        return float(self.value)

    def grad(self, lam, c):
        return np.zeros(AMBIENT_DIM[self.on])

    def hess(self, lam, c):
        n = AMBIENT_DIM[self.on]
        return np.zeros((n, n))


def _check_space(family: HamiltonianFamily, p: PhasePoint):
    if p.space != family.space:
        raise SpaceMismatchError(f"{family.kind} lives on {family.space}, got a {p.space} point")


def evaluate(family: HamiltonianFamily, lam: float, p: PhasePoint) -> float:
    _check_space(family, p)
    return float(family.energy(lam, p.coords))


def gradient(family: HamiltonianFamily, lam: float, p: PhasePoint) -> np.ndarray:
    """Intrinsic gradient; on T*S^2 the ambient gradient projected to the tangent space."""
    _check_space(family, p)
    g = family.grad(lam, p.coords)
    if p.space == "tstar_sphere":
        T = tangent_basis(p.space, p.coords)
        g = T @ (T.T @ g)
    return g


# --------------------------------------------------------------------------
# momentum maps and generators


def momentum_G_ambient(space: str, c: np.ndarray):
    """Value, Jacobian and second derivatives (shape (k, n, n)) of the G-momentum map."""
    c = np.asarray(c, dtype=float)
    if space == "cylinder":
        return np.array([c[1]]), np.array([[0.0, 1.0]]), np.zeros((1, 2, 2))
    if space == "se2_dual":
        # angular momentum component of nu
        return np.array([c[0]]), np.array([[1.0, 0.0, 0.0]]), np.zeros((1, 3, 3))
    x, y = c[:3], c[3:]
    val = np.cross(x, y)
    J = np.hstack([-_skew(y), _skew(x)])
    Hs = np.zeros((3, 6, 6))
    for i in range(3):
        eps = np.zeros((3, 3))
        for j in range(3):
            for k in range(3):
                eps[j, k] = _levi_civita(i, j, k)
        Hs[i, :3, 3:] = eps
        Hs[i, 3:, :3] = eps.T
    return val, J, Hs


def _skew(v):
    return np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])


def _levi_civita(i, j, k):
    return (i - j) * (j - k) * (k - i) / 2


def momentum_H_ambient(family: HamiltonianFamily, c: np.ndarray):
    val, J, Hs = momentum_G_ambient(family.space, c)
    E = family.h_embedding.matrix
    return E.T @ val, E.T @ J, np.einsum("ka,kij->aij", E, Hs)


def momentum_G(family: HamiltonianFamily, p: PhasePoint) -> CoalgebraVector:
    _check_space(family, p)
    return CoalgebraVector(family.G, momentum_G_ambient(p.space, p.coords)[0])


def momentum_H(family: HamiltonianFamily, p: PhasePoint) -> CoalgebraVector:
    return lie.restrict(momentum_G(family, p), family.h_embedding)


def generators(space: str, c) -> np.ndarray:
    """Columns x_M(p) for a basis of the G-algebra (identity component)."""
    c = np.asarray(c, dtype=float)
    if space == "cylinder":
        return np.array([[1.0], [0.0]])
    if space == "se2_dual":
        return np.array([[0.0], [-c[2]], [c[1]]])
    x, y = c[:3], c[3:]
    cols = [np.concatenate([np.cross(e, x), np.cross(e, y)]) for e in np.eye(3)]
    return np.column_stack(cols)


def h_generators(family: HamiltonianFamily, c) -> np.ndarray:
    return generators(family.space, c) @ family.h_embedding.matrix


def _pairing_momentum(family: HamiltonianFamily, xi: AlgebraVector):
    if xi.group == family.H and family.H.dim > 0:
        return momentum_H_ambient
    if xi.group == family.G:
        return lambda fam, c: momentum_G_ambient(fam.space, c)
    if xi.group == family.H:
        return momentum_H_ambient
    raise GroupMismatchError(f"velocity in {xi.group} does not match {family.G} or {family.H}")


def augmented(family: HamiltonianFamily, lam: float, xi: AlgebraVector, p: PhasePoint) -> float:
    """h_lambda^xi = h_lambda - <Phi, xi> with Phi the momentum map of xi's group."""
    _check_space(family, p)
    val, _, _ = _pairing_momentum(family, xi)(family, p.coords)
    return evaluate(family, lam, p) - float(val @ xi.coords)


def augmented_ambient(family, lam, xi: AlgebraVector, c):
    """Value, ambient gradient and ambient Hessian of the augmented Hamiltonian."""
    val, J, Hs = _pairing_momentum(family, xi)(family, c)
    w = xi.coords
    return (
        family.energy(lam, c) - float(val @ w),
        family.grad(lam, c) - J.T @ w,
        family.hess(lam, c) - np.einsum("k,kij->ij", w, Hs),
    )


def augmented_gradient(family: HamiltonianFamily, lam: float, xi: AlgebraVector, p: PhasePoint) -> np.ndarray:
    _check_space(family, p)
    g = augmented_ambient(family, lam, xi, p.coords)[1]
    if p.space == "tstar_sphere":
        T = tangent_basis(p.space, p.coords)
        g = T @ (T.T @ g)
    return g


# --------------------------------------------------------------------------
# group actions


def _rot2(phi):
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


def act(g: GroupElement, p: PhasePoint) -> PhasePoint:
    kind = g.group.kind
    planar = kind in ("O2", "Dn", "SO2")
    if p.space == "cylinder" and planar:
        theta = 2 * g.angle - p.theta if g.reflection else p.theta + g.angle
        return PhasePoint.cylinder(theta, p.z)
    if p.space == "se2_dual" and planar:
        x, a = p.nu[0], p.nu[1:]
        if g.reflection:
            # mirror about the axis at angle g.angle; angular momentum flips
            M = _rot2(2 * g.angle) @ np.diag([1.0, -1.0])
            return PhasePoint.se2_dual(np.concatenate([[-x], M @ a]))
        return PhasePoint.se2_dual(np.concatenate([[x], _rot2(g.angle) @ a]))
    if p.space == "tstar_sphere" and kind in ("SO3", "SO2"):
        if kind == "SO3":
            R = g.matrix
        else:
            R = np.eye(3)
            R[:2, :2] = _rot2(g.angle)
        return PhasePoint.tstar_sphere(R @ p.x, R @ p.y)
    raise SpaceMismatchError(f"{g.group} does not act on {p.space}")


def sample_group(group: GroupId, rng: np.random.Generator, count: int) -> list[GroupElement]:
    """Random elements; finite groups are enumerated instead."""
    kind = group.kind
    if kind == "Dn":
        return lie.dihedral_elements(group.n)
    if kind == "SO2":
        return [lie.rotation(a) for a in rng.uniform(0, TWO_PI, count)]
    if kind == "O2":
        return [
            lie.reflection(a) if flip else lie.rotation(a, lie.O2)
            for a, flip in zip(rng.uniform(0, TWO_PI, count), rng.integers(0, 2, count))
        ]
    if kind == "SO3":
        from scipy.spatial.transform import Rotation

        return [lie.GroupElement(lie.SO3, matrix=m) for m in Rotation.random(count, random_state=rng).as_matrix()]
    raise GroupMismatchError(f"cannot sample {group}")
