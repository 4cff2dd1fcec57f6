"""Equilibria and relative equilibria of perturbed families near a critical group orbit.

Critical points are computed as solutions of the Lagrange system of h_lambda
restricted to the phase space (and, for relative equilibria, to the momentum
level set Phi_H = alpha; the multiplier of that constraint is the velocity).
Newton steps are least-squares steps with an Armijo backtracking line search on
the squared residual; directions along a continuous residual symmetry are
removed by extra rows <v_M(p), dp> = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial.transform import Rotation

from . import catbound, lie, models
from .errors import (
    DegenerateSeedError,
    EmptyLevelSetError,
    GroupMismatchError,
    NonRegularLevelSetError,
    NotCriticalError,
    SpaceMismatchError,
)
from .lie import AlgebraVector, CoalgebraVector, GroupId
from .models import HamiltonianFamily, PhasePoint

EQUILIBRIA = "equilibria"

MAX_ITER = 100
ARMIJO_C = 1e-4
BACKTRACK = 0.5
CONVERGED = 1e-12
POLISH_STEPS = 3
RESIDUAL_TOL = 1e-10
CRITICAL_TOL = 1e-8
DUPLICATE_TOL = 1e-7
CLUSTER_TOL = 1e-6
EIG_RTOL = 1e-8


@dataclass(frozen=True)
class RelativeEquilibria:
    """Search mode for relative equilibria on the level set Phi_H = alpha."""

    alpha: CoalgebraVector
    xi0: AlgebraVector


@dataclass
class SolveRequest:
    family: HamiltonianFamily
    lam: float
    seed: PhasePoint
    mode: str | RelativeEquilibria = EQUILIBRIA
    tube_radius: float = 0.5
    multistart_count: int | None = None
    rng_seed: int = 0
    tol: float = RESIDUAL_TOL
    seeds: Sequence[PhasePoint] | None = None
    extra_seeds: Sequence[PhasePoint] = ()
    override: bool = False

    def __post_init__(self):
        if not self.tube_radius > 0:
            raise ValueError("tube_radius must be positive")
        if self.multistart_count is not None and self.multistart_count < 1:
            raise ValueError("multistart_count must be >= 1")
        if self.seed.space != self.family.space:
            raise SpaceMismatchError(f"seed on {self.seed.space}, family on {self.family.space}")

    @property
    def relative(self) -> bool:
        return isinstance(self.mode, RelativeEquilibria)


@dataclass
class CriticalPoint:
    point: PhasePoint
    residual: float
    signature: tuple[int, int, int]
    energy: float
    velocity: AlgebraVector | None = None
    velocity_shift: float | None = None


@dataclass
class CriticalSet:
    lam: float
    points: list[CriticalPoint]
    clusters: list[list[int]]
    bound: int | None
    citation: str = ""
    ops_assumed: bool = True
    diagnostics: list[str] = field(default_factory=list)
    skipped: bool = False

    @property
    def orbit_count(self) -> int:
        return len(self.clusters)

    @property
    def verdict(self) -> str:
        if self.bound is None:
            return "unknown"
        return "satisfied" if self.orbit_count >= self.bound else "violated"

    def representatives(self) -> list[CriticalPoint]:
        return [self.points[c[0]] for c in self.clusters]


@dataclass
class NondegeneracyReport:
    holds: bool
    signature: tuple[int, int, int]
    eigenvalues: np.ndarray
    dims: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# helpers


def signature(eigs: np.ndarray, rtol: float = EIG_RTOL) -> tuple[int, int, int]:
    eigs = np.asarray(eigs, dtype=float)
    if eigs.size == 0:
        return (0, 0, 0)
    cut = rtol * max(1.0, np.abs(eigs).max())
    return (int(np.sum(eigs < -cut)), int(np.sum(np.abs(eigs) <= cut)), int(np.sum(eigs > cut)))


def _nonsingular(eigs: np.ndarray) -> bool:
    if eigs.size == 0:
        return True
    big = np.abs(eigs).max()
    return big > 0 and np.abs(eigs).min() > EIG_RTOL * big


def _leaf(family: HamiltonianFamily, coords) -> tuple[models.Constraint, ...]:
    """Constraints that cut the symplectic leaf through coords (Casimir for se(2)*)."""
    if family.space == "se2_dual":
        return (models.casimir_constraint(float(coords[1] ** 2 + coords[2] ** 2)),)
    return ()


def _multipliers(grad: np.ndarray, cons, c) -> np.ndarray:
    if not cons:
        return np.zeros(0)
    A = np.column_stack([k.grad(c) for k in cons])
    return np.linalg.lstsq(A, grad, rcond=None)[0]


def _lagrangian_hessian(H0: np.ndarray, cons, mult, c) -> np.ndarray:
    out = H0.copy()
    for k, m in zip(cons, mult):
        out -= m * k.hess(c)
    return out


# --------------------------------------------------------------------------
# orbits


def _rotate_about(axis: np.ndarray, angles: np.ndarray) -> np.ndarray:
    return Rotation.from_rotvec(np.outer(angles, axis)).as_matrix()


def _planar_orbit(space: str, c: np.ndarray, angles: np.ndarray, reflect: bool) -> np.ndarray:
    """Coordinates of g.c for rotations (or mirrors at the given axis angles)."""
    k = angles.size
    out = np.tile(c, (k, 1))
    if space == "cylinder":
        out[:, 0] = np.mod(2 * angles - c[0] if reflect else c[0] + angles, models.TWO_PI)
        return out
    if reflect:
        cs, sn = np.cos(2 * angles), np.sin(2 * angles)
        out[:, 0] = -c[0]
        out[:, 1] = cs * c[1] + sn * c[2]
        out[:, 2] = sn * c[1] - cs * c[2]
    else:
        cs, sn = np.cos(angles), np.sin(angles)
        out[:, 1] = cs * c[1] - sn * c[2]
        out[:, 2] = sn * c[1] + cs * c[2]
    return out


def _one_parameter_orbit(space: str, c: np.ndarray, angles: np.ndarray, axis=None, reflect=False) -> np.ndarray:
    if space == "tstar_sphere":
        R = _rotate_about(np.asarray(axis if axis is not None else [0, 0, 1.0]), angles)
        return np.concatenate([R @ c[:3], R @ c[3:]], axis=1)
    return _planar_orbit(space, c, angles, reflect)


def _best_rotation_angle(space: str, p: np.ndarray, q: np.ndarray, axis=None, reflect=False) -> float:
    """Angle of the one-parameter rotation (or mirror axis) that brings q closest to p, in closed form."""
    if space == "cylinder":
        return 0.5 * (p[0] + q[0]) if reflect else p[0] - q[0]
    if space == "se2_dual":
        ap, aq = np.arctan2(p[2], p[1]), np.arctan2(q[2], q[1])
        return 0.5 * (ap + aq) if reflect else ap - aq
    # <p, R(phi) q> = A cos(phi) + B sin(phi) + const for R(phi) about the unit axis u
    u = np.asarray([0.0, 0.0, 1.0] if axis is None else axis, dtype=float)
    u = u / np.linalg.norm(u)
    A = B = 0.0
    for sl in (slice(0, 3), slice(3, 6)):
        a, b = p[sl], q[sl]
        A += a @ b - (u @ a) * (u @ b)
        B += a @ np.cross(u, b)
    return float(np.arctan2(B, A))


def _one_parameter_distance(space, p, q, axis=None, reflect=False) -> float:
    phi = _best_rotation_angle(space, p, q, axis, reflect)
    return models.distance(space, _one_parameter_orbit(space, q, np.array([phi]), axis, reflect)[0], p)


def orbit_distance(space: str, p, q, group: GroupId, axis=None) -> float:
    """min over g in group of |g.q - p| (ambient coordinates)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    kind = group.kind
    if kind == "Trivial":
        return models.distance(space, p, q)
    if kind == "Dn":
        n = group.n
        rot = _planar_orbit(space, q, 2 * np.pi * np.arange(n) / n, False)
        ref = _planar_orbit(space, q, np.pi * np.arange(n) / n, True)
        return float(min(models.distance(space, o, p) for o in np.vstack([rot, ref])))
    if kind in ("SO2", "O2"):
        d = _one_parameter_distance(space, p, q, axis)
        if kind == "O2" and space != "tstar_sphere":
            d = min(d, _one_parameter_distance(space, p, q, reflect=True))
        return d
    if kind == "SO3" and space == "tstar_sphere":
        # orthogonal Procrustes on the pairs (x, y)
        A = np.vstack([p[:3], p[3:]])
        B = np.vstack([q[:3], q[3:]])
        if np.linalg.norm(q[3:]) > 0 and np.linalg.norm(p[3:]) > 0:
            R, _ = Rotation.align_vectors(A, B)
        else:
            R, _ = Rotation.align_vectors(A[:1], B[:1])
        return float(np.linalg.norm(np.concatenate([R.apply(q[:3]), R.apply(q[3:])]) - p))
    raise SpaceMismatchError(f"no orbit metric for {group} on {space}")


def cluster_into_H_orbits(points: Sequence[PhasePoint], family: HamiltonianFamily, group: GroupId | None = None,
                          axis=None, tol: float = CLUSTER_TOL) -> list[list[int]]:
    """Partition points into orbits of ``group`` (default: the family's H).

    Each cluster lists point indices with the lexicographically smallest point first;
    clusters are ordered by that representative.
    """
    group = family.H if group is None else group
    n = len(points)
    coords = [np.asarray(p.coords) for p in points]
    label = [-1] * n
    clusters: list[list[int]] = []
    for i in range(n):
        if label[i] >= 0:
            continue
        label[i] = len(clusters)
        members = [i]
        for j in range(i + 1, n):
            if label[j] < 0 and orbit_distance(family.space, coords[j], coords[i], group, axis) <= tol:
                label[j] = label[i]
                members.append(j)
        clusters.append(members)

    def key(idx):
        return tuple(np.round(coords[idx], 9))

    clusters = [sorted(c, key=key) for c in clusters]
    return sorted(clusters, key=lambda c: key(c[0]))


# --------------------------------------------------------------------------
# nondegeneracy


def _orbit_tangent_in(T: np.ndarray, gens: np.ndarray) -> np.ndarray:
    if gens.size == 0:
        return np.zeros((T.shape[1], 0))
    return lie.orthonormal_span(T.T @ gens)


def check_G_nondegenerate(family: HamiltonianFamily, p: PhasePoint, lam: float = 0.0,
                          xi: AlgebraVector | None = None) -> NondegeneracyReport:
    """Is the Hessian of h (or of h^xi) non-singular normal to the G-orbit through p?"""
    models._check_space(family, p)
    c = p.coords
    cons = models.manifold_constraints(family.space) + _leaf(family, c)
    if xi is None:
        g, H0 = family.grad(lam, c), family.hess(lam, c)
    else:
        _, g, H0 = models.augmented_ambient(family, lam, xi, c)
    T = models.tangent_basis(family.space, c, _leaf(family, c))
    res = np.linalg.norm(T.T @ g)
    if res > CRITICAL_TOL:
        raise NotCriticalError(f"|grad| = {res:.3e} at {p}")
    HL = T.T @ _lagrangian_hessian(H0, cons, _multipliers(g, cons, c), c) @ T
    O = _orbit_tangent_in(T, models.generators(family.space, c))
    N = lie.orthogonal_complement(O) if O.shape[1] else np.eye(T.shape[1])
    eigs = np.linalg.eigvalsh(N.T @ HL @ N) if N.shape[1] else np.zeros(0)
    return NondegeneracyReport(_nonsingular(eigs), signature(eigs), eigs, {"orbit": O.shape[1], "normal": N.shape[1]})


def m_dimension(family: HamiltonianFamily, p: PhasePoint) -> int:
    """dim M = dim g - dim(g_m + h), with g_m the isotropy algebra of p."""
    gens = models.generators(family.space, p.coords)
    g_m = lie.nullspace(gens)
    E = family.h_embedding.matrix
    stacked = np.hstack([g_m, E]) if g_m.size or E.size else np.zeros((family.G.dim, 0))
    return family.G.dim - (lie.rank(stacked) if stacked.size else 0)


def check_alpha_nondegenerate(family: HamiltonianFamily, p: PhasePoint, xi: AlgebraVector,
                              lam: float = 0.0) -> NondegeneracyReport:
    """Hessian of h^xi on (ker D Phi_H) minus the g_mu-orbit directions."""
    models._check_space(family, p)
    c = p.coords
    cons = models.manifold_constraints(family.space)
    _, g, H0 = models.augmented_ambient(family, lam, xi, c)
    T = models.tangent_basis(family.space, c)
    res = np.linalg.norm(T.T @ g)
    if res > CRITICAL_TOL:
        raise NotCriticalError(f"(p, xi) is not a relative equilibrium: residual {res:.3e}")

    mu_val, JG, _ = models.momentum_G_ambient(family.space, c)
    E = family.h_embedding.matrix
    DG = JG @ T
    DH = E.T @ DG
    if DH.shape[0] and lie.rank(DH) < DH.shape[0]:
        raise NonRegularLevelSetError(f"D Phi_H has rank {lie.rank(DH)} < {DH.shape[0]} at {p}")
    ker_G = lie.nullspace(DG) if DG.size else np.eye(T.shape[1])
    ker_H = lie.nullspace(DH) if DH.size else np.eye(T.shape[1])

    mu = CoalgebraVector(family.G, mu_val)
    g_mu = lie.stabilizer_algebra(mu)
    O = _orbit_tangent_in(T, models.generators(family.space, c) @ g_mu) if g_mu.size else np.zeros((T.shape[1], 0))
    C = lie.orthogonal_complement(O, within=ker_H) if O.shape[1] else lie.orthonormal_span(ker_H)

    HL = T.T @ _lagrangian_hessian(H0, cons, _multipliers(g, cons, c), c) @ T
    eigs = np.linalg.eigvalsh(C.T @ HL @ C) if C.shape[1] else np.zeros(0)
    dims = {
        "ker_DPhi_G": ker_G.shape[1],
        "ker_DPhi_H": ker_H.shape[1],
        "M": m_dimension(family, p),
        "g_mu_orbit": O.shape[1],
        "N1_plus_M": C.shape[1],
    }
    return NondegeneracyReport(_nonsingular(eigs), signature(eigs), eigs, dims)


# --------------------------------------------------------------------------
# Newton


class _System:
    """Lagrange system for critical points of h_lambda on the phase space / level set."""

    def __init__(self, family, lam, seed_coords, alpha=None, eta_basis=None):
        self.family = family
        self.lam = lam
        self.space = family.space
        self.n = models.AMBIENT_DIM[self.space]
        self.cons = models.manifold_constraints(self.space) + _leaf(family, seed_coords)
        self.casimir = float(seed_coords[1] ** 2 + seed_coords[2] ** 2) if self.space == "se2_dual" else None
        self.alpha = None if alpha is None else np.asarray(alpha, dtype=float)
        self.B = eta_basis if eta_basis is not None else np.zeros((family.H.dim, 0))
        self.nc = len(self.cons)
        self.ne = self.B.shape[1] if self.alpha is not None else 0

    def split(self, z):
        return z[: self.n], z[self.n: self.n + self.nc], z[self.n + self.nc:]

    def eta(self, z) -> np.ndarray:
        return self.B @ self.split(z)[2] if self.ne else np.zeros(self.family.H.dim)

    def initial(self, c) -> np.ndarray:
        g = self.family.grad(self.lam, c)
        cols = [k.grad(c) for k in self.cons]
        if self.ne:
            _, JH, _ = models.momentum_H_ambient(self.family, c)
            cols += list((JH.T @ self.B).T)
        mult = np.linalg.lstsq(np.column_stack(cols), g, rcond=None)[0] if cols else np.zeros(0)
        return np.concatenate([c, mult])

    def residual(self, z) -> np.ndarray:
        c, kap, _ = self.split(z)
        F1 = self.family.grad(self.lam, c).copy()
        for k, m in zip(self.cons, kap):
            F1 -= m * k.grad(c)
        parts = [F1, np.array([k.value(c) for k in self.cons])]
        if self.ne:
            val, JH, _ = models.momentum_H_ambient(self.family, c)
            parts[0] = F1 - JH.T @ self.eta(z)
            parts.append(val - self.alpha)
        return np.concatenate(parts)

    def jacobian(self, z) -> np.ndarray:
        c, kap, _ = self.split(z)
        n, nc, ne = self.n, self.nc, self.ne
        Hc = _lagrangian_hessian(self.family.hess(self.lam, c), self.cons, kap, c)
        rows = []
        G = np.column_stack([k.grad(c) for k in self.cons]) if nc else np.zeros((n, 0))
        if ne:
            _, JH, HH = models.momentum_H_ambient(self.family, c)
            Hc = Hc - np.einsum("k,kij->ij", self.eta(z), HH)
            top = np.hstack([Hc, -G, -JH.T @ self.B])
            rows = [top, np.hstack([G.T, np.zeros((nc, nc + ne))]), np.hstack([JH, np.zeros((JH.shape[0], nc + ne))])]
        else:
            rows = [np.hstack([Hc, -G]), np.hstack([G.T, np.zeros((nc, nc))])]
        return np.vstack(rows)

    def retract(self, z) -> np.ndarray:
        z = z.copy()
        z[: self.n] = models.retract(self.space, z[: self.n], self.casimir)
        return z


def _newton(system: _System, c0: np.ndarray, symmetry_gens) -> tuple[np.ndarray, float, int]:
    """Damped Gauss-Newton; returns (z, |F|, iterations)."""
    z = system.initial(system.retract(np.concatenate([c0, np.zeros(system.nc + system.ne)]))[: system.n])
    F = system.residual(z)
    nF = np.linalg.norm(F)
    it = 0
    polish = 0
    for it in range(1, MAX_ITER + 1):
        scale = max(1.0, np.linalg.norm(z))
        converged = nF <= CONVERGED * scale
        if converged:
            # a few full steps past the threshold, kept only while they help
            if polish >= POLISH_STEPS:
                break
            polish += 1
        J = system.jacobian(z)
        rhs = -F
        V = symmetry_gens(z[: system.n])
        if V.size:
            V = lie.orthonormal_span(V)
            J = np.vstack([J, np.hstack([V.T, np.zeros((V.shape[1], J.shape[1] - system.n))])])
            rhs = np.concatenate([rhs, np.zeros(V.shape[1])])
        d = np.linalg.lstsq(J, rhs, rcond=None)[0]
        if converged:
            z_new = system.retract(z + d)
            F_new = system.residual(z_new)
            if np.linalg.norm(F_new) >= nF:
                break
            z, F, nF = z_new, F_new, np.linalg.norm(F_new)
            continue
        t = 1.0
        while True:
            z_new = system.retract(z + t * d)
            F_new = system.residual(z_new)
            n_new = np.linalg.norm(F_new)
            if n_new**2 <= (1 - 2 * ARMIJO_C * t) * nF**2:
                break
            t *= BACKTRACK
            if t < 1e-10:
                return z, nF, it
        z, F, nF = z_new, F_new, n_new
    return z, nF, it


# --------------------------------------------------------------------------
# public solvers


def _seed_orbit_group(family: HamiltonianFamily, mu: CoalgebraVector | None):
    """(group, axis) whose one-parameter orbit through the seed carries the multistart seeds."""
    if mu is None:
        if family.G.kind in ("O2", "SO2"):
            return lie.SO2, None
        return family.G, None
    if family.G.kind == "SO3":
        v = mu.coords
        if np.linalg.norm(v) == 0:
            return lie.SO3, None
        return lie.SO2, v / np.linalg.norm(v)
    return lie.SO2, None


def _generate_seeds(req: SolveRequest, extra_cons, orbit_group, axis, rng) -> list[np.ndarray]:
    fam, seed = req.family, req.seed
    c = np.asarray(seed.coords, dtype=float)
    if orbit_group.kind == "SO3":
        # 3-dim orbit: sample rotations directly
        count = req.multistart_count or 8 * 4
        rots = Rotation.random(count, random_state=rng).as_matrix()
        base = [np.concatenate([R @ c[:3], R @ c[3:]]) for R in rots]
        gens_fn = lambda cc: models.generators(fam.space, cc)  # noqa: E731
    else:
        count = req.multistart_count or 8 * (1 + 1)
        step = models.TWO_PI / count
        angles = rng.uniform(0, step) + step * np.arange(count)
        base = list(_one_parameter_orbit(fam.space, c, angles, axis))
        if fam.space == "tstar_sphere":
            ax = np.array([0, 0, 1.0]) if axis is None else axis
            gens_fn = lambda cc: models.generators(fam.space, cc) @ ax[:, None]  # noqa: E731
        else:
            gens_fn = lambda cc: models.generators(fam.space, cc)  # noqa: E731
    seeds = []
    for b in base:
        T = models.tangent_basis(fam.space, b, extra_cons)
        O = _orbit_tangent_in(T, gens_fn(b))
        N = lie.orthogonal_complement(O) if O.shape[1] else np.eye(T.shape[1])
        if N.shape[1]:
            v = T @ (N @ rng.normal(size=N.shape[1]))
            v *= 0.1 * req.tube_radius / np.linalg.norm(v)
        else:
            v = 0.0
        seeds.append(models.retract(fam.space, b + v, _casimir(fam, c)))
    return seeds


def _casimir(family, c):
    return float(c[1] ** 2 + c[2] ** 2) if family.space == "se2_dual" else None


def _isotropy_descriptor(family: HamiltonianFamily, c) -> str:
    """'reflection' if a mirror of O(2) fixes the point, 'trivial' if the isotropy is discrete-free."""
    if family.G.kind == "O2":
        if family.space == "cylinder":
            return "reflection"
        if family.space == "se2_dual" and abs(c[0]) <= 1e-12 and np.hypot(c[1], c[2]) > 0:
            return "reflection"
        return "trivial"
    gens = models.generators(family.space, c)
    return "trivial" if lie.rank(gens) == gens.shape[1] else "subtorus"


def _bound_for(family, c, relative: bool, mu=None):
    try:
        if relative:
            g_mu = lie.stabilizer_algebra(mu)
            h_mu = lie.sub_stabilizer(mu, family.h_embedding)
            Gmu = lie.SO2 if g_mu.shape[1] == 1 else (family.G if g_mu.shape[1] == family.G.dim else None)
            Hmu = lie.SO2 if h_mu.shape[1] == 1 else lie.TRIVIAL
            if Gmu is None:
                raise catbound.NoTableEntryError(f"stabilizer of {mu} has dimension {g_mu.shape[1]}")
            gens = models.generators(family.space, c) @ g_mu
            iso = "trivial" if lie.rank(gens) == gens.shape[1] else "subtorus"
            q = catbound.BoundQuery(Gmu, Hmu, iso, "relative_equilibria")
        else:
            q = catbound.BoundQuery(family.G, family.H, _isotropy_descriptor(family, c), "equilibria")
        return catbound.bound(q)
    except catbound.NoTableEntryError:
        return None


def _finish(req, system, sols, diagnostics, cluster_group, axis, bound, symmetry_gens, xi0=None) -> CriticalSet:
    fam = req.family
    # deterministic merge: order by canonical coordinates, then drop duplicates
    sols.sort(key=lambda s: tuple(np.round(s[0], 9)))
    kept = []
    for c, eta in sols:
        if all(models.distance(fam.space, c, k[0]) > DUPLICATE_TOL for k in kept):
            kept.append((c, eta))
    points = []
    all_cons = system.cons
    for c, eta in kept:
        p = PhasePoint(fam.space, c + 0.0)
        g, H0 = fam.grad(req.lam, c), fam.hess(req.lam, c)
        cons = list(all_cons)
        vel = None
        if system.ne:
            val, JH, HH = models.momentum_H_ambient(fam, c)
            for a in range(JH.shape[0]):
                cons.append(models.Constraint(
                    lambda cc, a=a: models.momentum_H_ambient(fam, cc)[0][a] - system.alpha[a],
                    lambda cc, a=a: models.momentum_H_ambient(fam, cc)[1][a],
                    lambda cc, a=a: models.momentum_H_ambient(fam, cc)[2][a],
                ))
            vel = AlgebraVector(fam.H, eta)
        T = models.tangent_basis(fam.space, c, tuple(cons[len(models.manifold_constraints(fam.space)):]))
        # signature transverse to the residual symmetry orbit
        O = _orbit_tangent_in(T, symmetry_gens(c))
        if O.shape[1]:
            T = T @ lie.orthogonal_complement(O)
        HL = T.T @ _lagrangian_hessian(H0, cons, _multipliers(g, cons, c), c) @ T
        sig = signature(np.linalg.eigvalsh(HL)) if HL.size else (0, 0, 0)
        points.append(CriticalPoint(
            point=p,
            residual=_independent_residual(req, system, c, eta),
            signature=sig,
            energy=models.evaluate(fam, req.lam, p),
            velocity=vel,
            velocity_shift=None if vel is None else float(np.linalg.norm(vel.coords - xi0.coords)),
        ))
    clusters = cluster_into_H_orbits([pt.point for pt in points], fam, cluster_group, axis)
    return CriticalSet(
        lam=req.lam,
        points=points,
        clusters=clusters,
        bound=None if bound is None else bound.value,
        citation="" if bound is None else bound.citation,
        ops_assumed=True if bound is None else bound.ops_assumed,
        diagnostics=diagnostics,
    )


def _independent_residual(req, system, c, eta) -> float:
    """Stationarity residual recomputed from scratch on the tangent space."""
    fam = req.family
    T = models.tangent_basis(fam.space, c, _leaf(fam, c) if system.casimir is not None else ())
    g = fam.grad(req.lam, c)
    r = 0.0
    if system.ne:
        val, JH, _ = models.momentum_H_ambient(fam, c)
        g = g - JH.T @ eta
        r += np.linalg.norm(val - system.alpha)
    r += np.linalg.norm(T.T @ g)
    r += sum(abs(k.value(c)) for k in system.cons)
    return float(r)


def _tube_distance(fam, c, seed, orbit_group, axis) -> float:
    if fam.space == "cylinder" and orbit_group.kind == "SO2":
        return abs(c[1] - seed[1])
    return orbit_distance(fam.space, c, seed, orbit_group, axis)


def _run(req: SolveRequest, system: _System, orbit_group, axis, symmetry_gens, extra_cons):
    rng = np.random.default_rng(req.rng_seed)
    if req.seeds is not None:
        starts = [np.asarray(s.coords, dtype=float) for s in req.seeds]
    else:
        starts = _generate_seeds(req, extra_cons, orbit_group, axis, rng)
    starts += [np.asarray(s.coords, dtype=float) for s in req.extra_seeds]
    seed_c = np.asarray(req.seed.coords, dtype=float)
    sols, diagnostics = [], []
    best_momentum = np.inf
    failures = outside = 0
    for s in starts:
        z, nF, it = _newton(system, s, symmetry_gens)
        c = z[: system.n]
        eta = system.eta(z)
        if system.ne:
            best_momentum = min(best_momentum, float(np.linalg.norm(models.momentum_H_ambient(req.family, c)[0] - system.alpha)))
        res = _independent_residual(req, system, c, eta)
        if not np.isfinite(res) or res > req.tol:
            failures += 1
            continue
        if _tube_distance(req.family, c, seed_c, orbit_group, axis) > req.tube_radius:
            outside += 1
            continue
        sols.append((models.retract(req.family.space, c), eta))
    if failures:
        diagnostics.append(f"{failures} of {len(starts)} starts did not converge")
    if outside:
        diagnostics.append(f"{outside} converged points left the tube of radius {req.tube_radius}")
    if not sols:
        if system.ne and best_momentum > 1e-6:
            raise EmptyLevelSetError(f"no point with Phi_H = {system.alpha.tolist()} found near the seed orbit")
        diagnostics.append("no start converged")
    return sols, diagnostics


def find_equilibria(req: SolveRequest) -> CriticalSet:
    """Critical points of h_lambda near the G-orbit of the seed."""
    if req.relative:
        raise ValueError("use find_relative_equilibria for relative equilibria")
    fam = req.family
    seed = req.seed
    c = np.asarray(seed.coords, dtype=float)
    if not req.override:
        try:
            rep = check_G_nondegenerate(fam, seed, 0.0)
        except NotCriticalError as exc:
            raise NotCriticalError(f"seed is not on a critical orbit of h_0: {exc}") from None
        if not rep.holds:
            raise DegenerateSeedError(f"transverse Hessian at the seed is singular (eigenvalues {rep.eigenvalues})")
    system = _System(fam, req.lam, c)
    orbit_group, axis = _seed_orbit_group(fam, None)
    if fam.H.dim > 0:
        symmetry_gens = lambda cc: models.h_generators(fam, cc)  # noqa: E731
    else:
        symmetry_gens = lambda cc: np.zeros((system.n, 0))  # noqa: E731
    sols, diag = _run(req, system, orbit_group, axis, symmetry_gens, _leaf(fam, c))
    bound = _bound_for(fam, c, relative=False)
    return _finish(req, system, sols, diag, fam.H, None, bound, symmetry_gens)


def find_relative_equilibria(req: SolveRequest) -> CriticalSet:
    """Critical points of h_lambda^eta on Phi_H = alpha with eta in h_mu; eta is solved for."""
    if not req.relative:
        raise ValueError("request mode must be RelativeEquilibria")
    fam = req.family
    mode: RelativeEquilibria = req.mode
    c = np.asarray(req.seed.coords, dtype=float)
    if mode.xi0.group != fam.H:
        raise GroupMismatchError(f"velocity must lie in the algebra of {fam.H}")
    if mode.alpha.group != fam.H:
        raise GroupMismatchError(f"momentum value must lie in the dual of {fam.H}")
    if not req.override:
        rep = check_alpha_nondegenerate(fam, req.seed, mode.xi0, 0.0)
        if not rep.holds:
            raise DegenerateSeedError(f"(seed, xi0) is not alpha-nondegenerate (eigenvalues {rep.eigenvalues})")
    mu = models.momentum_G(fam, req.seed)
    h_mu = lie.sub_stabilizer(mu, fam.h_embedding)
    system = _System(fam, req.lam, c, alpha=mode.alpha.coords, eta_basis=h_mu)
    orbit_group, axis = _seed_orbit_group(fam, mu)

    def symmetry_gens(cc):
        return models.h_generators(fam, cc) @ h_mu if h_mu.size else np.zeros((system.n, 0))

    sols, diag = _run(req, system, orbit_group, axis, symmetry_gens, ())
    bound = _bound_for(fam, c, relative=True, mu=mu)
    cluster_group = lie.SO2 if h_mu.shape[1] == 1 else lie.TRIVIAL
    h_axis = None
    if fam.space == "tstar_sphere" and h_mu.shape[1] == 1:
        h_axis = fam.h_embedding.matrix @ h_mu[:, 0]
    return _finish(req, system, sols, diag, cluster_group, h_axis, bound, symmetry_gens, xi0=mode.xi0)


def assumption_flags(family: HamiltonianFamily, p: PhasePoint, xi0: AlgebraVector) -> dict:
    """Regularity (R) and G_mu in H_alpha at an unperturbed relative equilibrium."""
    mu = models.momentum_G(family, p)
    xi_g = family.h_embedding(xi0)
    r = lie.check_R(mu, xi_g)
    flags = {"R": "holds" if r.holds else "fails"}
    if family.H.is_abelian:
        # abelian H: H_alpha = H, so the inclusion is g_mu inside h
        g_mu = lie.stabilizer_algebra(mu)
        ok, _ = lie.subspace_contains(family.h_embedding.matrix, g_mu)
        flags["G_mu_in_H_alpha"] = "holds" if ok else "fails"
    else:
        flags["G_mu_in_H_alpha"] = "unchecked"
    return flags


# --------------------------------------------------------------------------
# continuation


@dataclass
class Continuation:
    lambdas: list[float]
    sets: list[CriticalSet]
    predicted: int | None
    persists_until: float | None
    notices: list[str] = field(default_factory=list)

    def counts(self) -> list[int | None]:
        return [None if s.skipped else s.orbit_count for s in self.sets]


def continuation(family: HamiltonianFamily, lambda_grid, seed: PhasePoint, mode=EQUILIBRIA, **kwargs) -> Continuation:
    """Warm-started solves along a lambda grid starting at 0."""
    grid = [float(v) for v in lambda_grid]
    if not grid:
        raise ValueError("empty lambda grid")
    if grid[0] != 0.0:
        raise ValueError("lambda grid must start at 0")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("lambda grid must be nondecreasing")
    sets, notices = [], []
    warm: list[PhasePoint] = []
    for lam in grid:
        if lam == 0.0 and mode == EQUILIBRIA:
            notices.append("lambda = 0: h_0 has a continuum of critical points on the seed orbit; node skipped")
            sets.append(CriticalSet(0.0, [], [], None, diagnostics=["degenerate: seed orbit is a critical continuum"], skipped=True))
            continue
        req = SolveRequest(family, lam, seed, mode=mode, extra_seeds=warm, **kwargs)
        cs = find_relative_equilibria(req) if req.relative else find_equilibria(req)
        sets.append(cs)
        warm = [pt.point for pt in cs.points]
    predicted, until = None, None
    for lam, cs in zip(grid, sets):
        if cs.skipped:
            continue
        if predicted is None:
            predicted = cs.orbit_count
        if cs.orbit_count != predicted:
            break
        until = lam
    return Continuation(grid, sets, predicted, until, notices)
