"""Lie-Poisson dynamics of a planar body in fluid on se(2)*.

States are nu = (x, alpha1, alpha2).  With (a, b, c) the inverse inertia of the
family, the flow nu' = ad*_{dh/dnu} nu reads

    x'      = (c - b) alpha1 alpha2
    alpha1' =  a x alpha2
    alpha2' = -a x alpha1

and preserves the energy and the Casimir alpha1^2 + alpha2^2.
"""

from __future__ import annotations

import csv
import datetime as _dt
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import NotEquilibriumError, SpaceMismatchError
from .models import _BodyFluid

EQ_TOL = 1e-10
SHOOT_OFFSET = 1e-6
SADDLE_BALL = 1e-4
SHOOT_DT = 5e-3
SHOOT_TMAX = 400.0


def _check_family(family):
    if not isinstance(family, _BodyFluid):
        raise SpaceMismatchError(f"Lie-Poisson dynamics needs a body-fluid family, got {type(family).__name__}")


def lp_vector_field(family, lam: float, nu) -> np.ndarray:
    _check_family(family)
    a, b, c = family.inverse_inertia(lam)
    x, a1, a2 = np.asarray(nu, dtype=float)
    return np.array([(c - b) * a1 * a2, a * x * a2, -a * x * a1])


def lp_jacobian(family, lam: float, nu) -> np.ndarray:
    _check_family(family)
    a, b, c = family.inverse_inertia(lam)
    x, a1, a2 = np.asarray(nu, dtype=float)
    k = c - b
    return np.array([[0.0, k * a2, k * a1], [a * a2, 0.0, a * x], [-a * a1, -a * x, 0.0]])


def casimir(nu) -> float:
    nu = np.asarray(nu, dtype=float)
    return float(nu[1] ** 2 + nu[2] ** 2)


@dataclass(eq=False)
class Trajectory:
    t: np.ndarray
    nu: np.ndarray
    energy: np.ndarray
    casimir: np.ndarray
    aborted: bool = False
    params: dict = field(default_factory=dict)

    @property
    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.energy - self.energy[0])))

    @property
    def casimir_drift(self) -> float:
        return float(np.max(np.abs(self.casimir - self.casimir[0])))

    @property
    def final(self) -> np.ndarray:
        return self.nu[-1]

    def to_csv(self, path, timestamp: bool = True) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            if timestamp:
                fh.write(f"# symbreak {__version__} trajectory generated {_dt.datetime.now().isoformat()}\n")
            w = csv.writer(fh)
            w.writerow(["t", "x", "alpha1", "alpha2", "energy", "casimir"])
            for t, (x, a1, a2), e, k in zip(self.t, self.nu, self.energy, self.casimir):
                w.writerow([repr(float(v)) for v in (t, x, a1, a2, e, k)])
        return path


def _rk4_step(a, k, x, a1, a2, h):
    # scalar arithmetic: far cheaper than numpy for 3-vectors
    def f(x, a1, a2):
        return k * a1 * a2, a * x * a2, -a * x * a1

    k1 = f(x, a1, a2)
    k2 = f(x + 0.5 * h * k1[0], a1 + 0.5 * h * k1[1], a2 + 0.5 * h * k1[2])
    k3 = f(x + 0.5 * h * k2[0], a1 + 0.5 * h * k2[1], a2 + 0.5 * h * k2[2])
    k4 = f(x + h * k3[0], a1 + h * k3[1], a2 + h * k3[2])
    s = h / 6.0
    return (
        x + s * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
        a1 + s * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]),
        a2 + s * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]),
    )


def _step_sizes(T: float, dt: float) -> list[float]:
    n = int(np.floor(T / dt + 1e-9))
    steps = [dt] * n
    rest = T - n * dt
    if rest > 1e-12 * max(1.0, T):
        steps.append(rest)
    return steps


def integrate(family, lam: float, nu0, T: float, dt: float, project: bool = False) -> Trajectory:
    """Classical RK4 with fixed step; ``project`` rescales (alpha1, alpha2) onto the initial Casimir circle."""
    _check_family(family)
    if not (T > 0 and dt > 0):
        raise ValueError("T and dt must be positive")
    nu0 = np.asarray(nu0, dtype=float)
    if nu0.shape != (3,) or not np.all(np.isfinite(nu0)):
        raise ValueError("nu0 must be a finite 3-vector")
    a, b, c = (float(v) for v in family.inverse_inertia(lam))
    k = c - b
    steps = _step_sizes(T, dt)
    out = np.empty((len(steps) + 1, 3))
    ts = np.empty(len(steps) + 1)
    out[0], ts[0] = nu0, 0.0
    radius = np.hypot(nu0[1], nu0[2])
    x, a1, a2 = (float(v) for v in nu0)
    t = 0.0
    aborted = False
    i = 0
    for i, h in enumerate(steps, start=1):
        x, a1, a2 = _rk4_step(a, k, x, a1, a2, h)
        if project and radius > 0:
            r = math.hypot(a1, a2)
            a1, a2 = a1 * radius / r, a2 * radius / r
        if not (math.isfinite(x) and math.isfinite(a1) and math.isfinite(a2)):
            aborted = True
            i -= 1
            break
        t += h
        out[i] = x, a1, a2
        ts[i] = t
    out, ts = out[: i + 1], ts[: i + 1]
    with np.errstate(over="ignore"):
        energy = 0.5 * (out**2) @ np.array([a, b, c])
        cas = out[:, 1] ** 2 + out[:, 2] ** 2
    return Trajectory(ts, out, energy, cas, aborted, {"lambda": lam, "dt": dt, "project": project})


# --------------------------------------------------------------------------
# fixed points


@dataclass(frozen=True, eq=False)
class FixedPoint:
    nu: np.ndarray
    kind: str
    eigenvalues: np.ndarray


def cylinder_tangent(nu) -> np.ndarray:
    """Orthonormal basis (columns) of the tangent plane of the coadjoint cylinder through nu."""
    nu = np.asarray(nu, dtype=float)
    r = np.hypot(nu[1], nu[2])
    if r == 0:
        return np.zeros((3, 0))
    return np.array([[1.0, 0.0], [0.0, -nu[2] / r], [0.0, nu[1] / r]])


def classify_fixed_point(family, lam: float, nu, tol: float = EQ_TOL) -> FixedPoint:
    """center / saddle / degenerate from the 2x2 linearization on the coadjoint cylinder."""
    nu = np.asarray(nu, dtype=float)
    res = np.linalg.norm(lp_vector_field(family, lam, nu))
    if res > tol:
        raise NotEquilibriumError(f"|X(nu)| = {res:.3e} at {nu.tolist()}")
    T = cylinder_tangent(nu)
    if T.shape[1] == 0:
        return FixedPoint(nu, "degenerate", np.zeros(0))
    L = T.T @ lp_jacobian(family, lam, nu) @ T
    eigs = np.linalg.eigvals(L)
    scale = max(1.0, np.abs(L).max())
    det = np.linalg.det(L)
    if abs(det) <= tol * scale**2:
        kind = "degenerate"
    elif det < 0:
        kind = "saddle"
    else:
        kind = "center"
    return FixedPoint(nu, kind, eigs)


def axis_equilibria(family, lam: float, casimir_level: float) -> list[np.ndarray]:
    """The four equilibria (0, +-r, 0), (0, 0, +-r) on the cylinder of the given Casimir."""
    r = np.sqrt(casimir_level)
    return [np.array(v, dtype=float) for v in ([0, r, 0], [0, -r, 0], [0, 0, r], [0, 0, -r])]


# --------------------------------------------------------------------------
# heteroclinic shooting


@dataclass(frozen=True)
class Connection:
    source: int
    branch: int
    target: int | None
    entry_time: float | None
    closest: float


@dataclass
class HeteroclinicReport:
    applicable: bool
    saddles: list[np.ndarray]
    connections: list[Connection]
    energy_gap: float | None
    note: str = ""

    @property
    def count(self) -> int:
        return sum(c.target is not None for c in self.connections)


def _shoot(a, k, start, targets, ball, dt, t_max, radius):
    x, a1, a2 = (float(v) for v in start)
    targets = [tuple(float(v) for v in q) for q in targets]
    t = 0.0
    closest = [np.inf] * len(targets)
    while t < t_max:
        x, a1, a2 = _rk4_step(a, k, x, a1, a2, dt)
        r = math.hypot(a1, a2)
        a1, a2 = a1 * radius / r, a2 * radius / r
        t += dt
        for j, q in enumerate(targets):
            d = math.sqrt((x - q[0]) ** 2 + (a1 - q[1]) ** 2 + (a2 - q[2]) ** 2)
            if d < closest[j]:
                closest[j] = d
            if d <= ball:
                return j, t, closest
    return None, None, closest


def detect_heteroclinic(family, lam: float, casimir_level: float = 1.0, offset: float = SHOOT_OFFSET,
                        ball: float = SADDLE_BALL, dt: float = SHOOT_DT, t_max: float = SHOOT_TMAX) -> HeteroclinicReport:
    """Follow both branches of each saddle's unstable manifold until they reach another saddle."""
    _check_family(family)
    if not casimir_level > 0:
        return HeteroclinicReport(False, [], [], None, "singular coadjoint orbit")
    a, b, c = (float(v) for v in family.inverse_inertia(lam))
    if b == c:
        return HeteroclinicReport(False, [], [], None, "circle of equilibria; no isolated saddles")
    saddles, eigvecs = [], []
    for nu in axis_equilibria(family, lam, casimir_level):
        fp = classify_fixed_point(family, lam, nu)
        if fp.kind != "saddle":
            continue
        T = cylinder_tangent(nu)
        w, V = np.linalg.eig(T.T @ lp_jacobian(family, lam, nu) @ T)
        v = np.real(V[:, int(np.argmax(np.real(w)))])
        saddles.append(nu)
        eigvecs.append(T @ v / np.linalg.norm(v))
    if len(saddles) < 2:
        return HeteroclinicReport(False, saddles, [], None, "fewer than two saddles")
    radius = np.sqrt(casimir_level)
    energies = [0.5 * float(np.array([a, b, c]) @ s**2) for s in saddles]
    connections = []
    for i, (s, v) in enumerate(zip(saddles, eigvecs)):
        others = [j for j in range(len(saddles)) if j != i]
        for branch, sign in enumerate((1.0, -1.0)):
            start = s + sign * offset * v
            start[1:] *= radius / np.hypot(start[1], start[2])
            hit, t, closest = _shoot(a, c - b, start, [saddles[j] for j in others], ball, dt, t_max, radius)
            connections.append(Connection(i, branch, None if hit is None else others[hit], t, float(min(closest))))
    return HeteroclinicReport(True, saddles, connections, float(max(energies) - min(energies)))
