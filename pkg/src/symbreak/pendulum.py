"""Spherical pendulum as a gravity perturbation of geodesic motion on S^2.

Relative equilibria with velocity r e3 sit at height -lambda / r^2 and the
momentum constraint Phi_H = s turns into the quartic r^3 (r - s) = lambda^2.
"""

from __future__ import annotations

import csv
import datetime as _dt
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .models import PendulumGravity, PhasePoint, evaluate

ELLIPTIC_ELLIPTIC = "elliptic-elliptic"
FOCUS_FOCUS = "focus-focus"


class PhysicalRangeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class EMPoint:
    energy: float
    momentum: float


@dataclass(frozen=True, eq=False)
class BifurcationCurve:
    lam: float
    s: np.ndarray
    energy: np.ndarray
    momentum: np.ndarray

    @property
    def samples(self) -> list[tuple[float, EMPoint]]:
        return [(float(s), EMPoint(float(e), float(m))) for s, e, m in zip(self.s, self.energy, self.momentum)]


def default_s_grid() -> np.ndarray:
    return np.geomspace(0.2, 4.0, 64)


def solve_r(s: float, lam: float, iterations: int = 80) -> float:
    """Root r >= s of r^3 (r - s) = lambda^2 by bisection on [s, s + 1 + |lambda|]."""
    if not s > 0:
        raise ValueError("s must be positive")
    lam2 = lam * lam
    if lam2 == 0.0:
        return float(s)

    def f(r):
        return r**3 * (r - s) - lam2

    lo, hi = float(s), float(s) + 1.0 + abs(lam)
    # f(hi) > 0 always since hi^3 (1 + |lam|) > lam^2
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    r = lo if abs(f(lo)) <= abs(f(hi)) else hi
    # r^4 >= r^3 (r - s) = lambda^2 makes this unreachable in exact arithmetic; kept as a guard
    if not abs(lam) < r * r:
        warnings.warn(f"|lambda| = {abs(lam)} >= r^2 = {r * r}: point leaves the sphere", PhysicalRangeWarning)
    return r


def relative_equilibrium(s: float, lam: float, phase: float = 0.0) -> tuple[PhasePoint, float]:
    """Closed-form relative equilibrium with momentum s: phase point and angular velocity r."""
    r = solve_r(s, lam)
    height = -lam / r**2
    rho = np.sqrt(1.0 - height**2)
    x = np.array([rho * np.cos(phase), rho * np.sin(phase), height])
    y = np.cross([0.0, 0.0, r], x)
    return PhasePoint.tstar_sphere(x, y), r


def energy_momentum(lam: float, p: PhasePoint) -> EMPoint:
    fam = PendulumGravity()
    return EMPoint(evaluate(fam, lam, p), float(np.cross(p.x, p.y)[2]))


def bifurcation_curve(lam: float, s_grid=None) -> BifurcationCurve:
    """Sample gamma(s) = ((s^4 - 3 lambda^2) / (2 s^2), s - lambda^2 / s^3)."""
    s = default_s_grid() if s_grid is None else np.asarray(s_grid, dtype=float)
    if np.any(s == 0):
        raise ValueError("s grid must exclude 0")
    energy = (s**4 - 3 * lam**2) / (2 * s**2)
    momentum = s - lam**2 / s**3
    return BifurcationCurve(float(lam), s, energy, momentum)


def rank_zero_points(lam: float) -> list[tuple[EMPoint, str]]:
    """Images of (-e3, 0) and (e3, 0) with their (annotated, not computed) types."""
    south = PhasePoint.tstar_sphere([0, 0, -1], [0, 0, 0])
    north = PhasePoint.tstar_sphere([0, 0, 1], [0, 0, 0])
    return [(energy_momentum(lam, south), ELLIPTIC_ELLIPTIC), (energy_momentum(lam, north), FOCUS_FOCUS)]


def _fmt(v: float) -> str:
    return repr(float(v))


def emit_diagram(lam: float, s_grid, path, timestamp: bool = True) -> Path:
    """Write the boundary curve and the two rank-zero values as CSV."""
    curve = bifurcation_curve(lam, s_grid)
    path = Path(path)
    with path.open("w", newline="") as fh:
        if timestamp:
            fh.write(f"# symbreak {__version__} bifurcation lambda={lam!r} generated {_dt.datetime.now().isoformat()}\n")
        w = csv.writer(fh)
        w.writerow(["s", "energy", "momentum", "label"])
        for s, e, m in zip(curve.s, curve.energy, curve.momentum):
            w.writerow([_fmt(s), _fmt(e), _fmt(m), "boundary"])
        for pt, label in rank_zero_points(lam):
            w.writerow(["", _fmt(pt.energy), _fmt(pt.momentum), label])
    return path
