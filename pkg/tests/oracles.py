"""Independent reference computations used by the tests (no solver code involved)."""

import numpy as np
from scipy.optimize import minimize


def grid_critical_points(grad_fn, u_range, v_range, n=400, periodic_u=True, tol=1e-6):
    """Critical points of a 2D gradient field from a dense grid scan of |grad|^2.

    Grid local minima of |grad|^2 are refined by Nelder-Mead and kept when the
    refined |grad| is below ``tol``.  Returns an array of (u, v) rows.
    """
    u = np.linspace(*u_range, n, endpoint=not periodic_u)
    v = np.linspace(*v_range, n)
    U, V = np.meshgrid(u, v, indexing="ij")
    gu, gv = grad_fn(U, V)
    F = gu**2 + gv**2
    is_min = np.ones_like(F, dtype=bool)
    for du in (-1, 0, 1):
        for dv in (-1, 0, 1):
            if du == dv == 0:
                continue
            shifted = np.roll(np.roll(F, du, axis=0), dv, axis=1)
            is_min &= F <= shifted
    is_min[:, 0] = is_min[:, -1] = False
    if not periodic_u:
        is_min[0, :] = is_min[-1, :] = False

    def obj(w):
        a, b = grad_fn(w[0], w[1])
        return a * a + b * b

    found = []
    for i, j in zip(*np.nonzero(is_min)):
        res = minimize(obj, [U[i, j], V[i, j]], method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-30, "maxiter": 4000})
        if np.sqrt(res.fun) > tol:
            continue
        w = res.x.copy()
        if periodic_u:
            w[0] = np.mod(w[0] - u_range[0], u_range[1] - u_range[0]) + u_range[0]
        if all(_dist(w, f, periodic_u, u_range) > 1e-6 for f in found):
            found.append(w)
    return np.array(found).reshape(-1, 2)


def _dist(a, b, periodic, u_range):
    d = np.asarray(a) - np.asarray(b)
    if periodic:
        L = u_range[1] - u_range[0]
        d[0] = (d[0] + L / 2) % L - L / 2
    return float(np.linalg.norm(d))


def match_sets(a, b, tol, periodic=True, u_range=(0.0, 2 * np.pi)):
    """True when the two point sets agree up to tol (one-to-one)."""
    if len(a) != len(b):
        return False
    used = set()
    for p in a:
        hit = [k for k, q in enumerate(b) if k not in used and _dist(p, q, periodic, u_range) <= tol]
        if not hit:
            return False
        used.add(hit[0])
    return True


def rk4_reference_lp(a, b, c, nu0, T, steps):
    """Plain numpy RK4 for the body-fluid Lie-Poisson equations (reference, not optimized)."""
    def f(nu):
        x, a1, a2 = nu
        return np.array([(c - b) * a1 * a2, a * x * a2, -a * x * a1])

    nu = np.array(nu0, dtype=float)
    h = T / steps
    for _ in range(steps):
        k1 = f(nu)
        k2 = f(nu + h / 2 * k1)
        k3 = f(nu + h / 2 * k2)
        k4 = f(nu + h * k3)
        nu = nu + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return nu
