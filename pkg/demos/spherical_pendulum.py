"""Gravity as a perturbation of geodesic flow on the sphere.

With momentum s about the vertical, the horizontal great-circle motion moves to
height -lambda / r^2 with angular velocity r solving r^3 (r - s) = lambda^2.
"""

from symbreak import lie, models, pendulum, solver

s, lam = 1.0, 0.1
fam = models.PendulumGravity()
seed = models.PhasePoint.tstar_sphere([1, 0, 0], [0, s, 0])
xi0 = lie.AlgebraVector(lie.SO2, [s])

rep = solver.check_alpha_nondegenerate(fam, seed, xi0)
print("alpha-nondegenerate:", rep.holds, rep.dims)
print("assumptions:", solver.assumption_flags(fam, seed, xi0))

mode = solver.RelativeEquilibria(lie.CoalgebraVector(lie.SO2, [s]), xi0)
cs = solver.find_relative_equilibria(solver.SolveRequest(fam, lam, seed, mode=mode))
r = float(cs.representatives()[0].velocity.coords[0])
print(f"{cs.orbit_count} orbit(s) of relative equilibria, bound {cs.bound}")
print(f"velocity {r!r}, closed form {pendulum.solve_r(s, lam)!r}")
print(f"height {float(cs.points[0].point.x[2])!r}, expected {-lam / r**2!r}")

for pt, label in pendulum.rank_zero_points(lam):
    print(f"{label}: (h, J) = ({pt.energy}, {pt.momentum})")
curve = pendulum.bifurcation_curve(lam, [0.5, 1.0, 2.0])
for s_, em in curve.samples:
    print(f"gamma({s_}) = ({em.energy:.6f}, {em.momentum:.6f})")
