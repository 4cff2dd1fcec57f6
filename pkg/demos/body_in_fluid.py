"""An elliptical body in an ideal fluid, reduced to se(2)*.

Switching on the fluid (lambda = d rho) breaks the circle of equilibria on each
coadjoint cylinder into four points: two saddles and two centers.  The two
saddles are joined by four heteroclinic orbits.
"""

import numpy as np

from symbreak import models, reduction, solver

fam = models.BodyFluidAdded(m=1.0, I_B=1.0, A=2.0, B=1.0)
lam = 0.1
print(f"d = {fam.d}, c1 = {fam.c1:.6f}, c2 = {fam.c2:.6f}, c3 = {fam.c3:.6f}, rho = {fam.rho(lam)}")

cs = solver.find_equilibria(solver.SolveRequest(fam, lam, models.PhasePoint.se2_dual([0.0, 1.0, 0.0])))
for p in cs.points:
    fp = reduction.classify_fixed_point(fam, lam, p.point.nu)
    print(np.round(p.point.nu, 12) + 0.0, fp.kind, np.round(fp.eigenvalues, 6))

traj = reduction.integrate(fam, lam, [0.2, 0.8, 0.6], T=100.0, dt=1e-3)
print(f"RK4 over T=100: energy drift {traj.energy_drift:.1e}, Casimir drift {traj.casimir_drift:.1e}")

het = reduction.detect_heteroclinic(fam, lam, casimir_level=1.0)
for c in het.connections:
    print(f"saddle {c.source} branch {c.branch} -> saddle {c.target} at t = {c.entry_time:.2f}")
print(f"{het.count} connections, saddle energy gap {het.energy_gap}")
