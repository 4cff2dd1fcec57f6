"""Breaking O(2) to D_3 on the cylinder.

h_lambda(theta, z) = z^2 + lambda cos(3 theta).  At lambda = 0 the whole circle
z = 0 is critical.  For small lambda only six equilibria survive, grouped in two
D_3-orbits: the minima of cos(3 theta) and its maxima.
"""

import numpy as np

from symbreak import catbound, lie, models, solver

fam = models.CylinderCos(3)
seed = models.PhasePoint.cylinder(0.0, 0.0)

print("seed orbit nondegenerate:", solver.check_G_nondegenerate(fam, seed).holds)

cs = solver.find_equilibria(solver.SolveRequest(fam, 0.05, seed))
for k, cluster in enumerate(cs.clusters):
    rep = cs.points[cluster[0]]
    angles = [round(cs.points[i].point.theta / np.pi, 6) for i in cluster]
    print(f"orbit {k}: theta/pi = {angles}, Hessian signature {rep.signature}")

bound = catbound.bound(catbound.BoundQuery(lie.O2, lie.Dn(3), "reflection"))
print(f"{cs.orbit_count} orbits found, lower bound {bound.value}")
print("source:", bound.citation)
