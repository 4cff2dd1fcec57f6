"""How far in lambda does the predicted orbit count hold?

The persistence statements are for lambda small; a warm-started sweep shows the
count empirically.  The lambda = 0 node is skipped for equilibria since the
whole seed orbit is critical there.
"""

import numpy as np

from symbreak import models, solver

for name, fam, seed in [
    ("cylinder n=3", models.CylinderCos(3), models.PhasePoint.cylinder(0, 0)),
    ("body in fluid", models.BodyFluidAdded(), models.PhasePoint.se2_dual([0, 1, 0])),
]:
    cont = solver.continuation(fam, np.linspace(0, 0.5, 6), seed)
    print(f"{name}: orbit counts {cont.counts()}, constant up to lambda = {cont.persists_until}")
