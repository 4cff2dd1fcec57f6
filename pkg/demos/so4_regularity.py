"""Condition (R) for relative equilibria with so(3) velocities inside so(4).

Rotations so(3)_r = {(x, 0)} and the diagonal so(3)_d = {(x/2, x/2)} behave
very differently: for the diagonal subalgebra (R) never fails.
"""

import numpy as np

from symbreak import lie
from symbreak.cli import regularity_so4

e1, e2, e3 = np.eye(3)


def report(label, mu, xi):
    r = lie.check_R(lie.CoalgebraVector(lie.SO4, mu), lie.AlgebraVector(lie.SO4, xi))
    print(f"{label}: (R) {'holds' if r.holds else 'fails'}; dim g_mu = {r.dims[0]}, dim g_xi = {r.dims[1]}")


report("mu = 0, xi = (e1, 0)", np.zeros(6), np.r_[e1, 0 * e1])
report("mu = (e1, e2), xi = 0", np.r_[e1, e2], np.zeros(6))
for s in (0.5, 1.0, 2.0):
    report(f"mu = ({s} e3, e3), xi = (e3, 0)", np.r_[s * e3, e3], np.r_[e3, 0 * e3])

rng = np.random.default_rng(1)
verdicts = [regularity_so4("diag", rng.normal(size=3), rng.normal(size=3))["R"] for _ in range(20)]
print("diagonal subalgebra, 20 random momenta:", set(verdicts))
