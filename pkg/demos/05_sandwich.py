"""
Sandwiching the FEF of random states
====================================

Lower bound from multi-start ascent over unitaries, upper bound from the
best of the four closed-form bounds. For two qubits a grid search over
SU(2) gives an independent check of the lower bound.
"""

import numpy as np

from fef import brute_force_fef_d2, estimate_fef, report
from fef.states import random_state

rng = np.random.default_rng(2)
for d in (2, 2, 3, 3, 4):
    rho = random_state(d, rng)
    rep = report(rho)
    est = estimate_fef(rho, restarts=16, seed=0)
    line = f"d={d}: F_s={rep.single_fraction:.6f}  {est.lower_bound:.6f} <= F <= {rep.best_upper:.6f}"
    if d == 2:
        line += f"   (grid search: {brute_force_fef_d2(rho, 32):.6f})"
    print(line)
