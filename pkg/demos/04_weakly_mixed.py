"""
Reduced-state bound on weakly mixed states
==========================================

rho = (1-p)/9 I + p |psi_x><psi_x| with psi_x proportional to x|00> + |11> + |22>.
The bound (Tr sqrt(rho_A))^2 / d is exact on pure states, so its gap to
the single fraction closes as p -> 1.
"""

import numpy as np

from fef import estimate_fef, reduced_bound, single_fraction, weakly_mixed_3x3

for x in (0.5, 1.0, 2.0):
    print(f"x = {x}")
    for p in np.linspace(0, 1, 6):
        rho = weakly_mixed_3x3(p, x)
        lo = estimate_fef(rho, restarts=4, seed=0).lower_bound
        print(f"  p={p:.1f}  F_s={single_fraction(rho):.6f}  variational={lo:.6f}  bound={reduced_bound(rho):.6f}")
