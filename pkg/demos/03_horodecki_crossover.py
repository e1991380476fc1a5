"""
Eigenvalue bound vs correlation-matrix bound on Horodecki's family
==================================================================

Tabulates both upper bounds over a in [0, 1] and locates where the
eigenvalue bound becomes the tighter one. The same data comes out of

    fef sweep --family horodecki3x3 --vary a --from 0 --to 1 --steps 201 \
        --columns thm1,correlation --out fig1.csv
"""

import numpy as np

from fef import correlation_bound, horodecki_3x3, thm1_bound

a = np.linspace(0, 1, 201)
thm1 = np.array([thm1_bound(horodecki_3x3(x)) for x in a])
corr = np.array([correlation_bound(horodecki_3x3(x)) for x in a])

for x, t, c in list(zip(a, thm1, corr))[::20]:
    print(f"a={x:.2f}  eigenvalue bound={t:.6f}  correlation bound={c:.6f}")

diff = thm1 - corr
i = np.nonzero((diff[:-1] > 0) & (diff[1:] <= 0))[0][0]
cross = a[i] + (a[i + 1] - a[i]) * diff[i] / (diff[i] - diff[i + 1])
print(f"\ncurves cross at a = {cross:.4f}")
