"""
Certified exact FEF for a two-qutrit family
===========================================

For rho = 2/7 P_+ + alpha/7 sigma_+ + (5 - alpha)/7 sigma_-, the top
eigenvector of rho is |psi_+>. Its coefficient matrix is unitary, so the
spectral bound is attained and F(rho) = 2/7 for every alpha.
"""

from fef import alpha_family_3x3, estimate_fef, exactness_certificate, fidelity_from_fef, report

for alpha in (3.5, 4.0, 4.5, 5.0):
    rho = alpha_family_3x3(alpha)
    rep = report(rho)
    est = estimate_fef(rho, restarts=8, seed=1)
    print(
        f"alpha={alpha}: thm1={rep.thm1:.6f} corr={rep.correlation:.6f} "
        f"spectral={rep.spectral:.6f} reduced={rep.reduced:.6f}  exact={rep.exact:.12f}  "
        f"variational={est.lower_bound:.12f}"
    )

cert = exactness_certificate(alpha_family_3x3(4.0))
print("\nA (should be the identity):\n", cert.A.round(12).real)

# Teleportation fidelity reachable with this resource
print("fidelity =", fidelity_from_fef(2 / 7, 3), "(13/28 =", 13 / 28, ")")
