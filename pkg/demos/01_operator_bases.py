"""
Clock/shift unitaries, Bell basis and Gell-Mann generators
==========================================================

The building blocks behind every bound: the d^2 unitaries U_st = h^t g^s,
the generalized Bell vectors built from them, and the SU(d) generators.
"""

import numpy as np

from fef import bell_basis, expand_in_basis, gellmann_generators, operator_basis

d = 3
basis = operator_basis(d)
print("omega =", np.round(basis.omega, 6))

# The unitaries are orthogonal under the trace inner product
gram = np.einsum("nji,mji->nm", basis.units.conj(), basis.units) / d
print("max |Gram - I| =", np.abs(gram - np.eye(d * d)).max())

# Any matrix expands in them; a unitary has unit-norm coefficients
rng = np.random.default_rng(0)
q, _ = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
z = expand_in_basis(q, basis)
print("sum |z|^2 for a random unitary =", np.sum(np.abs(z) ** 2))

# Bell vectors: an orthonormal basis of maximally entangled states
bell = bell_basis(basis).vectors
print("Bell basis unitary:", np.allclose(bell @ bell.conj().T, np.eye(d * d)))

# Gell-Mann matrices, Tr(l_i l_j) = 2 delta_ij
gm = gellmann_generators(d).generators
print("Gell-Mann Gram = 2 I:", np.allclose(np.einsum("aij,bji->ab", gm, gm), 2 * np.eye(d * d - 1)))
