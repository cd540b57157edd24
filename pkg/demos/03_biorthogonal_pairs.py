#!/usr/bin/env python3
# Non-symmetric kernels: right/left eigenfunction pairs.
#
# For a diagonalizable non-Hermitian kernel the single orthonormal family
# splits into two: right eigenfunctions p_j and left ones q_j with
# <q_j, p_k>_W = delta_jk.  The kernel then expands as sum nu_j p_j q_j^*.

import numpy as np

import fredkit as fk

rule = fk.gauss_legendre(8, 0.0, 1.0)

# N(y,z) = y z^2 on [0,1]: one nonzero eigenvalue int z^2 * z dz = 1/4,
# right eigenfunction ~ y, left eigenfunction ~ z^2
kern = fk.separable_kernel([1.0], [lambda y: y], [lambda z: z * z])
op = fk.discretize(kern, rule)

d = fk.djf_eig(op)
print("nu_1 =", d.eigenvalues[0], " (exact 0.25)")
print("bi-orthogonality residual:", d.biorth_residual)

x = rule.nodes
print("\np_1 samples / (sqrt(3) y):       ",
      np.round(d.right[:, 0].real / (np.sqrt(3) * x), 12))
print("q_1 samples / ((4/sqrt(3)) z^2): ",
      np.round(d.left[:, 0].real / (4 / np.sqrt(3) * x ** 2), 12))

# rank-k reconstruction: finite-rank kernels are recovered exactly
rec = fk.reconstruct(d, 1)
print("\nrank-1 reconstruction error:", np.max(np.abs(rec - op.K)))

# asking the Hermitian route for a non-Hermitian kernel is refused
try:
    fk.hermitian_eig(op)
except fk.WrongDecompositionError as exc:
    print("\nhermitian_eig refused:", exc)

# and the bi-orthogonal route refuses defective kernels
basis = fk.orthonormal_poly_basis(rule, 2)
defective = fk.discretize(fk.defective_kernel(0.5, 2, basis, rule), rule)
try:
    fk.djf_eig(defective)
except fk.DefectiveSuspectedError as exc:
    print("djf_eig refused:       ", exc)
