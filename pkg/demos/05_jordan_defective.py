#!/usr/bin/env python3
# Jordan structure: blocks, chains, and defective power growth.
#
# When eigenvectors coalesce, powers pick up a polynomial factor:
# J_m(lambda)^n has entries C(n,a) lambda^(n-a), so the norm grows like
# C(n, m-1) |lambda|^(n-m+1) instead of |lambda|^n.

import numpy as np

import fredkit as fk

# --- block powers straight from the binomial expansion
print("J_2(0.5)^10 =")
print(fk.jordan_block_power(0.5, 2, 10).real)
print("check vs repeated multiplication:",
      np.max(np.abs(np.linalg.matrix_power(fk.jordan_block(0.5, 2), 10)
                    - fk.jordan_block_power(0.5, 2, 10))))

# --- recover structure from a similarity-scrambled matrix
rng = np.random.default_rng(1)
J = np.zeros((5, 5), dtype=complex)
J[:2, :2] = fk.jordan_block(0.5, 2)
J[2:4, 2:4] = fk.jordan_block(-0.3, 2)
J[4, 4] = 0.1
S = rng.normal(size=(5, 5))
N = S @ J @ np.linalg.inv(S)

jf = fk.jordan_decompose(N, cluster_tol=1e-5)
print("\nrecovered blocks:", [(np.round(l, 6), m) for l, m in jf.blocks])
rec = jf.P @ jf.assemble_j() @ jf.Q.conj().T
print("reconstruction error:", np.linalg.norm(rec - N) / np.linalg.norm(N))
print("chain residuals:", [f"{r:.2e}" for r in jf.residuals])

# powers through the form match direct multiplication
n = 12
print(f"power via Jordan (n={n}) error:",
      np.max(np.abs(fk.matrix_power_via_jordan(jf, n) - np.linalg.matrix_power(N, n))))

# --- the growth envelope: ||N^n|| / (C(n,1) r1^(n-1)) settles to a constant
D, env = fk.defective_asymptotic(jf, 50)
exact = np.linalg.matrix_power(N, 50)
print("\nn=50 envelope:", env, "  ||N^50 - env*D||/env:",
      np.linalg.norm(exact - env * D) / env)

# --- the same structure lifted to function space: a finite-rank kernel
# whose operator carries the blocks on an orthonormal polynomial basis
rule = fk.gauss_legendre(8, 0.0, 1.0)
basis = fk.orthonormal_poly_basis(rule, 3)
kern = fk.lift_to_kernel([(0.5, 2), (0.1, 1)], basis, rule)
op = fk.discretize(kern, rule)
print("\nlifted kernel: iterated-kernel norm vs n * 0.5^(n-1):")
sw = np.sqrt(rule.weights)
for n in (10, 20, 40, 60):
    Kn = fk.iterated_kernel(op, n)
    nrm = np.linalg.norm(sw[:, None] * Kn * sw[None, :])
    print(f"  n={n:3d}:  ratio = {nrm / (n * 0.5 ** (n - 1)):.9f}")
