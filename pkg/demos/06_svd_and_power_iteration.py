#!/usr/bin/env python3
# Operator SVD, iterated Gram kernels, and power iteration with deflation.
#
# Any rectangular-block kernel has singular triples (theta_j, p_j, q_j)
# with both families weighted-orthonormal.  Iterations of N N^* are
# controlled entirely by the singular values; power iteration with
# deflation recovers eigen-triples one at a time.

import numpy as np

import fredkit as fk

rule = fk.gauss_legendre(8, 0.0, 1.0)

# N = y z^2: theta_1 = ||y|| ||z^2|| = 1/sqrt(15)
kern = fk.separable_kernel([1.0], [lambda y: y], [lambda z: z * z])
op = fk.discretize(kern, rule)
sv = fk.operator_svd(op)
print("theta_1 =", sv.singular_values[0], " (exact 1/sqrt(15) =", 1 / np.sqrt(15.0), ")")
print("numerical rank:", sv.rank_numerical)
print("trace power n=0 (= sum theta^2):", fk.trace_power(sv, 0), " (exact 1/15)")

# iterated Gram kernels from the triples vs direct composition
gh = fk.gauss_hermite_prob(40)
mop = fk.discretize(fk.mehler_kernel(0.5), gh)
msv = fk.operator_svd(mop)
M1 = mop.K @ (mop.w_cols[:, None] * mop.K.conj().T)
direct = (M1 * mop.w_rows[None, :]) @ M1
series = fk.iterated_gram(msv, 2, side="left")
sw = np.sqrt(mop.w_rows)
print("\n(N N^*)^2 series vs composition:",
      np.linalg.norm(sw[:, None] * (series - direct) * sw[None, :]))

# truncation: keeping M triples costs O(theta_{M+1}^{2n})
trunc, tail = fk.svd_truncate(msv, 1)
for n in (1, 3, 5):
    err = np.linalg.norm(
        sw[:, None] * (fk.iterated_gram(msv, n) - fk.iterated_gram(trunc, n)) * sw[None, :]
    )
    print(f"  truncation error at n={n}: {err:.3e}   tail^(2n) = {tail ** (2 * n):.3e}")

# --- power iteration: the ratio of successive applications tends to nu_1
yz = fk.discretize(fk.separable_kernel([1.0], [lambda y: y], [lambda z: z]), rule)
trace = fk.power_ratio_estimate(yz, np.ones(8, dtype=complex), 50, 1e-12)
print("\npower ratios for y z:", [f"{r.real:.12f}" for r in trace.ratios])

# the variational characterization gives the same number
value, g, h = fk.variational_estimate(yz)
print("variational estimate:", value)

# --- sequential extraction with deflation walks down the spectrum
res = fk.sequential_spectrum(mop, 4, 400, 1e-10)
print("\nsequential spectrum of the Mehler operator:")
for j, (nu, p, q) in enumerate(res):
    print(f"  stage {j}: nu = {nu.real:.10f}   (exact {0.5 ** j:.10f})")
