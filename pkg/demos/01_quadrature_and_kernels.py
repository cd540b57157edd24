#!/usr/bin/env python3
# Quadrature rules as discrete measures, and the kernel gallery.
#
# A rule (nodes, weights) stands in for integration against a measure:
# int f dmu ~= sum_i w_i f(x_i).  Everything downstream (operators,
# spectra, determinants) is built on top of these.

import numpy as np

import fredkit as fk

# --- Gauss-Legendre on [0, 1]: exact for polynomials up to degree 2n-1
rule = fk.gauss_legendre(5, 0.0, 1.0)
print("Gauss-Legendre(5) nodes:  ", np.round(rule.nodes, 6))
print("Gauss-Legendre(5) weights:", np.round(rule.weights, 6))
for k in (0, 2, 5, 9):
    got = rule.integrate(rule.nodes ** k)
    print(f"  int x^{k} dx = {got:.15f}   (exact {1 / (k + 1):.15f})")

# --- Gauss-Hermite for the standard normal density (probabilists')
gh = fk.gauss_hermite_prob(6)
print("\nGauss-Hermite(6): sum w =", gh.integrate(np.ones(6)),
      "  E X^2 =", round(float(gh.integrate(gh.nodes ** 2)), 15),
      "  E X^4 =", round(float(gh.integrate(gh.nodes ** 4)), 12))

# --- a discrete (atomic) measure is just a weighted point set
atoms = fk.discrete_measure([0.0, 0.5, 1.0], [1.0, 1.0, 1.0])
print("\natomic measure: int x^2 =", float(atoms.integrate(atoms.nodes ** 2)))

# --- the Mehler kernel: closed form vs its Hermite-function expansion.
# The ratio of the correlated bivariate normal density to the product of
# marginals expands as sum_j r^j He_j(y) He_j(z) / j!.
r = 0.5
mehler = fk.mehler_kernel(r)
y, z = 1.0, -0.7
partial = sum(
    r ** j * fk.HermitePair(j)(np.array([y]))[0] * fk.HermitePair(j)(np.array([z]))[0]
    for j in range(60)
)
closed = mehler.eval_block(y, z)[0, 0].real
print(f"\nMehler closed form K({y},{z})    = {closed:.15f}")
print(f"60-term Hermite expansion value = {partial:.15f}")

# --- finite-rank kernels: only as many eigenvalues as terms
yz = fk.separable_kernel([1.0], [lambda y: y], [lambda z: z])
op = fk.discretize(yz, rule)
print("\nN(y,z) = y z on [0,1]: Hilbert-Schmidt norm =", round(op.hs_norm(), 12),
      " (exact 1/3)")

# --- a deliberately defective kernel: a 2x2 Jordan block on an
# orthonormal polynomial basis; its matrix in that basis is exact
basis = fk.orthonormal_poly_basis(rule, 2)
dk = fk.defective_kernel(0.5, 2, basis, rule)
dop = fk.discretize(dk, rule)
E = np.column_stack([e(rule.nodes) for e in basis])
M = E.T @ (rule.weights[:, None] * (dop.A @ E))
print("\ndefective kernel, operator restricted to the basis:")
print(np.round(M.real, 12))
