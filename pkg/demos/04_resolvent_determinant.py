#!/usr/bin/env python3
# Second-kind equations, the resolvent kernel, and the Fredholm determinant.
#
# p - lambda N p = f is solved directly by LU on (I - lambda A); the
# resolvent kernel N_lambda and the eigen-series give two independent
# routes to the same answers.  D(lambda) = prod (1 - lambda nu_j) locates
# the Fredholm eigenvalues lambda_j = 1/nu_j as its zeros.

import numpy as np

import fredkit as fk

rule = fk.gauss_legendre(8, 0.0, 1.0)
kern = fk.separable_kernel([1.0], [lambda y: y], [lambda z: z])
op = fk.discretize(kern, rule)

# solve p - 1.0 * N p = y: the hand solution is p = y / (1 - 1/3) = 1.5 y
f = rule.nodes.astype(complex)
sol = fk.resolvent_solve(op, 1.0, f)
print("solution / y:", np.round(sol.solution.real / rule.nodes, 12))
print("residual:", sol.residual, " nearest eigenvalue gap:", sol.nearest_eigen_gap)

# the eigen-series route agrees
d = fk.djf_eig(op)
series = fk.second_kind_solve_series(d, 1.0, f, 1)
print("series vs direct:", np.max(np.abs(series - sol.solution)))

# the resolvent kernel satisfies lambda*A*N_l = N_l - K = lambda*N_l*(W K)
NL = fk.resolvent_kernel(op, 1.0)
lhs = 1.0 * (op.A @ NL)
print("resolvent identity residual:", np.max(np.abs(lhs - (NL - op.K))))

# determinant: for the rank-one kernel D(lambda) = 1 - lambda/3
print("\nD(lambda) on a small grid (direct | product):")
for lam in (0.0, 1.0, 2.0, 2.9, 3.1, 4.0):
    d1 = fk.fredholm_determinant(op, lam, "direct").value.real
    d2 = fk.fredholm_determinant(op, lam, "product").value.real
    print(f"  lambda = {lam:4.1f}:  {d1:+.12f} | {d2:+.12f}")

# solving exactly at an eigenvalue is refused with the culprit named
try:
    fk.resolvent_solve(op, 3.0, f)
except fk.EigenvalueProximityError as exc:
    print("\nsolve at lambda = 3 refused:", exc)

# the first-kind equation lambda N p = p has solutions exactly there
basis = fk.first_kind_solve(op, 3.0, tol=1e-8)
print("first-kind solution space at lambda = 3: dim", len(basis))

# the integral identity: exp(-int trace N_lambda dmu dlambda) = D ratio
dev = fk.determinant_log_derivative_check(op, (0.0, 1.0), 200)
print("log-derivative path check, max deviation:", dev)
