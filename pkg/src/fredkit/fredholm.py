"""Resolvent solves, Fredholm determinants, and first/second-kind equations.

The second-kind equation p - lambda*N p = f is solved directly through an
LU factorization of (I - lambda*A) with a condition estimate guarding
eigenvalue proximity; series forms built from a bi-orthogonal
decomposition are provided for validation.  Fredholm convention
throughout: the "eigenvalues" lambda_j are the reciprocals 1/nu_j of the
operator eigenvalues, and the determinant D(lambda) vanishes exactly
there.
"""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import get_lapack_funcs, lu_factor, lu_solve

from .errors import (
    EigenvalueProximityError,
    InvalidArgumentError,
    NoSolutionError,
    PoleError,
)
from .nystrom import DiscreteOperator
from .spectral import (
    BiSpectralDecomposition,
    HERMITIAN_RTOL,
    RETAIN_RTOL,
    djf_eig,
    hermitian_eig,
)
from .wlinalg import winner

GAP_RTOL = 1e-8
COND_LIMIT = 1e10
TAIL_CUTOFF = 1e-14


@dataclass(frozen=True)
class ResolventSolve:
    """Solution record of (I - lambda*N) p = f."""

    lam: complex
    solution: np.ndarray
    residual: float
    nearest_eigen_gap: float


@dataclass(frozen=True)
class DeterminantEval:
    """One determinant evaluation D(lambda) with the method used."""

    lam: complex
    value: complex
    method: str


def _operator_nus(op):
    """Retained nonzero operator eigenvalues nu_j of the discretization."""
    nus = np.linalg.eigvals(op.A)
    top = float(np.max(np.abs(nus))) if nus.size else 0.0
    if top == 0.0:
        return nus[:0]
    return nus[np.abs(nus) > RETAIN_RTOL * top]


def _fredholm_lambdas(op):
    nus = _operator_nus(op)
    return 1.0 / nus if nus.size else nus


def _nearest_gap(lam, lambdas):
    if lambdas.size == 0:
        return np.inf, None
    dists = np.abs(lambdas - lam)
    i = int(np.argmin(dists))
    return float(dists[i]), complex(lambdas[i])


def _lu_with_cond(M):
    lu, piv = lu_factor(M)
    gecon = get_lapack_funcs("gecon", (M,))
    anorm = float(np.linalg.norm(M, 1))
    rcond, _info = gecon(lu, anorm)
    cond = np.inf if rcond == 0 else 1.0 / float(rcond)
    return (lu, piv), cond


def _guard_proximity(op, lam):
    """Reject lambda too close to a Fredholm eigenvalue; return the gap."""
    lambdas = _fredholm_lambdas(op)
    gap, nearest = _nearest_gap(lam, lambdas)
    if nearest is not None and gap <= GAP_RTOL * abs(nearest):
        raise EigenvalueProximityError(
            f"lambda={lam:.6g} is within {GAP_RTOL} relative of the Fredholm "
            f"eigenvalue {nearest:.6g}",
            nearest=nearest,
            gap=gap,
        )
    return gap, nearest


def resolvent_solve(op: DiscreteOperator, lam, f) -> ResolventSolve:
    """Solve (I - lambda*A) p = f directly with LU and a condition guard.

    Raises EigenvalueProximityError, reporting the nearest Fredholm
    eigenvalue, when lambda sits within 1e-8 relative of the spectrum or
    the system's condition estimate exceeds 1e10.
    """
    if not op.is_square_block:
        raise InvalidArgumentError("resolvent solves need a square block shape")
    lam = complex(lam)
    f = np.asarray(f, dtype=complex)
    n = op.A.shape[0]
    if f.shape != (n,):
        raise InvalidArgumentError(f"rhs has shape {f.shape}, expected ({n},)")
    gap, nearest = _guard_proximity(op, lam)
    M = np.eye(n, dtype=complex) - lam * op.A
    fac, cond = _lu_with_cond(M)
    if cond > COND_LIMIT:
        raise EigenvalueProximityError(
            f"system condition {cond:.3e} exceeds 1e10 near lambda={lam:.6g}; "
            f"nearest Fredholm eigenvalue {nearest}",
            nearest=nearest,
            gap=gap,
        )
    p = lu_solve(fac, f)
    p = p + lu_solve(fac, f - M @ p)  # one refinement pass
    scale = float(np.linalg.norm(f))
    residual = float(np.linalg.norm(p - lam * (op.A @ p) - f))
    if scale > 0:
        residual /= scale
    return ResolventSolve(lam=lam, solution=p, residual=residual, nearest_eigen_gap=gap)


def resolvent_kernel(op: DiscreteOperator, lam) -> np.ndarray:
    """Node samples of the resolvent kernel N_lambda = (I - lambda*A)^{-1} K.

    Satisfies both defining identities (the Neumann-series form)
    lambda * A @ N_lambda = N_lambda - K = lambda * N_lambda @ (W K).
    """
    if not op.is_square_block:
        raise InvalidArgumentError("resolvent kernels need a square block shape")
    lam = complex(lam)
    gap, nearest = _guard_proximity(op, lam)
    n = op.A.shape[0]
    M = np.eye(n, dtype=complex) - lam * op.A
    fac, cond = _lu_with_cond(M)
    if cond > COND_LIMIT:
        raise EigenvalueProximityError(
            f"system condition {cond:.3e} exceeds 1e10 near lambda={lam:.6g}; "
            f"nearest Fredholm eigenvalue {nearest}",
            nearest=nearest,
            gap=gap,
        )
    NL = lu_solve(fac, op.K)
    NL = NL + lu_solve(fac, op.K - M @ NL)
    return NL


def _series_lambdas(d, k, lam):
    if k < 0 or k > d.retained:
        raise InvalidArgumentError(f"truncation {k} out of range 0..{d.retained}")
    lambdas = 1.0 / d.eigenvalues[:k]
    if k:
        dmin = np.min(np.abs(lambdas - lam))
        if dmin <= 1e-12 * max(1.0, float(np.max(np.abs(lambdas)))):
            raise PoleError(f"lambda={lam:.6g} coincides with a Fredholm eigenvalue")
    return lambdas


def resolvent_series(d: BiSpectralDecomposition, lam, k: int) -> np.ndarray:
    """Partial-sum resolvent sum_{j<=k} p_j q_j^* / (lambda_j - lambda).

    Equals resolvent_kernel at full truncation on finite-rank kernels.
    """
    lam = complex(lam)
    lambdas = _series_lambdas(d, k, lam)
    if k == 0:
        return np.zeros_like(d.operator.K)
    coeffs = 1.0 / (lambdas - lam)
    return (d.right[:, :k] * coeffs[None, :]) @ d.left[:, :k].conj().T


def second_kind_solve_series(d: BiSpectralDecomposition, lam, f, k: int) -> np.ndarray:
    """Series solution f + lambda * sum_j p_j <q_j, f>_W / (lambda_j - lambda)."""
    lam = complex(lam)
    f = np.asarray(f, dtype=complex)
    lambdas = _series_lambdas(d, k, lam)
    out = f.astype(complex).copy()
    w = d.weights
    for j in range(k):
        proj = winner(w, d.left[:, j], f)
        out += lam * proj / (lambdas[j] - lam) * d.right[:, j]
    return out


def fredholm_determinant(op: DiscreteOperator, lam, method="direct") -> DeterminantEval:
    """Fredholm determinant D(lambda).

    method="direct" evaluates det(I - lambda*A) by LU; method="product"
    multiplies (1 - lambda*nu_j) over the retained spectrum, dropping
    machine-neutral factors with |lambda*nu_j| < 1e-14.  Zeros of D locate
    the Fredholm eigenvalues.
    """
    if not op.is_square_block:
        raise InvalidArgumentError("determinants need a square block shape")
    lam = complex(lam)
    method = method.lower()
    if method == "direct":
        n = op.A.shape[0]
        value = complex(np.linalg.det(np.eye(n, dtype=complex) - lam * op.A))
    elif method == "product":
        nus = _operator_nus(op)
        factors = 1.0 - lam * nus
        keep = np.abs(lam * nus) >= TAIL_CUTOFF
        value = complex(np.prod(factors[keep])) if np.any(keep) else 1.0 + 0j
    else:
        raise InvalidArgumentError(f"unknown method {method!r}")
    return DeterminantEval(lam=lam, value=value, method=method)


def determinant_log_derivative_check(op: DiscreteOperator, lambda_path, steps: int):
    """Max deviation between exp(-int trace N_lambda dmu dlambda) and D ratios.

    Integrates the weighted trace of the resolvent kernel along the real
    interval lambda_path = (a, b) with the composite trapezoid rule and
    compares exp(-integral up to each grid point) against the direct
    determinant ratio D(lambda_t)/D(a).  The path must keep a 1e-3
    relative gap from every Fredholm eigenvalue.
    """
    a, b = (float(lambda_path[0]), float(lambda_path[1]))
    if steps < 1:
        raise InvalidArgumentError("need at least one panel")
    grid = np.linspace(a, b, steps + 1)
    lambdas = _fredholm_lambdas(op)
    if lambdas.size:
        for t in grid:
            gap = np.min(np.abs(lambdas - t) / np.abs(lambdas))
            if gap < 1e-3:
                raise PoleError(
                    f"path point lambda={t:.6g} is within 1e-3 relative of a "
                    "Fredholm eigenvalue"
                )
    s = op.shape[0]
    w = op.rule.weights

    def weighted_trace(lam):
        NL = resolvent_kernel(op, lam)
        tr = 0.0 + 0.0j
        for i in range(op.rule.count):
            blk = NL[i * s : (i + 1) * s, i * s : (i + 1) * s]
            tr += w[i] * np.trace(blk)
        return tr

    g = np.array([weighted_trace(t) for t in grid])
    d0 = fredholm_determinant(op, a, "direct").value
    h = (b - a) / steps
    integral = 0.0 + 0.0j
    worst = 0.0
    for t in range(1, steps + 1):
        integral += 0.5 * h * (g[t - 1] + g[t])
        ratio = fredholm_determinant(op, grid[t], "direct").value / d0
        dev = abs(np.exp(-integral) - ratio) / max(abs(ratio), 1e-300)
        worst = max(worst, dev)
    return worst


def first_kind_solve(op: DiscreteOperator, lambda_j, tol):
    """Eigenfunction basis solving lambda * N p = p at a Fredholm eigenvalue.

    Returns the bi-orthonormalized right eigenvectors whose Fredholm
    eigenvalues lie within tol of lambda_j; raises NoSolutionError when
    none do (the first-kind equation is solvable only on the spectrum).
    """
    lam = complex(lambda_j)
    d = hermitian_eig(op) if op.hermitian_defect() <= HERMITIAN_RTOL else djf_eig(op)
    basis = []
    for j in range(d.retained):
        if abs(1.0 / d.eigenvalues[j] - lam) <= tol:
            basis.append(d.right[:, j].copy())
    if not basis:
        raise NoSolutionError(
            f"lambda={lam:.6g} is not within {tol} of any Fredholm eigenvalue"
        )
    return basis
