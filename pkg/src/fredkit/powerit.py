"""Iterative spectral extraction: power ratios, leading pairs, deflation.

The textbook pointwise ratio (N^{n+1} f)(y) / (N^n f)(y) is replaced by a
weighted-inner-product ratio against a fixed probe vector, which shares
its limit but stays defined at zeros of the iterate; the pointwise ratio
at the node of maximum modulus is recorded alongside.  Iterates are
renormalized to unit weighted norm each step, ratios computed before
renormalization.
"""
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvergenceError,
    InvalidArgumentError,
    NoSpectrumError,
    PreconditionViolationError,
    StartingVectorError,
    UnsupportedProfileError,
)
from .kernels import Kernel
from .nystrom import DiscreteOperator, apply_adjoint, discretize
from .spectral import djf_eig
from .wlinalg import anchor_phase, winner, wnorm

COLLAPSE_RTOL = 1e-14


@dataclass(frozen=True)
class PowerTrace:
    """Record of one power-ratio run.

    iterates holds the unit-weighted-norm iterate after each application;
    scales the positive norm factor divided out at that step, so the raw
    n-th iterate is iterates[n-1] times the product of scales[:n].
    ratios[k] approximates nu_1 (= 1/lambda_1); pointwise_ratios mirrors
    them at the node where the previous iterate is largest in modulus.
    """

    iterates: list
    scales: list
    ratios: list
    pointwise_ratios: list
    converged: bool
    estimate: complex
    iterations_used: int


def power_ratio_estimate(op: DiscreteOperator, f, n_max: int, tol: float, probe=None):
    """Dominant-eigenvalue estimate from successive operator applications.

    Converges when two successive ratios agree to `tol` relative.  A
    non-converged run is returned (converged=False) with a multiplicity
    warning: oscillating ratios indicate several eigenvalues sharing the
    top modulus.

    Raises StartingVectorError when the iterate collapses to numerical
    zero, i.e. f lies in the operator's null space.
    """
    if not op.is_square_block:
        raise InvalidArgumentError("power iteration needs a square block shape")
    if n_max < 1:
        raise InvalidArgumentError("n_max must be >= 1")
    w = op.w_rows
    f = np.asarray(f, dtype=complex)
    nf = wnorm(w, f)
    if nf == 0.0:
        raise StartingVectorError("starting vector is zero")
    h = f / nf
    g = np.asarray(probe, dtype=complex) / 1.0 if probe is not None else h.copy()
    op_scale = max(float(np.linalg.norm(op.A)), 1e-300)
    iterates, scales, ratios, pointwise = [], [], [], []
    converged = False
    k = 0
    while k < n_max:
        k += 1
        y = op.A @ h
        gh = winner(w, g, h)
        gy = winner(w, g, y)
        if abs(gh) > 1e-14:
            ratio = gy / gh
        else:  # probe momentarily orthogonal to the iterate
            ratio = winner(w, h, y) / winner(w, h, h)
        i_star = int(np.argmax(np.abs(h)))
        pw = y[i_star] / h[i_star] if h[i_star] != 0 else complex("nan")
        ny = wnorm(w, y)
        if ny <= COLLAPSE_RTOL * op_scale:
            raise StartingVectorError(
                "iterate collapsed to numerical zero; the starting vector lies "
                "in the null space"
            )
        ratios.append(ratio)
        pointwise.append(pw)
        h = y / ny
        iterates.append(h.copy())
        scales.append(ny)
        if len(ratios) >= 2:
            prev = ratios[-2]
            if abs(ratio - prev) <= tol * max(abs(ratio), 1e-300):
                converged = True
                break
    if not converged:
        warnings.warn(
            "power ratios did not settle; the dominant eigenvalue may not be "
            "simple (several eigenvalues of equal modulus)",
            stacklevel=2,
        )
    return PowerTrace(
        iterates=iterates,
        scales=scales,
        ratios=ratios,
        pointwise_ratios=pointwise,
        converged=converged,
        estimate=ratios[-1],
        iterations_used=k,
    )


def variational_estimate(op: DiscreteOperator):
    """Stationary value of the constrained form int g N h dmu, int g h dmu = 1.

    Returns (value, g, h) where value = nu_1 and (g, h) = (q_1, p_1) from
    the bi-orthogonal decomposition; the form is a supremum for
    lambda_1 > 0 and an infimum for lambda_1 < 0, attained at the first
    eigenfunctions either way.

    Raises UnsupportedProfileError for a complex dominant eigenvalue,
    where the sup/inf dichotomy does not apply.
    """
    d = djf_eig(op)
    if d.retained == 0:
        raise NoSpectrumError("operator has no nonzero eigenvalues")
    nu1 = d.eigenvalues[0]
    if abs(nu1.imag) > 1e-10 * abs(nu1):
        raise UnsupportedProfileError(
            f"dominant eigenvalue {nu1:.6g} is complex; the variational "
            "characterization assumes a real lambda_1"
        )
    return float(nu1.real), d.left[:, 0].copy(), d.right[:, 0].copy()


def extract_leading_pair(op: DiscreteOperator, nu1, f, g, n: int, resid_rtol=1e-6):
    """Leading right/left eigenvector estimates from scaled power iterates.

    Iterates (nu1^{-1} A)^n f and the adjoint analogue on g, then applies
    the usual normalization (unit weighted norm, real-positive anchor for
    p; <q, p>_W = 1 fixes q).  Stops early once both eigen-residuals drop
    below 0.1 * resid_rtol * |nu1|.

    Raises
    ------
    StartingVectorError
        When an iterate collapses (zero projection on the leading pair).
    ConvergenceError
        When residuals stagnate above resid_rtol * |nu1| after n steps,
        as happens for a defective dominant eigenvalue; the jordan module
        handles that structure.
    """
    nu1 = complex(nu1)
    if nu1 == 0:
        raise InvalidArgumentError("nu1 must be nonzero")
    if n < 1:
        raise InvalidArgumentError("need at least one iteration")
    w = op.w_rows
    p = np.asarray(f, dtype=complex)
    q = np.asarray(g, dtype=complex)
    if wnorm(w, p) == 0.0 or wnorm(w, q) == 0.0:
        raise StartingVectorError("starting vector is zero")
    p = p / wnorm(w, p)
    q = q / wnorm(w, q)
    op_scale = max(float(np.linalg.norm(op.A)), 1e-300)
    target = resid_rtol * abs(nu1)
    res_p = res_q = np.inf
    for _ in range(n):
        yp = (op.A @ p) / nu1
        yq = apply_adjoint(op, q) / np.conj(nu1)
        np_, nq_ = wnorm(w, yp), wnorm(w, yq)
        if np_ <= COLLAPSE_RTOL * op_scale or nq_ <= COLLAPSE_RTOL * op_scale:
            raise StartingVectorError(
                "iterate collapsed; the starting vector has no component on "
                "the leading pair"
            )
        res_p = abs(nu1) * wnorm(w, yp - p * (winner(w, p, yp)))
        res_q = abs(nu1) * wnorm(w, yq - q * (winner(w, q, yq)))
        p = yp / np_
        q = yq / nq_
        if max(res_p, res_q) <= 0.1 * target:
            break
    res_p = wnorm(w, op.A @ p - nu1 * p)
    res_q = wnorm(w, apply_adjoint(op, q) - np.conj(nu1) * q)
    if max(res_p, res_q) > target:
        raise ConvergenceError(
            f"eigen-residual {max(res_p, res_q):.3e} stagnates above "
            f"{target:.3e}; the dominant eigenvalue is likely defective or "
            "non-simple -- see the jordan module"
        )
    p = p * anchor_phase(p)
    q = q / np.conj(winner(w, q, p))
    return p, q


def deflate(target, nu1, p1, q1, rule=None) -> DiscreteOperator:
    """Remove the leading pair: N_1(y,z) = N(y,z) - nu1 * p1(y) q1(z)^*.

    `target` is a DiscreteOperator, or a Kernel together with `rule`.
    The pair must be bi-orthonormalized (<q1, p1>_W = 1 to 1e-8); the
    deflated spectrum equals the original with nu1 replaced by zero, the
    remaining pairs untouched.
    """
    if isinstance(target, Kernel):
        if rule is None:
            raise InvalidArgumentError("deflating a Kernel needs a quadrature rule")
        target = discretize(target, rule)
    if not isinstance(target, DiscreteOperator):
        raise InvalidArgumentError("target must be a Kernel or DiscreteOperator")
    op = target
    p1 = np.asarray(p1, dtype=complex)
    q1 = np.asarray(q1, dtype=complex)
    pairing = winner(op.w_rows, q1, p1)
    if abs(pairing - 1.0) > 1e-8:
        raise PreconditionViolationError(
            f"pair is not bi-orthonormalized: <q1, p1>_W = {pairing:.12g}"
        )
    K1 = op.K - complex(nu1) * np.outer(p1, np.conj(q1))
    wr, wc = op.w_rows, op.w_cols
    A1 = K1 * wc[None, :]
    B1 = np.sqrt(wr)[:, None] * K1 * np.sqrt(wc)[None, :]
    return DiscreteOperator(rule=op.rule, shape=op.shape, K=K1, A=A1, B=B1)


@dataclass
class SequentialSpectrumResult:
    """Eigen-triples recovered stage by stage, with failure diagnostics.

    Iterating the result yields (nu_j, p_j, q_j) triples; traces holds the
    PowerTrace of each stage.  When a stage fails (non-simple dominant
    eigenvalue, collapse), the triples found so far are kept and
    failure_reason says why the run stopped early.
    """

    triples: list = field(default_factory=list)
    traces: list = field(default_factory=list)
    stages_completed: int = 0
    failure_reason: str = None

    def __iter__(self):
        return iter(self.triples)

    def __len__(self):
        return len(self.triples)

    def __getitem__(self, i):
        return self.triples[i]

    @property
    def eigenvalues(self):
        return [t[0] for t in self.triples]


def sequential_spectrum(op: DiscreteOperator, k: int, n_max: int, tol: float):
    """Top-k eigen-triples by alternating ratio estimation, pair extraction,
    and deflation.

    Each stage assumes a simple dominant eigenvalue; the first stage that
    is not simple (or loses its starting vector repeatedly) ends the run
    with a partial result.  Starting vectors are drawn from a fixed-seed
    generator, so runs are reproducible.
    """
    if k < 1:
        raise InvalidArgumentError("need k >= 1 stages")
    result = SequentialSpectrumResult()
    current = op
    w = op.w_rows
    n = op.A.shape[0]
    for stage in range(1, k + 1):
        trace = None
        for attempt in range(3):
            rng = np.random.default_rng(1_000_003 * stage + attempt)
            f0 = rng.standard_normal(n)
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    trace = power_ratio_estimate(current, f0, n_max, tol)
                break
            except StartingVectorError:
                trace = None
        if trace is None:
            result.failure_reason = f"stage {stage}: starting vectors kept collapsing"
            return result
        result.traces.append(trace)
        if not trace.converged:
            result.failure_reason = (
                f"stage {stage}: power ratios did not converge within {n_max} "
                "iterations; the dominant eigenvalue is likely not simple"
            )
            return result
        nu_hat = trace.estimate
        try:
            p, q = extract_leading_pair(
                current, nu_hat, trace.iterates[-1], trace.iterates[-1], n_max,
                resid_rtol=max(tol, 1e-8),
            )
        except (ConvergenceError, StartingVectorError) as exc:
            result.failure_reason = f"stage {stage}: {exc}"
            return result
        nu = winner(w, q, current.A @ p)  # Rayleigh refinement, <q, p>_W = 1
        result.triples.append((nu, p, q))
        result.stages_completed = stage
        current = deflate(current, nu, p, q)
    return result
