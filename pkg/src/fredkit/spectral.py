"""Spectral decompositions of discretized operators.

Two routes:

* hermitian_eig -- Hermitian kernels; real spectrum, one orthonormal family
  (the discrete Mercer expansion).
* djf_eig -- diagonalizable non-Hermitian kernels; bi-orthogonal right/left
  eigenfunction families with <q_j, p_k>_W = delta_jk.

Both work on the symmetrized matrix B = W^{1/2} K W^{1/2} so that Euclidean
orthonormality of matrix eigenvectors maps onto weighted orthonormality of
node samples, then polish retained eigenvectors with one Nystrom pass
(p <- A p / nu), which restores full accuracy at small-weight nodes.
"""
from dataclasses import dataclass

import numpy as np

from .errors import (
    DefectiveSuspectedError,
    InvalidArgumentError,
    NoSpectrumError,
    WrongDecompositionError,
)
from .nystrom import DiscreteOperator
from .wlinalg import anchor_phase, winner, wnorm

RETAIN_RTOL = 1e-12       # eigenpairs below this (relative) are numerical null space
REFINE_RTOL = 1e-5        # Nystrom refinement only above this: the A p / nu pass
                          # injects eps*||A||/|nu| noise, which must stay below
                          # the 1e-10 orthonormality budget
HERMITIAN_RTOL = 1e-10
COND_LIMIT = 1e8
DEGENERATE_RTOL = 1e-9    # eigenvalues this close (relative) share an eigenspace


@dataclass(frozen=True)
class BiSpectralDecomposition:
    """Eigenvalues with right/left eigenvector node samples.

    Eigenvalues are sorted by descending modulus, ties by descending phase
    in (-pi, pi].  Right vectors have unit weighted norm with a
    real-positive anchor entry; left vectors are fixed by bi-orthogonality
    <q_j, p_k>_W = delta_jk.  Pairs with |nu_j| <= 1e-12 |nu_1| are
    reported but not scored.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    biorth_residual: float
    hermitian: bool
    retained: int
    operator: DiscreteOperator

    @property
    def weights(self):
        return self.operator.w_rows

    def fredholm_eigenvalues(self):
        """lambda_j = 1/nu_j over the retained spectrum."""
        return 1.0 / self.eigenvalues[: self.retained]


@dataclass(frozen=True)
class AsymptoticProfile:
    """Leading-tier data for large-n power behaviour.

    r1 is the top modulus, R the number of eigenvalues in the top tier,
    r0 the next modulus below it (0 if none), phases the tier's phase
    angles, M the largest Jordan block size on the tier (1 in the
    diagonalizable setting handled here).
    """

    r1: float
    r0: float
    R: int
    M: int
    phases: np.ndarray
    p_top: np.ndarray
    q_top: np.ndarray

    def coefficient_matrix(self, n):
        """C_n = sum_{j<=R} e^{i n theta_j} p_j q_j^* at node pairs."""
        rot = np.exp(1j * np.asarray(self.phases) * n)
        return (self.p_top * rot[None, :]) @ self.q_top.conj().T


def _sort_order(vals, mod_rtol=1e-10):
    """Descending modulus with ties broken by descending phase in (-pi, pi].

    Moduli within mod_rtol of the group leader count as tied, so the
    ordering agrees across eig/eigh paths whose roundoff differs; phases
    hugging the -pi seam are wrapped to +pi (a negative real eigenvalue
    must not flip sides on 1e-17 imaginary noise).
    """
    if vals.size == 0:
        return np.arange(0)
    mods = np.abs(vals)
    phases = np.angle(vals)
    phases = np.where(phases <= -np.pi + 1e-9, phases + 2.0 * np.pi, phases)
    order = list(np.lexsort((-phases, -mods)))
    tol = mod_rtol * max(float(mods.max()), 1e-300)
    i = 0
    while i < len(order):
        j = i + 1
        while j < len(order) and mods[order[i]] - mods[order[j]] <= tol:
            j += 1
        order[i:j] = sorted(order[i:j], key=lambda t: -phases[t])
        i = j
    return np.array(order)


def _retained_count(vals):
    if vals.size == 0 or np.abs(vals[0]) == 0.0:
        return 0
    return int(np.sum(np.abs(vals) > RETAIN_RTOL * np.abs(vals[0])))


def _biorth_residual(w, P, Q, retained):
    if retained == 0:
        return 0.0
    G = Q[:, :retained].conj().T @ (w[:, None] * P[:, :retained])
    return float(np.max(np.abs(G - np.eye(retained))))


def hermitian_eig(op: DiscreteOperator) -> BiSpectralDecomposition:
    """Spectral decomposition of a Hermitian kernel's discretization.

    Eigenvalues are real; the single eigenvector family is orthonormal in
    the weighted inner product and serves as both right and left family.

    Raises
    ------
    WrongDecompositionError
        If B departs from Hermitian symmetry by more than 1e-10 relative;
        use djf_eig for non-Hermitian kernels.
    """
    if not op.is_square_block:
        raise InvalidArgumentError("eigendecomposition needs a square block shape")
    defect = op.hermitian_defect()
    if defect > HERMITIAN_RTOL:
        raise WrongDecompositionError(
            f"kernel is not Hermitian (relative defect {defect:.3e}); use djf_eig"
        )
    Bsym = 0.5 * (op.B + op.B.conj().T)
    vals, vecs = np.linalg.eigh(Bsym)
    order = _sort_order(vals.astype(complex))
    vals = vals[order]
    vecs = vecs[:, order]
    w = op.w_rows
    P = vecs / np.sqrt(w)[:, None]
    retained = _retained_count(vals.astype(complex))
    top = np.abs(vals[0]) if vals.size else 0.0
    for j in range(P.shape[1]):
        col = P[:, j]
        if retained and abs(vals[j]) >= REFINE_RTOL * top:
            col = (op.A @ col) / vals[j]
        nrm = wnorm(w, col)
        if nrm > 0:
            col = col * (anchor_phase(col) / nrm)
        P[:, j] = col
    resid = _biorth_residual(w, P, P, retained)
    return BiSpectralDecomposition(
        eigenvalues=vals.astype(complex),
        right=P,
        left=P,
        biorth_residual=resid,
        hermitian=True,
        retained=retained,
        operator=op,
    )


def djf_eig(op: DiscreteOperator) -> BiSpectralDecomposition:
    """Bi-orthogonal eigendecomposition for diagonalizable kernels.

    Right eigenvectors come from the symmetrized matrix; the left family
    is the inverse-adjoint of the right one, so <q_j, p_k>_W = delta_jk
    holds globally.  Right vectors are normalized to unit weighted norm
    with a real-positive anchor entry, which pins down the free constant
    multipliers; the left vectors then have no freedom left.

    Raises
    ------
    DefectiveSuspectedError
        If the eigenvector matrix is numerically singular (condition
        > 1e8), if two retained eigenvectors with close eigenvalues are
        numerically parallel, or if the final bi-orthogonality residual
        exceeds 1e-8.  A non-diagonal Jordan structure is the likely
        cause; see the jordan module.
    """
    if not op.is_square_block:
        raise InvalidArgumentError("eigendecomposition needs a square block shape")
    vals, V = np.linalg.eig(op.B)
    order = _sort_order(vals)
    vals = vals[order]
    V = V[:, order]
    retained = _retained_count(vals)
    _check_coalescence(vals, V, retained)
    _rebasis_degenerate(vals, V, retained)
    top = np.abs(vals[0]) if vals.size else 0.0
    for j in range(retained):
        resid = float(np.linalg.norm(op.B @ V[:, j] - vals[j] * V[:, j]))
        resid /= float(np.linalg.norm(V[:, j]))
        if resid > 1e-9 * top:
            raise DefectiveSuspectedError(
                f"eigen-residual {resid:.3e} for nu={vals[j]:.6g} exceeds "
                "1e-9 |nu_1|; the eigenspace is deficient -- use the jordan module"
            )
    sv = np.linalg.svd(V, compute_uv=False)
    cond = sv[0] / sv[-1] if sv[-1] > 0 else np.inf
    if cond > COND_LIMIT:
        raise DefectiveSuspectedError(
            f"eigenvector matrix condition {cond:.3e} exceeds 1e8; the operator "
            "looks defective -- use the jordan module"
        )

    w = op.w_rows
    sqw = np.sqrt(w)
    top = np.abs(vals[0]) if vals.size else 0.0
    # normalize V columns so the node samples p = V/sqrt(w) come out with
    # unit weighted norm and a real-positive anchor entry
    for j in range(V.shape[1]):
        p = V[:, j] / sqw
        nrm = wnorm(w, p)
        if nrm > 0:
            V[:, j] *= anchor_phase(p) / nrm
    U = np.linalg.inv(V).conj().T
    P = V / sqw[:, None]
    Q = U / sqw[:, None]
    for j in range(retained):
        if abs(vals[j]) < REFINE_RTOL * top:
            continue
        p = (op.A @ P[:, j]) / vals[j]
        nrm = wnorm(w, p)
        p *= anchor_phase(p) / nrm
        q = (op.K.conj().T @ (w * Q[:, j])) / np.conj(vals[j])
        g = winner(w, q, p)
        q /= np.conj(g)
        P[:, j] = p
        Q[:, j] = q
    resid = _biorth_residual(w, P, Q, retained)
    if resid > 1e-8:
        raise DefectiveSuspectedError(
            f"bi-orthogonality residual {resid:.3e} exceeds 1e-8; the operator "
            "looks defective -- use the jordan module"
        )
    hermitian = op.hermitian_defect() <= HERMITIAN_RTOL
    return BiSpectralDecomposition(
        eigenvalues=vals,
        right=P,
        left=Q,
        biorth_residual=resid,
        hermitian=hermitian,
        retained=retained,
        operator=op,
    )


def _check_coalescence(vals, V, retained, val_rtol=1e-6, angle_tol=1e-8):
    """Reject nearly-equal eigenvalues whose eigenvectors are parallel.

    A semisimple repeated eigenvalue keeps independent eigenvectors; a
    defective one collapses them.  The condition-number check alone can
    miss 2x2 coalescence (cond ~ 1/sqrt(eps) sits near the limit).
    """
    if retained < 2:
        return
    top = np.abs(vals[0])
    Vr = V[:, :retained]
    Vr = Vr / np.linalg.norm(Vr, axis=0)
    for i in range(retained):
        for j in range(i + 1, retained):
            if abs(vals[i] - vals[j]) > val_rtol * top:
                continue
            overlap = abs(np.vdot(Vr[:, i], Vr[:, j]))
            if overlap > 1.0 - angle_tol:
                raise DefectiveSuspectedError(
                    f"eigenvectors of nearly equal eigenvalues nu={vals[i]:.6g} "
                    f"coalesce (overlap {overlap:.12f}); use the jordan module"
                )


def _rebasis_degenerate(vals, V, retained):
    """Orthonormalize eigenvector groups of (numerically) equal eigenvalues.

    LAPACK returns an arbitrary and possibly ill-conditioned basis for a
    repeated semisimple eigenvalue; mixing within each eigenspace is free,
    and a QR basis makes the later inversion and condition check reflect
    the geometry between eigenspaces only.  The non-retained tail (the
    numerical null space) is treated as one group.
    """
    if vals.size == 0:
        return
    top = np.abs(vals[0])
    groups = []
    start = 0
    for j in range(1, retained):
        if abs(vals[j] - vals[j - 1]) > DEGENERATE_RTOL * top:
            groups.append((start, j))
            start = j
    groups.append((start, retained))
    if retained < vals.size:
        groups.append((retained, vals.size))
    for a, b in groups:
        if b - a >= 2:
            Q, _ = np.linalg.qr(V[:, a:b])
            V[:, a:b] = Q


def asymptotic_profile(d: BiSpectralDecomposition, cluster_tol=1e-8) -> AsymptoticProfile:
    """Top-modulus tier of the spectrum and its coefficient evaluator.

    R counts eigenvalues with |nu| >= (1 - cluster_tol) |nu_1|; r0 is the
    largest modulus below the tier (0 if the tier exhausts the retained
    spectrum).
    """
    if d.retained == 0:
        raise NoSpectrumError("all eigenvalues are numerically zero")
    vals = d.eigenvalues[: d.retained]
    r1 = float(np.abs(vals[0]))
    tier = np.abs(vals) >= (1.0 - cluster_tol) * r1
    R = int(np.sum(tier))
    below = np.abs(vals[~tier])
    r0 = float(below.max()) if below.size else 0.0
    phases = np.angle(vals[tier])
    return AsymptoticProfile(
        r1=r1,
        r0=r0,
        R=R,
        M=1,
        phases=phases,
        p_top=d.right[:, :R].copy(),
        q_top=d.left[:, :R].copy(),
    )


def power_approx(d: BiSpectralDecomposition, profile: AsymptoticProfile, n: int):
    """Leading-term approximation r1^n C_n of the n-th iterated kernel.

    Returns (approximation, bound); the bound r0^n * sum_{j>R} ||q_j||_W
    dominates the dropped terms in the weighted Frobenius norm, since each
    retained p_j has unit weighted norm.
    """
    if n < 1:
        raise InvalidArgumentError(f"iterate must be >= 1, got {n}")
    approx = (profile.r1 ** n) * profile.coefficient_matrix(n)
    w = d.weights
    scale = 0.0
    for j in range(profile.R, d.retained):
        scale += wnorm(w, d.left[:, j])
    bound = (profile.r0 ** n) * scale
    return approx, bound


def reconstruct(d: BiSpectralDecomposition, k: int) -> np.ndarray:
    """Partial kernel reconstruction sum_{j<=k} nu_j p_j q_j^* at node pairs."""
    if k < 0 or k > d.eigenvalues.size:
        raise InvalidArgumentError(f"rank {k} out of range")
    if k == 0:
        return np.zeros_like(d.operator.K)
    P = d.right[:, :k]
    Q = d.left[:, :k]
    return (P * d.eigenvalues[None, :k]) @ Q.conj().T
