"""Singular value decomposition of discretized integral operators.

The SVD is computed on the symmetrized matrix B = W^{1/2} K W^{1/2}, so
Euclidean orthonormality of the singular vectors becomes weighted
orthonormality of the node samples: <p_j, p_k>_W = <q_j, q_k>_W = delta_jk.
Iterated Gram-operator kernels (N N^*)^n and their odd-power variants, the
trace power sums, and truncation follow from the triples alone.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .nystrom import DiscreteOperator
from .wlinalg import anchor_phase

RANK_RTOL = 1e-12


@dataclass(frozen=True)
class OperatorSVD:
    """Singular triples (theta_j, p_j, q_j) of a discretized operator.

    singular_values are real, non-negative, non-increasing; left holds the
    p_j node samples column-wise, right the q_j samples, both families
    weighted-orthonormal.  rank_numerical counts theta_j > 1e-12 * theta_1.
    """

    singular_values: np.ndarray
    left: np.ndarray
    right: np.ndarray
    shape: tuple
    rank_numerical: int
    operator: DiscreteOperator

    @property
    def w_rows(self):
        return self.operator.w_rows

    @property
    def w_cols(self):
        return self.operator.w_cols


def operator_svd(op: DiscreteOperator) -> OperatorSVD:
    """Singular triples of the operator via the dense SVD of B.

    Samples are un-weighted back from the singular vectors (division by
    sqrt(w)); each p_j gets a real-positive anchor entry and q_j inherits
    the same rotation, so A q_j = theta_j p_j is preserved.
    """
    U, s, Vh = np.linalg.svd(op.B, full_matrices=False)
    swr = np.sqrt(op.w_rows)
    swc = np.sqrt(op.w_cols)
    P = U / swr[:, None]
    Q = Vh.conj().T / swc[:, None]
    for j in range(P.shape[1]):
        ph = anchor_phase(P[:, j])
        P[:, j] *= ph
        Q[:, j] *= ph
    theta1 = s[0] if s.size else 0.0
    rank = int(np.sum(s > RANK_RTOL * theta1)) if theta1 > 0 else 0
    return OperatorSVD(
        singular_values=s,
        left=P,
        right=Q,
        shape=op.shape,
        rank_numerical=rank,
        operator=op,
    )


def _side_matrix(svd, side):
    if side == "left":
        return svd.left
    if side == "right":
        return svd.right
    raise InvalidArgumentError(f"side must be 'left' or 'right', got {side!r}")


def iterated_gram(svd: OperatorSVD, n: int, side="left") -> np.ndarray:
    """Kernel samples of (N N^*)^n (left) or (N^* N)^n (right), n >= 1.

    Expansion sum_j theta_j^{2n} p_j p_j^* (resp. q_j q_j^*); the numerical
    null space contributes nothing for n >= 1.
    """
    if n < 1:
        raise InvalidArgumentError(f"iterate must be >= 1, got {n}")
    V = _side_matrix(svd, side)
    pw = svd.singular_values ** (2 * n)
    return (V * pw[None, :]) @ V.conj().T


def iterated_gram_with_kernel(svd: OperatorSVD, n: int, side="left") -> np.ndarray:
    """Odd-power kernel samples: sum_j theta_j^{2n+1} p_j q_j^*, n >= 0.

    side="left" gives (N N^*)^n N (reproduces K at n = 0); side="right"
    gives the adjoint variant sum_j theta_j^{2n+1} q_j p_j^*.
    """
    if n < 0:
        raise InvalidArgumentError(f"iterate must be >= 0, got {n}")
    pw = svd.singular_values ** (2 * n + 1)
    if side == "left":
        return (svd.left * pw[None, :]) @ svd.right.conj().T
    if side == "right":
        return (svd.right * pw[None, :]) @ svd.left.conj().T
    raise InvalidArgumentError(f"side must be 'left' or 'right', got {side!r}")


def gram_apply(svd: OperatorSVD, n: int, f, side="left") -> np.ndarray:
    """Apply (N N^*)^n to node samples through the retained triples.

    Returns sum_j theta_j^{2n} p_j <p_j, f>_W (left) or the q-side
    analogue.  At n = 0 this is the orthogonal projection onto the
    retained singular subspace, not the identity: truncation discards the
    null directions that would be needed to resolve arbitrary f.
    """
    if n < 0:
        raise InvalidArgumentError(f"iterate must be >= 0, got {n}")
    V = _side_matrix(svd, side)
    w = svd.w_rows if side == "left" else svd.w_cols
    f = np.asarray(f, dtype=complex)
    if f.shape != (V.shape[0],):
        raise InvalidArgumentError(
            f"sample vector has length {f.shape}, expected ({V.shape[0]},)"
        )
    r = svd.rank_numerical
    coeffs = V[:, :r].conj().T @ (w * f)
    pw = svd.singular_values[:r] ** (2 * n)
    return V[:, :r] @ (pw * coeffs)


def trace_power(svd: OperatorSVD, n: int) -> float:
    """Trace identity value sum_j theta_j^{2n+2}, n >= 0.

    Equals the quadrature of trace[N^* (N N^*)^n N](x, x) over the measure.
    """
    if n < 0:
        raise InvalidArgumentError(f"iterate must be >= 0, got {n}")
    return float(np.sum(svd.singular_values ** (2 * n + 2)))


def svd_truncate(svd: OperatorSVD, M: int):
    """Keep the top M triples; returns (truncated SVD, tail bound theta_{M+1}).

    The tail bound drives the O(theta_{M+1}^{2n}) error of truncated
    iterated Gram kernels.
    """
    if M < 1 or M > svd.rank_numerical:
        raise InvalidArgumentError(
            f"kept count {M} out of range 1..{svd.rank_numerical}"
        )
    tail = float(svd.singular_values[M]) if M < svd.singular_values.size else 0.0
    trunc = OperatorSVD(
        singular_values=svd.singular_values[:M].copy(),
        left=svd.left[:, :M].copy(),
        right=svd.right[:, :M].copy(),
        shape=svd.shape,
        rank_numerical=M,
        operator=svd.operator,
    )
    return trunc, tail
