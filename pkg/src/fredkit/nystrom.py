"""Nystrom discretization of integral operators.

Replacing the integral by a quadrature sum turns the operator into the
dense matrix A with block entry A[i, j] = N(x_i, x_j) * w_j.  Alongside A
we keep the raw samples K and the symmetrized form
B = W^{1/2} K W^{1/2}, which shares A's eigenvalues and turns weighted
orthonormality of eigenfunction samples into Euclidean orthonormality.
"""
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidArgumentError,
    NontrivialityWarning,
    UnsupportedKernelError,
    ZeroDivisionSignal,
)
from .kernels import Kernel
from .measure import QuadratureRule
from .wlinalg import expand_weights


@dataclass(frozen=True)
class DiscreteOperator:
    """Discretized integral operator on one quadrature rule.

    Attributes
    ----------
    rule : QuadratureRule
    shape : (s1, s2) kernel block shape
    K : raw kernel samples, (n*s1) x (n*s2), node-major blocks
    A : K with columns scaled by the node weights (drives iteration/solves)
    B : W^{1/2}-symmetrized samples (drives Hermitian/SVD paths)
    """

    rule: QuadratureRule
    shape: tuple
    K: np.ndarray
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        for M in (self.K, self.A, self.B):
            M.setflags(write=False)

    @property
    def block_rows(self):
        return self.shape[0]

    @property
    def block_cols(self):
        return self.shape[1]

    @property
    def w_rows(self):
        return expand_weights(self.rule.weights, self.shape[0])

    @property
    def w_cols(self):
        return expand_weights(self.rule.weights, self.shape[1])

    @property
    def is_square_block(self):
        return self.shape[0] == self.shape[1]

    def hs_norm(self):
        """Quadrature estimate of the Hilbert-Schmidt norm ||N||_2.

        Computed as sqrt(sum_ij w_i w_j ||N(x_i, x_j)||_F^2).
        """
        sr = np.sqrt(self.w_rows)[:, None]
        sc = np.sqrt(self.w_cols)[None, :]
        return float(np.linalg.norm(sr * self.K * sc))

    def hermitian_defect(self):
        """Relative departure of B from Hermitian symmetry."""
        scale = max(float(np.linalg.norm(self.B)), 1e-300)
        return float(np.linalg.norm(self.B - self.B.conj().T)) / scale


def discretize(kernel: Kernel, rule: QuadratureRule) -> DiscreteOperator:
    """Sample a kernel on a rule and assemble K, A, and B.

    Emits NontrivialityWarning when the sampled kernel is numerically zero
    (useful as a fixture, but no spectral content).
    """
    K = kernel.sample_matrix(rule)
    s1, s2 = kernel.shape
    wr = expand_weights(rule.weights, s1)
    wc = expand_weights(rule.weights, s2)
    A = K * wc[None, :]
    B = np.sqrt(wr)[:, None] * K * np.sqrt(wc)[None, :]
    op = DiscreteOperator(rule=rule, shape=(s1, s2), K=K, A=A, B=B)
    if op.hs_norm() == 0.0:
        warnings.warn(
            "discretized kernel is numerically zero (||N||_2 = 0)",
            NontrivialityWarning,
            stacklevel=2,
        )
    return op


def apply(op: DiscreteOperator, f) -> np.ndarray:
    """Nystrom image of the operator on node samples: A @ f."""
    f = np.asarray(f, dtype=complex)
    if f.shape != (op.A.shape[1],):
        raise InvalidArgumentError(
            f"sample vector has length {f.shape}, expected ({op.A.shape[1]},)"
        )
    return op.A @ f


def apply_adjoint(op: DiscreteOperator, p) -> np.ndarray:
    """Node samples of the adjoint image: (W K)^* p = K^H (w * p)."""
    p = np.asarray(p, dtype=complex)
    if p.shape != (op.K.shape[0],):
        raise InvalidArgumentError(
            f"sample vector has length {p.shape}, expected ({op.K.shape[0]},)"
        )
    return op.K.conj().T @ (op.w_rows * p)


def iterated_kernel(op: DiscreteOperator, n: int) -> np.ndarray:
    """Node samples of the n-th iterated kernel: (K W)^{n-1} K.

    n = 1 returns K itself.  Requires a square block shape.
    """
    if not op.is_square_block:
        raise InvalidArgumentError("iterated kernels need a square block shape")
    if n < 1:
        raise InvalidArgumentError(f"iterate must be >= 1, got {n}")
    out = np.array(op.K, dtype=complex)
    for _ in range(n - 1):
        out = op.A @ out
    return out


def nystrom_extend(kernel: Kernel, rule: QuadratureRule, eig_samples, nu, y):
    """Off-grid eigenfunction value via the Nystrom interpolant.

    p(y) = nu^{-1} sum_i N(y, x_i) w_i p(x_i).  At a node this reproduces
    the sample up to the eigen-residual.
    """
    if nu == 0:
        raise ZeroDivisionSignal("cannot extend an eigenfunction with nu = 0")
    if kernel.is_grid:
        raise UnsupportedKernelError(
            "grid-sampled kernels cannot be evaluated off-grid"
        )
    s1, s2 = kernel.shape
    p = np.asarray(eig_samples, dtype=complex)
    if p.shape != (rule.count * s2,):
        raise InvalidArgumentError("eigenfunction samples have the wrong length")
    acc = np.zeros(s1, dtype=complex)
    for i, (x, w) in enumerate(zip(rule.nodes, rule.weights)):
        acc += kernel.eval_block(y, x) @ (w * p[i * s2 : (i + 1) * s2])
    acc /= complex(nu)
    if s1 == 1:
        return complex(acc[0])
    return acc
