import numpy as np
import pytest

import fredkit as fk
from fredkit.errors import (
    InvalidArgumentError,
    UnsupportedKernelError,
    ZeroDivisionSignal,
)


def gram_project(op, rule, basis):
    """Coordinates of the operator restricted to an orthonormal basis."""
    E = np.column_stack([e(rule.nodes) for e in basis])
    return E.conj().T @ (rule.weights[:, None] * (op.A @ E))


class TestDiscretize:
    def test_zero_kernel_warns(self, gl8):
        kern = fk.separable_kernel([0.0], [lambda y: y], [lambda z: z])
        with pytest.warns(fk.NontrivialityWarning):
            op = fk.discretize(kern, gl8)
        assert np.all(op.A == 0)
        assert op.hs_norm() == 0.0

    def test_rank_one_third_on_two_points(self, yz_kernel):
        # Gauss-2 is exact for the cubic moment, so 1/3 appears exactly
        op = fk.discretize(yz_kernel, fk.gauss_legendre(2, 0.0, 1.0))
        nus = np.linalg.eigvals(op.A)
        nus = nus[np.argsort(-np.abs(nus))]
        assert nus[0] == pytest.approx(1.0 / 3.0, abs=1e-14)
        assert abs(nus[1]) <= 1e-14

    def test_mehler_top_eigenvalue_one(self, mehler_op):
        top = np.max(np.abs(np.linalg.eigvals(mehler_op.A)))
        assert top == pytest.approx(1.0, abs=1e-8)

    def test_matrices_consistent(self, yz2_op):
        w = yz2_op.rule.weights
        assert np.array_equal(yz2_op.A, yz2_op.K * w[None, :])
        sw = np.sqrt(w)
        assert np.allclose(yz2_op.B, sw[:, None] * yz2_op.K * sw[None, :], rtol=0, atol=0)

    def test_hs_norm_quadrature(self, gl8, yz_kernel):
        # oracle: ||N||_2^2 = int int y^2 z^2 dy dz = 1/9
        op = fk.discretize(yz_kernel, gl8)
        assert op.hs_norm() ** 2 == pytest.approx(1.0 / 9.0, rel=1e-13)

    def test_hermitian_defect_small_for_symmetric(self, mehler_op):
        assert mehler_op.hermitian_defect() <= 1e-13


class TestApply:
    def test_constant_maps_to_half_y(self, yz_op, gl8):
        f = np.ones(8, dtype=complex)
        got = fk.apply(yz_op, f)
        assert got == pytest.approx(gl8.nodes / 2.0, abs=1e-15)

    def test_zero_maps_to_zero(self, yz_op):
        assert np.all(fk.apply(yz_op, np.zeros(8)) == 0)

    def test_eigen_relation(self, yz2_op, gl8):
        f = gl8.nodes.astype(complex)
        got = fk.apply(yz2_op, f)
        assert got == pytest.approx(f / 4.0, abs=1e-15)

    def test_length_checked(self, yz_op):
        with pytest.raises(InvalidArgumentError):
            fk.apply(yz_op, np.ones(5))


class TestApplyAdjoint:
    def test_adjoint_of_yz2(self, yz2_op, gl8):
        # oracle: N* p (z) = z^2 int y p(y) dy; with p = y this is z^2 / 3
        p = gl8.nodes.astype(complex)
        got = fk.apply_adjoint(yz2_op, p)
        assert got == pytest.approx(gl8.nodes ** 2 / 3.0, abs=1e-15)

    def test_zero(self, yz2_op):
        assert np.all(fk.apply_adjoint(yz2_op, np.zeros(8)) == 0)

    def test_hermitian_case_matches_apply(self, mehler_op):
        rng = np.random.default_rng(5)
        p = rng.normal(size=40) + 1j * rng.normal(size=40)
        lhs = fk.apply_adjoint(mehler_op, p)
        rhs = np.conj(fk.apply(mehler_op, np.conj(p)))
        assert np.max(np.abs(lhs - rhs)) <= 1e-13 * np.max(np.abs(rhs))

    def test_duality(self, two_term_op):
        rng = np.random.default_rng(11)
        w = two_term_op.w_rows
        for _ in range(10):
            f = rng.normal(size=8) + 1j * rng.normal(size=8)
            p = rng.normal(size=8) + 1j * rng.normal(size=8)
            lhs = np.sum(w * np.conj(p) * fk.apply(two_term_op, f))
            rhs = np.sum(w * np.conj(fk.apply_adjoint(two_term_op, p)) * f)
            assert lhs == pytest.approx(rhs, rel=1e-12)


class TestIteratedKernel:
    def test_first_iterate_is_k(self, yz_op):
        assert np.array_equal(fk.iterated_kernel(yz_op, 1), yz_op.K)

    def test_second_iterate_of_yz(self, yz_op):
        got = fk.iterated_kernel(yz_op, 2)
        assert got == pytest.approx(yz_op.K / 3.0, abs=1e-16)

    def test_defective_tenth_power_coordinates(self, defective_op, gl8):
        # oracle: direct matrix multiplication of the 2x2 block
        J = np.array([[0.5, 1.0], [0.0, 0.5]])
        J10 = np.linalg.matrix_power(J, 10)
        K10 = fk.iterated_kernel(defective_op, 10)
        basis = fk.orthonormal_poly_basis(gl8, 2)
        E = np.column_stack([e(gl8.nodes) for e in basis])
        coords = E.T @ (gl8.weights[:, None] * K10 * gl8.weights[None, :]) @ E
        assert coords == pytest.approx(J10, abs=1e-12)

    def test_advancing_composes(self, mehler_op):
        K3 = fk.iterated_kernel(mehler_op, 3)
        K7 = fk.iterated_kernel(mehler_op, 7)
        adv = np.linalg.matrix_power(mehler_op.A, 4) @ K3
        assert np.max(np.abs(adv - K7)) <= 1e-12 * np.max(np.abs(K7))

    def test_bad_iterate(self, yz_op):
        with pytest.raises(InvalidArgumentError):
            fk.iterated_kernel(yz_op, 0)


class TestSimilarity:
    @pytest.mark.parametrize("n", [8, 16, 32])
    def test_eig_a_matches_eig_b(self, n):
        rule = fk.gauss_legendre(n, 0.0, 1.0)
        gallery = [
            fk.separable_kernel([1.0], [lambda y: y], [lambda z: z]),
            fk.separable_kernel([1.0], [lambda y: y], [lambda z: z * z]),
            fk.mehler_kernel(0.5),
        ]
        for kern in gallery:
            op = fk.discretize(kern, rule)
            ea = np.sort_complex(np.linalg.eigvals(op.A))
            eb = np.sort_complex(np.linalg.eigvals(op.B))
            scale = max(np.max(np.abs(ea)), 1e-300)
            assert np.max(np.abs(ea - eb)) <= 1e-10 * scale


class TestBlockKernels:
    def test_block_diagonal_composition(self, gl8):
        # 2x2 block-diagonal copy of yz: every scalar eigenvalue doubles up
        kern = fk.separable_kernel(
            [1.0, 1.0],
            [lambda y: np.array([y, 0.0]), lambda y: np.array([0.0, y])],
            [lambda z: np.array([z, 0.0]), lambda z: np.array([0.0, z])],
            shape=(2, 2),
        )
        op = fk.discretize(kern, gl8)
        assert op.K.shape == (16, 16)
        # node-major block layout: entry (2i+a, 2j+b) = N(x_i, x_j)[a, b] w_j
        assert op.K[0, 0] == gl8.nodes[0] ** 2
        assert op.K[0, 1] == 0.0
        nus = np.linalg.eigvals(op.A)
        nus = nus[np.argsort(-np.abs(nus))]
        assert nus[0] == pytest.approx(1.0 / 3.0, abs=1e-13)
        assert nus[1] == pytest.approx(1.0 / 3.0, abs=1e-13)
        assert np.max(np.abs(nus[2:])) <= 1e-13
        # weighted trace identity: sum theta^2 = 2 * (1/3) * (1/3)
        sv = fk.operator_svd(op)
        from fredkit.opsvd import trace_power

        assert trace_power(sv, 0) == pytest.approx(2.0 / 9.0, abs=1e-13)

    def test_block_apply_shapes(self, gl8):
        kern = fk.separable_kernel(
            [1.0],
            [lambda y: np.array([1.0, y])],
            [lambda z: np.array([z, 0.0])],
            shape=(2, 2),
        )
        op = fk.discretize(kern, gl8)
        f = np.ones(16, dtype=complex)
        out = fk.apply(op, f)
        assert out.shape == (16,)
        back = fk.apply_adjoint(op, out)
        assert back.shape == (16,)


class TestNystromExtend:
    def test_rank_one_closed_form(self, yz_kernel, gl8):
        samples = gl8.nodes.astype(complex)
        val = fk.nystrom_extend(yz_kernel, gl8, samples, 1.0 / 3.0, 0.25)
        assert val == pytest.approx(0.25, abs=1e-14)

    def test_node_consistency(self, yz_kernel, gl8):
        samples = gl8.nodes.astype(complex)
        for i in (0, 3, 7):
            val = fk.nystrom_extend(yz_kernel, gl8, samples, 1.0 / 3.0, gl8.nodes[i])
            assert val == pytest.approx(samples[i], abs=1e-10)

    def test_mehler_hermite_eigenfunction_off_grid(self, gh40, mehler_op):
        d = fk.hermitian_eig(mehler_op)
        samples = d.right[:, 1]
        val = fk.nystrom_extend(fk.mehler_kernel(0.5), gh40, samples, 0.5, 2.0)
        assert min(abs(val - 2.0), abs(val + 2.0)) <= 1e-4

    def test_zero_nu_rejected(self, yz_kernel, gl8):
        with pytest.raises(ZeroDivisionSignal):
            fk.nystrom_extend(yz_kernel, gl8, np.ones(8), 0.0, 0.5)

    def test_grid_body_rejected(self, gl8):
        kern = fk.grid_kernel(gl8, np.eye(8))
        with pytest.raises(UnsupportedKernelError):
            fk.nystrom_extend(kern, gl8, np.ones(8), 1.0, 0.5)
