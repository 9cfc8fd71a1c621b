import numpy as np
import pytest

from eofbound.linalg import (
    DensityMatrix,
    apply_map_to_a,
    density_matrix,
    hermitian_eigenvalues,
    partial_transpose_a,
    realign,
    schmidt_vector,
    singular_values,
    trace_norm,
)
from eofbound.monotones import negativity_pure, phi_map
from eofbound.states import (
    canonical_pure_state,
    maximally_entangled,
    pure_density,
    random_density,
    random_pure_state,
    random_schmidt_vector,
    random_separable,
    random_unitary,
)
from eofbound.validation import ValidationError


def random_hermitian(rng, n):
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return m + m.conj().T


class TestHermitianEigenvalues:
    def test_identity(self):
        np.testing.assert_allclose(hermitian_eigenvalues(np.eye(4)), np.ones(4))

    def test_diagonal(self):
        np.testing.assert_allclose(hermitian_eigenvalues(np.diag([3.0, -1.0])),
                                   [3.0, -1.0])

    def test_shift_invariance(self, rng):
        # eigenvalues of H + cI equal eigenvalues of H shifted by c
        for _ in range(20):
            h = random_hermitian(rng, 16)
            c = float(rng.standard_normal())
            base = hermitian_eigenvalues(h)
            shifted = hermitian_eigenvalues(h + c * np.eye(16))
            np.testing.assert_allclose(shifted, base + c, atol=1e-10)

    def test_sum_matches_trace(self, rng):
        h = random_hermitian(rng, 16)
        assert abs(hermitian_eigenvalues(h).sum() - np.trace(h).real) < 1e-9

    def test_rejects_non_square(self):
        with pytest.raises(ValidationError, match="square"):
            hermitian_eigenvalues(np.ones((2, 3)))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError, match="Hermitian"):
            hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestTraceNorm:
    def test_identity(self):
        assert trace_norm(np.eye(5)) == pytest.approx(5.0, abs=1e-12)

    def test_diag_plus_minus(self):
        assert trace_norm(np.diag([1.0, -1.0])) == pytest.approx(2.0, abs=1e-12)

    def test_bounded_below_by_trace(self, rng):
        m = random_hermitian(rng, 8)
        assert trace_norm(m) >= abs(np.trace(m).real) - 1e-12

    def test_pure_state_partial_transpose_norm(self, rng):
        # ||rho^T_A|| = 2 n_T + 1 with n_T from the Schmidt closed form
        for _ in range(25):
            mu = random_schmidt_vector(rng)
            rho = pure_density(canonical_pure_state(mu, 4))
            got = trace_norm(partial_transpose_a(rho))
            assert got == pytest.approx(2 * negativity_pure(mu) + 1, abs=1e-9)

    def test_unitary_invariance(self, rng):
        for _ in range(20):
            m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
            u = random_unitary(rng, 6)
            w = random_unitary(rng, 6)
            assert trace_norm(u @ m @ w) == pytest.approx(trace_norm(m), abs=1e-9)


class TestSingularValues:
    def test_matches_gram_route_oracle(self, rng):
        from eofbound.linalg import gram_singular_values

        for shape in ((6, 6), (4, 9), (16, 4)):
            m = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
            got = singular_values(m)
            ref = gram_singular_values(m)
            # the Gram route is accurate to ~sqrt(eps) on small values
            np.testing.assert_allclose(got, ref, atol=1e-7)

    def test_exact_on_rank_deficient(self, rng):
        # vanishing singular values must come out at machine scale
        u = rng.standard_normal((8, 3)) + 1j * rng.standard_normal((8, 3))
        m = u @ u.conj().T
        got = singular_values(m)
        assert got[3:].max() < 1e-12


class TestPartialTranspose:
    def test_product_state(self, rng):
        a = random_hermitian(rng, 4)
        a = a @ a.conj().T
        a /= np.trace(a).real
        b = random_hermitian(rng, 3)
        b = b @ b.conj().T
        b /= np.trace(b).real
        rho = density_matrix(np.kron(a, b), 3)
        pt = partial_transpose_a(rho)
        np.testing.assert_allclose(pt, np.kron(a.T, b), atol=1e-12)
        assert trace_norm(pt) == pytest.approx(1.0, abs=1e-9)
        assert np.linalg.eigvalsh(pt).min() > -1e-10

    def test_involution(self, rng):
        rho = random_density(rng, dim_b=5)
        pt = partial_transpose_a(rho)
        again = partial_transpose_a(DensityMatrix(matrix=pt, dim_a=4, dim_b=5))
        np.testing.assert_allclose(again, rho.matrix, atol=0)

    def test_preserves_hermiticity_and_trace(self, rng):
        rho = random_density(rng, dim_b=4)
        pt = partial_transpose_a(rho)
        assert np.abs(pt - pt.conj().T).max() < 1e-12
        assert np.trace(pt) == pytest.approx(1.0, abs=1e-12)

    def test_maximally_entangled_min_eigenvalue(self):
        rho = pure_density(maximally_entangled(4))
        eigs = np.linalg.eigvalsh(partial_transpose_a(rho))
        assert eigs.min() == pytest.approx(-0.25, abs=1e-10)


class TestRealign:
    def test_product_state_trace_norm_and_rank(self, rng):
        rho = pure_density(np.kron(np.eye(4)[0], np.eye(4)[0]))
        r = realign(rho)
        assert trace_norm(r) == pytest.approx(1.0, abs=1e-9)
        assert np.linalg.matrix_rank(r, tol=1e-10) == 1

    def test_pure_state_norm_equals_negativity_norm(self, rng):
        for _ in range(20):
            mu = random_schmidt_vector(rng)
            rho = pure_density(canonical_pure_state(mu, 5))
            assert trace_norm(realign(rho)) == pytest.approx(
                2 * negativity_pure(mu) + 1, abs=1e-9)

    def test_matches_index_loop_reference(self, rng):
        rho = random_density(rng, dim_b=3)
        da, db = rho.dims
        ref = np.zeros((da * da, db * db), dtype=complex)
        for i in range(da):
            for j in range(da):
                for k in range(db):
                    for ell in range(db):
                        ref[i * da + j, k * db + ell] = \
                            rho.matrix[i * db + k, j * db + ell]
        np.testing.assert_allclose(realign(rho), ref, atol=0)

    def test_shape(self, rng):
        rho = random_density(rng, dim_b=6)
        assert realign(rho).shape == (16, 36)


class TestApplyMapToA:
    def test_identity_map(self, rng):
        rho = random_density(rng, dim_b=5)
        np.testing.assert_allclose(apply_map_to_a(rho, lambda s: s), rho.matrix,
                                   atol=0)

    def test_transpose_map_equals_partial_transpose(self, rng):
        rho = random_density(rng, dim_b=5)
        np.testing.assert_allclose(apply_map_to_a(rho, lambda s: s.T),
                                   partial_transpose_a(rho), atol=1e-14)

    def test_positive_map_on_separable(self, rng):
        # (I x Phi) of a separable state is PSD with trace norm D - 2 = 2
        for _ in range(10):
            rho = random_separable(rng, dim_b=4)
            out = apply_map_to_a(rho, phi_map)
            eigs = np.linalg.eigvalsh(out)
            assert eigs.min() > -1e-10
            assert trace_norm(out) == pytest.approx(2.0, abs=1e-9)


class TestSchmidtVector:
    def test_product_basis_state(self):
        psi = np.zeros(16)
        psi[0] = 1.0
        np.testing.assert_allclose(schmidt_vector(psi, (4, 4)), [1, 0, 0, 0],
                                   atol=1e-12)

    def test_maximally_entangled(self):
        np.testing.assert_allclose(schmidt_vector(maximally_entangled(4), (4, 4)),
                                   np.full(4, 0.25), atol=1e-12)

    def test_bell_embedded(self):
        psi = canonical_pure_state([0.5, 0.5, 0.0, 0.0], 6)
        np.testing.assert_allclose(schmidt_vector(psi, (4, 6)),
                                   [0.5, 0.5, 0.0, 0.0], atol=1e-12)

    def test_rejects_unnormalized(self):
        with pytest.raises(ValidationError, match="norm"):
            schmidt_vector(np.ones(16), (4, 4))

    def test_local_unitary_invariance(self, rng):
        for _ in range(20):
            psi = random_pure_state(rng, 5)
            u = np.kron(random_unitary(rng, 4), random_unitary(rng, 5))
            np.testing.assert_allclose(schmidt_vector(u @ psi, (4, 5)),
                                       schmidt_vector(psi, (4, 5)), atol=1e-9)

    def test_round_trip_from_canonical_embedding(self, rng):
        mu = random_schmidt_vector(rng)
        got = schmidt_vector(canonical_pure_state(mu, 8), (4, 8))
        np.testing.assert_allclose(got, mu, atol=1e-12)


class TestDensityMatrixValidation:
    def test_rejects_bad_trace(self):
        with pytest.raises(ValidationError, match="trace"):
            density_matrix(np.eye(16) / 8.0)

    def test_rejects_non_psd(self):
        m = np.eye(16) / 16.0
        m[0, 0], m[1, 1] = -0.05, 0.175
        with pytest.raises(ValidationError, match="positive semidefinite"):
            density_matrix(m)

    def test_rejects_non_hermitian(self):
        m = np.eye(16, dtype=complex) / 16.0
        m[0, 1] = 0.2
        with pytest.raises(ValidationError, match="Hermitian"):
            density_matrix(m)

    def test_rejects_bad_dims(self):
        with pytest.raises(ValidationError, match="multiple"):
            density_matrix(np.eye(6) / 6.0)

    def test_matrix_is_readonly(self, rng):
        rho = random_density(rng, dim_b=4)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1.0
