import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qslverify import Config, eig_hermitian, random_hermitian, random_pure_state, spectral_function
from qslverify.errors import NotHermitian

# roots of the characteristic polynomial of random_hermitian(3, seed=1),
# from its trace invariants and numpy.roots (companion matrix)
CUBIC_ROOTS_SEED1 = [-0.12407116923843885, 0.26830903062883876, 0.9981019505776718]


def reconstruction_residual(g):
    v = g.eigenvectors
    return np.max(np.abs((v * g.eigenvalues) @ v.conj().T - g.matrix))


class TestEigHermitian:
    def test_pauli_z_ordering(self):
        g = eig_hermitian(np.diag([1.0, -1.0]))
        np.testing.assert_array_equal(g.eigenvalues, [-1.0, 1.0])
        assert g.k_min == -1.0 and g.k_max == 1.0

    def test_identity(self):
        g = eig_hermitian(np.eye(3))
        np.testing.assert_array_equal(g.eigenvalues, [1.0, 1.0, 1.0])
        np.testing.assert_allclose(g.eigenvectors.conj().T @ g.eigenvectors, np.eye(3), atol=1e-15)

    def test_random_reconstruction(self):
        g = random_hermitian(4, 2024)
        assert reconstruction_residual(g) <= 1e-10 * (1 + np.max(np.abs(g.eigenvalues)))

    def test_complex_offdiagonal(self):
        # sigma_y has eigenvalues -1, 1 with complex eigenvectors
        g = eig_hermitian(np.array([[0, -1j], [1j, 0]]))
        np.testing.assert_allclose(g.eigenvalues, [-1.0, 1.0], atol=1e-15)
        assert reconstruction_residual(g) < 1e-15

    def test_zero_matrix(self):
        g = eig_hermitian(np.zeros((3, 3)))
        np.testing.assert_array_equal(g.eigenvalues, np.zeros(3))

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(NotHermitian):
            eig_hermitian(np.zeros((2, 3)))

    def test_rejects_nan(self):
        with pytest.raises(NotHermitian):
            eig_hermitian(np.array([[np.nan, 0], [0, 1]]))

    def test_degenerate_block(self):
        m = np.diag([2.0, 2.0, -1.0]) + 0j
        m[0, 1] = m[1, 0] = 0.0
        rot = random_hermitian(3, 5).eigenvectors
        g = eig_hermitian(rot @ m @ rot.conj().T)
        np.testing.assert_allclose(g.eigenvalues, [-1.0, 2.0, 2.0], atol=1e-13)
        np.testing.assert_allclose(g.eigenvectors.conj().T @ g.eigenvectors, np.eye(3), atol=1e-13)

    def test_agrees_with_lapack(self):
        for seed in range(20):
            g = random_hermitian(6, seed)
            np.testing.assert_allclose(g.eigenvalues, np.linalg.eigvalsh(g.matrix), atol=1e-12)

    def test_bulk_invariants(self):
        """200 seeded instances, d = 2..8: reconstruction and orthonormality."""
        rng = np.random.default_rng(7)
        for k in range(200):
            d = 2 + k % 7
            g = random_hermitian(d, rng)
            v = g.eigenvectors
            assert reconstruction_residual(g) <= 1e-10 * (1 + np.max(np.abs(g.eigenvalues)))
            assert np.max(np.abs(v.conj().T @ v - np.eye(d))) <= 1e-10
            assert np.all(np.diff(g.eigenvalues) >= 0)

    def test_generator_is_immutable(self):
        g = random_hermitian(2, 0)
        with pytest.raises(ValueError):
            g.eigenvalues[0] = 3.0


class TestSpectralFunction:
    def test_identity_function(self):
        g = eig_hermitian(np.diag([-1.0, 1.0]))
        np.testing.assert_allclose(spectral_function(g, lambda w: w), np.diag([-1.0, 1.0]))

    def test_exponential_closed_form(self):
        g = eig_hermitian(np.diag([-1.0, 1.0]))
        u = spectral_function(g, lambda w: np.exp(-1j * w * math.pi / 2))
        np.testing.assert_allclose(u, np.diag([1j, -1j]), atol=1e-15)

    def test_absolute_shift(self):
        g = eig_hermitian(np.diag([-1.0, 0.0, 2.0]))
        np.testing.assert_allclose(spectral_function(g, lambda w: np.abs(w - 0.0)),
                                   np.diag([1.0, 0.0, 2.0]))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 8), st.integers(0, 2**32 - 1), st.floats(-20, 20), st.floats(0.1, 5))
    def test_exponential_is_unitary(self, d, seed, theta, hbar):
        g = random_hermitian(d, seed)
        u = spectral_function(g, lambda w: np.exp(-1j * w * theta / hbar))
        assert np.max(np.abs(u.conj().T @ u - np.eye(d))) <= 1e-10


class TestRandom:
    def test_hermitian_deterministic(self):
        a, b = random_hermitian(2, 7), random_hermitian(2, 7)
        np.testing.assert_array_equal(a.matrix, b.matrix)

    def test_hermitian_construction(self):
        m = random_hermitian(4, 99).matrix
        assert np.max(np.abs(m - m.conj().T)) <= 1e-12 * np.max(np.abs(m))

    def test_cubic_root_oracle(self):
        g = random_hermitian(3, 1)
        np.testing.assert_allclose(g.eigenvalues, CUBIC_ROOTS_SEED1, atol=1e-8)
        m = g.matrix
        tr, tr2, det = np.trace(m).real, np.trace(m @ m).real, np.linalg.det(m).real
        roots = np.sort(np.roots([1, -tr, (tr ** 2 - tr2) / 2, -det]).real)
        np.testing.assert_allclose(g.eigenvalues, roots, atol=1e-8)

    def test_state_normalized(self):
        psi = random_pure_state(2, 3)
        assert abs(np.linalg.norm(psi.amplitudes) - 1) <= 1e-12

    def test_state_deterministic(self):
        np.testing.assert_array_equal(random_pure_state(5, 3).amplitudes,
                                      random_pure_state(5, 3).amplitudes)

    def test_state_finite(self):
        assert np.all(np.isfinite(random_pure_state(8, 11).amplitudes))

    @pytest.mark.parametrize("fn", [random_hermitian, random_pure_state])
    def test_rejects_dim_one(self, fn):
        with pytest.raises(ValueError):
            fn(1, 0)


class TestConfig:
    def test_defaults(self):
        cfg = Config()
        assert (cfg.hbar, cfg.fd_step, cfg.sing_margin, cfg.tol_bound) == (1.0, 1e-6, 0.01, 1e-4)

    @pytest.mark.parametrize("kwargs", [{"hbar": 0}, {"fd_step": -1}, {"sing_margin": 2.0},
                                        {"tol_bound": float("nan")}, {"rng_seed": -1}])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            Config(**kwargs)
