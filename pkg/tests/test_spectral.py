import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavespec.errors import ConsistencyError, ContractError, NumericError, ResolutionError
from wavespec.profiles import eval_phi, make_profile
from wavespec.spectral import (
    assemble,
    assemble_hill,
    check_profile,
    eigen_symmetric,
    fourier_coefficients,
    inertial_index,
    kernel_correlation,
    spectral_scale,
)

TWO_PI = 2 * math.pi


class TestJacobiEigen:
    @pytest.mark.parametrize("n", [1, 2, 3, 7, 50])
    def test_against_lapack(self, n):
        rng = np.random.default_rng(n)
        A = rng.normal(size=(n, n))
        A = A + A.T
        w = eigen_symmetric(A)
        assert np.allclose(w, np.linalg.eigvalsh(A), atol=1e-10 * max(1, np.abs(A).max()))

    def test_vectors_reconstruct(self):
        rng = np.random.default_rng(3)
        A = rng.normal(size=(40, 40))
        A = A + A.T
        w, V = eigen_symmetric(A, vectors=True)
        assert np.abs(V @ np.diag(w) @ V.T - A).max() < 1e-10
        assert np.abs(V.T @ V - np.eye(40)).max() < 1e-12

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(-1e3, 1e3), min_size=6, max_size=6))
    def test_small_random(self, vals):
        A = np.zeros((3, 3))
        A[np.triu_indices(3)] = vals
        A = A + np.triu(A, 1).T
        assert np.allclose(eigen_symmetric(A), np.linalg.eigvalsh(A), atol=1e-9 * max(1.0, np.abs(A).max()))

    def test_degenerate_spectrum(self):
        w = eigen_symmetric(np.diag([2.0, 2.0, 1.0]))
        assert np.array_equal(w, [1.0, 2.0, 2.0])

    def test_rejects_nonsymmetric(self):
        with pytest.raises(ContractError):
            eigen_symmetric(np.array([[1.0, 2.0], [0.0, 1.0]]))
        with pytest.raises(ContractError):
            eigen_symmetric(np.ones((2, 3)))

    def test_sweep_limit(self):
        rng = np.random.default_rng(0)
        A = rng.normal(size=(20, 20))
        with pytest.raises(NumericError):
            eigen_symmetric(A + A.T, max_sweeps=1)


class TestAssembly:
    def test_constant_potential_exact(self):
        L, C, N = TWO_PI, 2.5, 40
        H = assemble_hill(C, L, N)
        w = eigen_symmetric(H.M)
        m = np.arange(N + 1)
        expected = np.sort(np.concatenate([C + m**2, C + m[1:] ** 2]))
        assert np.allclose(w, expected, atol=1e-10)

    def test_cosine_potential_matches_dense_reference(self):
        # q = 2 cos(2 pi x / L): compare against an exponential-basis build
        L, N = 10.0, 32
        q = lambda x: 2.0 * np.cos(2 * np.pi * x / L)
        H = assemble_hill(q, L, N)
        n = np.arange(-N, N + 1)
        M = np.diag((2 * np.pi * n / L) ** 2).astype(complex)
        for i in range(len(n) - 1):
            M[i, i + 1] = M[i + 1, i] = 1.0
        assert np.allclose(eigen_symmetric(H.M), np.linalg.eigvalsh(M), atol=1e-10)

    def test_synthesize_basis_function(self):
        H = assemble_hill(0.0, 4.0, 8)
        v = np.zeros(17)
        v[2] = 1.0
        x = np.linspace(0, 4, 9)
        assert np.allclose(H.synthesize(v, x), math.sqrt(2 / 4) * np.cos(2 * np.pi * 2 * x / 4))

    def test_odd_potential_rejected(self):
        with pytest.raises(ContractError):
            fourier_coefficients(lambda x: np.sin(x), TWO_PI, 8)

    def test_underresolved(self):
        p = make_profile("ckdv-cnoidal", 100.0, 0.9999)
        with pytest.raises(ResolutionError) as exc:
            assemble(p, 32)
        assert exc.value.suggested_n > 32

    def test_cutoff_minimum(self):
        with pytest.raises(ContractError):
            assemble(make_profile("gardner", 20.0, 0.5), 16)


class TestInertialIndex:
    @pytest.mark.parametrize("k", [0.2, 0.5, 0.95])
    def test_counts(self, family, k):
        p = make_profile(family, 20.0, k)
        idx = check_profile(p)
        assert idx.pair == (family.n_expected, 1)
        assert idx.kernel_correlation > 0.999

    def test_auto_refines_modes(self):
        idx = check_profile(make_profile("ckdv-cnoidal", 20.0, 0.9999))
        assert idx.N > 64 and idx.pair == (2, 1)

    def test_theta_rule(self):
        eigs = [-2.0, -1.0, 0.0, 3.0]
        assert inertial_index(eigs, 1.0, theta=1.0).pair == (2, 1)
        with pytest.raises(ConsistencyError):
            inertial_index(eigs, 1.0, theta=-1.0)
        with pytest.raises(ConsistencyError):
            inertial_index(eigs, 1.0, n_expected=1)

    def test_zero_tolerance_scale(self):
        p = make_profile("gardner", 20.0, 0.5)
        idx = inertial_index([-1.0, 1e-7, 1.0], spectral_scale(p))
        assert idx.n_zero == 1 and idx.z_tol == pytest.approx(1e-6 * spectral_scale(p))

    def test_kernel_is_phi_prime(self):
        p = make_profile("ckdv-dnoidal", TWO_PI, 0.5)
        H = assemble(p, 64)
        w, V = eigen_symmetric(H.M, vectors=True)
        assert kernel_correlation(H, V, w, p) > 0.9999
        j = int(np.argmin(np.abs(w)))
        x = np.linspace(0, TWO_PI, 33)
        _, dphi, _ = eval_phi(p, x)
        v = H.synthesize(V[:, j], x)
        c = np.dot(v, dphi) / np.dot(dphi, dphi)
        assert np.abs(v - c * dphi).max() < 1e-8 * np.abs(v).max()
