import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhinf.errors import ImaginaryAxisError
from qhinf.linalg import (eigenvalues, gain_at, hinf_norm, hinf_norm_grid,
                          is_hurwitz, is_positive_definite,
                          is_positive_semidefinite, max_singular_value,
                          min_singular_value, ordered_schur_split,
                          solve_lyapunov, spectral_radius, transfer_value)


def stable_matrix(rng, n, shift=0.5):
    A = rng.normal(size=(n, n))
    return A - (np.max(eigenvalues(A).real) + shift) * np.eye(n)


class TestBasics:
    def test_spectral_radius(self):
        assert spectral_radius(np.diag([1.0, -3.0])) == pytest.approx(3.0)

    def test_singular_values(self):
        M = np.diag([2.0, 0.5])
        assert max_singular_value(M) == pytest.approx(2.0)
        assert min_singular_value(M) == pytest.approx(0.5)

    def test_hurwitz(self):
        assert is_hurwitz(np.diag([-1.0, -2.0]))
        assert not is_hurwitz(np.diag([-1.0, 0.1]))

    def test_definiteness(self):
        assert is_positive_definite(np.eye(2))
        assert not is_positive_definite(np.diag([1.0, 0.0]))
        assert is_positive_semidefinite(np.diag([1.0, 0.0]))
        assert not is_positive_semidefinite(np.diag([1.0, -1e-3]))


class TestLyapunov:
    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 6))
    def test_residual_random_stable(self, seed, n):
        rng = np.random.default_rng(seed)
        A = stable_matrix(rng, n)
        G = rng.normal(size=(n, n))
        Q = G @ G.T
        P = solve_lyapunov(A, Q)
        assert np.linalg.norm(A @ P + P @ A.T + Q) <= 1e-8 * (1 + np.linalg.norm(Q))
        assert np.allclose(P, P.T)

    def test_complex_pair(self, rng):
        n = 3
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        A = A - (np.max(eigenvalues(A).real) + 1.0) * np.eye(n)
        G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        Q = G @ G.conj().T
        P = solve_lyapunov(A, Q)
        assert np.linalg.norm(A @ P + P @ A.conj().T + Q) < 1e-9 * np.linalg.norm(Q)

    def test_singular_operator_raises(self):
        # mirrored eigenvalue pair makes the Lyapunov operator singular
        with pytest.raises(ImaginaryAxisError):
            solve_lyapunov(np.diag([1.0, -1.0]), np.eye(2))


class TestSchurSplit:
    def test_partition(self, rng):
        A = np.diag([-2.0, 1.0, -0.5, 3.0])
        Q = np.linalg.qr(rng.normal(size=(4, 4)))[0]
        split = ordered_schur_split(Q @ A @ Q.T)
        assert split.n_stable == 2 and split.n_anti == 2
        assert np.all(eigenvalues(split.A11).real < 0)
        assert np.all(eigenvalues(split.A22).real > 0)
        # W A W^T reproduces the block upper-triangular form
        T = split.W @ (Q @ A @ Q.T) @ split.W.T
        assert np.linalg.norm(T[split.n_stable:, :split.n_stable]) < 1e-10

    def test_all_stable(self):
        split = ordered_schur_split(np.diag([-1.0, -2.0]))
        assert split.n_stable == 2 and split.n_anti == 0

    def test_imaginary_axis_raises(self):
        with pytest.raises(ImaginaryAxisError):
            ordered_schur_split(np.array([[0.0, 1.0], [-1.0, 0.0]]))


class TestHinfNorm:
    def test_first_order(self):
        # G(s) = b c / (s + a): peak |bc|/a at omega = 0
        A = np.array([[-2.0]])
        B = np.array([[3.0]])
        C = np.array([[1.5]])
        D = np.array([[0.0]])
        assert hinf_norm(A, B, C, D) == pytest.approx(2.25, abs=1e-7)
        gval, _ = hinf_norm_grid(A, B, C, D)
        assert gval == pytest.approx(2.25, rel=1e-4)

    def test_resonant_peak(self):
        # lightly damped oscillator: peak near omega0 = 1
        A = np.array([[0.0, 1.0], [-1.0, -0.1]])
        B = np.array([[0.0], [1.0]])
        C = np.array([[1.0, 0.0]])
        D = np.zeros((1, 1))
        ref = max(gain_at(A, B, C, D, w) for w in np.linspace(0.9, 1.1, 20001))
        assert hinf_norm(A, B, C, D) == pytest.approx(ref, rel=1e-6)

    def test_feedthrough_floor(self):
        A = np.array([[-1.0]])
        Z = np.zeros((1, 1))
        D = np.array([[0.7]])
        assert hinf_norm(A, Z, Z, D) == pytest.approx(0.7, abs=1e-8)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_bisection_vs_grid(self, seed):
        rng = np.random.default_rng(seed)
        n = 3
        A = stable_matrix(rng, n, shift=0.8)
        B = rng.normal(size=(n, 2))
        C = rng.normal(size=(2, n))
        D = np.zeros((2, 2))
        val = hinf_norm(A, B, C, D)
        gval, _ = hinf_norm_grid(A, B, C, D)
        assert gval <= val * (1 + 1e-6)
        assert abs(val - gval) <= 1e-3 * max(1.0, val)

    def test_transfer_value(self):
        A = np.array([[-1.0]])
        B = np.array([[2.0]])
        C = np.array([[1.0]])
        D = np.array([[0.5]])
        s = 1j * 3.0
        expected = 0.5 + 2.0 / (s + 1.0)
        assert transfer_value(A, B, C, D, s)[0, 0] == pytest.approx(expected)
