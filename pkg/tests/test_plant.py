import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_sym_plant
from qhinf.errors import DimensionError, StructureError
from qhinf.plant import build_plant, check_assumptions, compute_ax_ay
from qhinf.qls import j_symplectic, sharp_adjoint


def simple_plant(gamma=1.5):
    return build_plant(np.zeros((2, 2)), np.sqrt(2.5) * np.eye(2),
                       np.sqrt(2.0) * np.eye(2), np.eye(2), np.eye(2), gamma)


class TestConstruction:
    def test_derived_matrices(self):
        p = simple_plant()
        n = 2
        H = np.zeros((n, n))
        expected_A = (j_symplectic(1) @ H
                      - 0.5 * sharp_adjoint(p.C1) @ p.C1
                      - 0.5 * sharp_adjoint(p.C2) @ p.C2)
        assert np.allclose(p.A, expected_A)
        assert np.allclose(p.B1, -sharp_adjoint(p.C2) @ p.D21)
        assert np.allclose(p.B2, -sharp_adjoint(p.C1) @ p.D12)

    def test_gamma_free_input_matrices(self):
        # B1 carries no attenuation scaling: changing gamma leaves it fixed
        p = simple_plant(1.5)
        q = p.with_gamma(2.5)
        assert np.allclose(p.B1, q.B1)
        assert np.allclose(p.B2, q.B2)
        assert q.gamma == 2.5

    def test_rejects_nonsymmetric_hamiltonian(self):
        with pytest.raises(StructureError):
            build_plant(np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2),
                        np.eye(2), np.eye(2), np.eye(2), 1.0)

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            build_plant(np.zeros((2, 2)), np.eye(2), np.ones((1, 4)),
                        np.eye(2), np.eye(1), 1.0)

    def test_joint_pr_residuals_small(self):
        r1, r2 = simple_plant().pr_residuals()
        assert r1 < 1e-12 and r2 < 1e-12


class TestAxAy:
    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_ay_is_minus_sharp_of_ax(self, seed):
        rng = np.random.default_rng(seed)
        plant = random_sym_plant(rng)
        pair = compute_ax_ay(plant)
        assert np.allclose(pair.Ay, -sharp_adjoint(pair.Ax), atol=1e-12)

    def test_shifted_generator_values(self):
        p = simple_plant()
        pair = compute_ax_ay(p)
        # Ax = JH + (1/2) C1# C1 - (1/2) C2# C2 = (kappa_u - kappa_w)/2 * I
        assert np.allclose(pair.Ax, 0.25 * np.eye(2))


class TestAssumptions:
    def test_split_holds_generic(self, rng):
        plant = random_sym_plant(rng)
        rep = check_assumptions(plant)
        assert rep.a1a2 and rep.a3a4

    def test_split_fails_on_axis(self):
        # equal couplings put the shifted generator's spectrum at the origin
        p = build_plant(np.zeros((2, 2)), np.eye(2), np.eye(2),
                        np.eye(2), np.eye(2), 1.0)
        assert not check_assumptions(p).a3a4
