import numpy as np
import pytest

from qhinf.plant import HinfPlant, build_plant
from qhinf.passive import PassivePlant
from qhinf.qls import SlhModel


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def rand_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-ish unitary via QR with phase fixing."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q @ np.diag(d / np.abs(d))


def rand_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q @ np.diag(np.sign(np.diag(r)))


def random_sym_plant(rng: np.random.Generator, n_modes: int = 2,
                     gamma: float = 1.5) -> HinfPlant:
    """Random realizable quadrature plant with symmetric shifted generator.

    Detuning-free diagonal couplings conjugated by a symplectic-orthogonal
    change of basis; the construction keeps the shifted generator symmetric
    while exercising generic coordinates.
    """
    while True:
        c1 = rng.uniform(0.3, 1.5, size=n_modes)
        c2 = rng.uniform(0.3, 1.5, size=n_modes)
        if np.min(np.abs(c1**2 - c2**2)) >= 0.1:
            break
    n = 2 * n_modes
    Cd1 = np.kron(np.eye(2), np.diag(c1))
    Cd2 = np.kron(np.eye(2), np.diag(c2))
    q = rand_unitary(rng, n_modes)
    R = np.block([[q.real, -q.imag], [q.imag, q.real]])
    return build_plant(np.zeros((n, n)), Cd1 @ R.T, Cd2 @ R.T,
                       np.eye(n), np.eye(n), gamma)


def random_passive_model(rng: np.random.Generator, n: int = 2,
                         m: int = 2, detuned: bool = True) -> SlhModel:
    Om = rng.normal(size=(n, n))
    Om = 0.5 * (Om + Om.T) if detuned else np.zeros((n, n))
    C = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
    return SlhModel(S=rand_unitary(rng, m), Omega_minus=Om,
                    Omega_plus=np.zeros((n, n)), C_minus=C,
                    C_plus=np.zeros((m, n)))


def random_slh_model(rng: np.random.Generator, n: int = 2,
                     m: int = 2) -> SlhModel:
    Om = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Op = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return SlhModel(S=rand_unitary(rng, m),
                    Omega_minus=0.5 * (Om + Om.conj().T),
                    Omega_plus=0.5 * (Op + Op.T),
                    C_minus=rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n)),
                    C_plus=0.3 * (rng.normal(size=(m, n))
                                  + 1j * rng.normal(size=(m, n))))


def random_passive_plant(rng: np.random.Generator, n: int = 2,
                         gamma: float = 1.0) -> PassivePlant:
    """Random passive two-channel plant whose shifted generator is
    nonsingular (so both Lyapunov supports are well defined)."""
    while True:
        C1 = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        C2 = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        plant = PassivePlant(C1, C2, np.eye(n), np.eye(n), gamma)
        lam = np.linalg.eigvalsh(plant.Ax)
        if np.min(np.abs(lam)) > 1e-3:
            return plant
