"""Partitioned disturbance-attenuation plant in real quadrature coordinates.

The plant has two input channels (disturbance w1, control u) and two output
channels (performance z, measurement y):

    dx = A x + B1 w1 + B2 u
    z  = C1 x + D12 u
    y  = C2 x + D21 w1

A, B1, B2 are derived from the physical data (H, C1, C2, D12, D21), so the
joint system is physically realizable by construction.  Synthesis solvability
hinges on the spectrum of the shifted generator Ax staying off the imaginary
axis.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, StructureError
from .options import DEFAULT, NumericOptions
from .qls import j_symplectic, sharp_adjoint


@dataclass
class HinfPlant:
    """Physical data plus derived state-space matrices.

    Hmat is the 2n x 2n real symmetric Hamiltonian matrix; C1 (performance
    coupling) is 2k x 2n, C2 (measurement coupling) is 2l x 2n; D12, D21 are
    real orthogonal feedthroughs; gamma is the attenuation target.
    """
    Hmat: np.ndarray
    C1: np.ndarray
    C2: np.ndarray
    D12: np.ndarray
    D21: np.ndarray
    gamma: float
    opts: NumericOptions = field(default=DEFAULT, repr=False, compare=False)
    A: np.ndarray = field(init=False)
    B1: np.ndarray = field(init=False)
    B2: np.ndarray = field(init=False)

    def __post_init__(self):
        self.Hmat = np.atleast_2d(np.asarray(self.Hmat, dtype=float))
        self.C1 = np.atleast_2d(np.asarray(self.C1, dtype=float))
        self.C2 = np.atleast_2d(np.asarray(self.C2, dtype=float))
        self.D12 = np.atleast_2d(np.asarray(self.D12, dtype=float))
        self.D21 = np.atleast_2d(np.asarray(self.D21, dtype=float))
        nn = self.Hmat.shape[0]
        if nn % 2 or self.Hmat.shape != (nn, nn):
            raise DimensionError("Hmat must be 2n x 2n")
        for name, M in [("C1", self.C1), ("C2", self.C2)]:
            if M.shape[1] != nn or M.shape[0] % 2:
                raise DimensionError(f"{name} must be (even) x {nn}, got {M.shape}")
        if self.D12.shape != (self.C1.shape[0],) * 2:
            raise DimensionError("D12 must be square matching C1 rows")
        if self.D21.shape != (self.C2.shape[0],) * 2:
            raise DimensionError("D21 must be square matching C2 rows")
        tol = self.opts.struct_tol
        if np.linalg.norm(self.Hmat - self.Hmat.T) > tol * (1 + np.linalg.norm(self.Hmat)):
            raise StructureError("Hmat must be symmetric")
        for name, Dm in [("D12", self.D12), ("D21", self.D21)]:
            if np.linalg.norm(Dm.T @ Dm - np.eye(Dm.shape[0])) > tol * max(1, Dm.shape[0]):
                raise StructureError(f"{name} must be orthogonal")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        n = nn // 2
        JJ = j_symplectic(n)
        self.A = (JJ @ self.Hmat
                  - 0.5 * sharp_adjoint(self.C1) @ self.C1
                  - 0.5 * sharp_adjoint(self.C2) @ self.C2)
        self.B1 = -sharp_adjoint(self.C2) @ self.D21
        self.B2 = -sharp_adjoint(self.C1) @ self.D12

    @property
    def n_modes(self) -> int:
        return self.Hmat.shape[0] // 2

    def with_gamma(self, gamma: float) -> "HinfPlant":
        """Same physical data at a different attenuation target."""
        return HinfPlant(self.Hmat, self.C1, self.C2, self.D12, self.D21,
                         gamma, opts=self.opts)

    def pr_residuals(self) -> tuple[float, float]:
        """Joint physical-realizability residuals of the two-channel plant:
        dynamics ||A + A# + B1 B1# + B2 B2#|| and the worst coupling
        residual max(||B1 + C2# D21||, ||B2 + C1# D12||)."""
        r1 = float(np.linalg.norm(
            self.A + sharp_adjoint(self.A)
            + self.B1 @ sharp_adjoint(self.B1)
            + self.B2 @ sharp_adjoint(self.B2)))
        r2 = max(
            float(np.linalg.norm(self.B1 + sharp_adjoint(self.C2) @ self.D21)),
            float(np.linalg.norm(self.B2 + sharp_adjoint(self.C1) @ self.D12)))
        return r1, r2


def build_plant(Hmat, C1, C2, D12, D21, gamma: float,
                opts: NumericOptions = DEFAULT) -> HinfPlant:
    """Construct and sanity-check a plant from physical data."""
    plant = HinfPlant(Hmat, C1, C2, D12, D21, gamma, opts=opts)
    r1, r2 = plant.pr_residuals()
    scale = 1.0 + float(np.linalg.norm(plant.A))
    if max(r1, r2) > opts.pr_tol * scale:
        raise StructureError(
            f"derived plant is not physically realizable (residuals {r1:.2e}, {r2:.2e})")
    return plant


@dataclass
class AxAyPair:
    """Shifted generators controlling solvability.

    Ax flips the sign of the performance-coupling damping; Ay flips the
    measurement one.  They mirror each other: Ay = -Ax# and the spectra are
    negatives of each other as multisets.
    """
    Ax: np.ndarray
    Ay: np.ndarray


def compute_ax_ay(plant: HinfPlant, opts: NumericOptions = DEFAULT) -> AxAyPair:
    JJ = j_symplectic(plant.n_modes)
    half1 = 0.5 * sharp_adjoint(plant.C1) @ plant.C1
    half2 = 0.5 * sharp_adjoint(plant.C2) @ plant.C2
    Ax = JJ @ plant.Hmat + half1 - half2
    Ay = JJ @ plant.Hmat - half1 + half2
    mirror = np.linalg.norm(Ay + sharp_adjoint(Ax))
    if mirror > 1e-12 * (1 + np.linalg.norm(Ax)):
        raise StructureError(f"generator mirror identity violated ({mirror:.2e})")
    return AxAyPair(Ax, Ay)


@dataclass
class AssumptionReport:
    """Standing-assumption check.

    Stabilizability/detectability of the two channels (a1a2) hold structurally
    for plants built from physical data; the spectral condition (a3a4) asks
    the shifted generator Ax to have no eigenvalue within split_tol of the
    imaginary axis, which simultaneously covers its mirror Ay.
    """
    a1a2: bool
    a3a4: bool
    ax_eigenvalues: np.ndarray
    min_abs_real: float


def check_assumptions(plant: HinfPlant,
                      opts: NumericOptions = DEFAULT) -> AssumptionReport:
    Ax = compute_ax_ay(plant, opts).Ax
    lam = np.linalg.eigvals(Ax)
    scale = max(1.0, float(np.max(np.abs(lam))) if lam.size else 1.0)
    min_re = float(np.min(np.abs(lam.real))) if lam.size else np.inf
    return AssumptionReport(
        a1a2=True,
        a3a4=bool(min_re > opts.split_tol * scale),
        ax_eigenvalues=lam,
        min_abs_real=min_re,
    )
