"""Dense linear-algebra kernel used by the synthesis pipeline.

Thin, checked wrappers around numpy/scipy factorizations plus the two
solvers the pipeline is built on: a Kronecker-product Lyapunov solver and a
Hamiltonian-bisection H-infinity norm.  Everything works on complex input;
real input stays real where the contract promises it.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import DimensionError, ImaginaryAxisError, NotHurwitzError
from .options import DEFAULT, NumericOptions


def _as_square(M: np.ndarray, name: str = "matrix") -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    return M


def eigenvalues(A: np.ndarray) -> np.ndarray:
    """Eigenvalues of a square matrix, sorted by real part then imaginary."""
    A = _as_square(A, "A")
    lam = np.linalg.eigvals(A)
    return lam[np.lexsort((lam.imag, lam.real))]


def spectral_radius(A: np.ndarray) -> float:
    A = _as_square(A, "A")
    if A.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(A))))


def max_singular_value(M: np.ndarray) -> float:
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.svd(M, compute_uv=False)[0])


def min_singular_value(M: np.ndarray) -> float:
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.svd(M, compute_uv=False)[-1])


def is_hurwitz(A: np.ndarray, tol: float = 0.0) -> bool:
    """True iff every eigenvalue of A has real part < -tol."""
    A = _as_square(A, "A")
    if A.shape[0] == 0:
        return True
    return bool(np.max(np.linalg.eigvals(A).real) < -tol)


def is_positive_definite(M: np.ndarray, opts: NumericOptions = DEFAULT) -> bool:
    """Hermitian positive definiteness via the eigenvalue spectrum.

    Non-Hermitian input (beyond struct_tol) is rejected as False rather than
    silently symmetrized.
    """
    M = _as_square(M, "M")
    if M.shape[0] == 0:
        return True
    scale = max(1.0, float(np.linalg.norm(M)))
    if np.linalg.norm(M - M.conj().T) > opts.struct_tol * scale:
        return False
    return bool(np.min(np.linalg.eigvalsh(M)) > opts.pd_tol * scale)


def is_positive_semidefinite(M: np.ndarray, opts: NumericOptions = DEFAULT) -> bool:
    M = _as_square(M, "M")
    if M.shape[0] == 0:
        return True
    scale = max(1.0, float(np.linalg.norm(M)))
    if np.linalg.norm(M - M.conj().T) > opts.struct_tol * scale:
        return False
    return bool(np.min(np.linalg.eigvalsh(M)) > -opts.psd_tol * scale)


def solve_lyapunov(A: np.ndarray, Q: np.ndarray,
                   opts: NumericOptions = DEFAULT) -> np.ndarray:
    """Solve A P + P A^H + Q = 0 for Hermitian P.

    Kronecker vectorization: with column-major vec,
    (I (x) A + conj(A) (x) I) vec(P) = -vec(Q).  Solvable whenever no pair of
    eigenvalues satisfies lambda_i + conj(lambda_j) = 0; in the pipeline A is
    always Hurwitz (or -A is), which guarantees this.  Output is symmetrized
    and realified when the data are real.
    """
    A = _as_square(A, "A")
    Q = _as_square(Q, "Q")
    n = A.shape[0]
    if Q.shape[0] != n:
        raise DimensionError(f"A is {A.shape}, Q is {Q.shape}")
    if n == 0:
        return np.zeros((0, 0))
    scale = max(1.0, float(np.linalg.norm(Q)))
    if np.linalg.norm(Q - Q.conj().T) > opts.struct_tol * scale:
        raise ValueError("Q must be Hermitian")
    eye = np.eye(n)
    K = np.kron(eye, A) + np.kron(A.conj(), eye)
    try:
        vecP = np.linalg.solve(K, -Q.reshape(-1, order="F"))
    except np.linalg.LinAlgError as exc:
        raise ImaginaryAxisError(
            "Lyapunov operator is singular: eigenvalue pair with "
            "lambda_i + conj(lambda_j) = 0") from exc
    P = vecP.reshape((n, n), order="F")
    P = 0.5 * (P + P.conj().T)
    if np.isrealobj(A) and np.isrealobj(Q):
        P = P.real
    resid = np.linalg.norm(A @ P + P @ A.conj().T + Q)
    if resid > opts.residual_tol * max(1.0, np.linalg.norm(Q), np.linalg.norm(P)):
        raise ImaginaryAxisError(
            f"Lyapunov solve residual {resid:.3e} too large; "
            "spectrum is too close to the imaginary axis")
    return P


@dataclass
class SchurSplit:
    """Ordered real Schur decomposition split into stable / anti-stable parts.

    W is real orthogonal with W A W^T = [[A11, A12], [0, A22]], where A11
    carries the open-left-half-plane eigenvalues and A22 the open-right-half-
    plane ones.  n_stable + n_anti = n; either block may be empty.
    """
    W: np.ndarray
    A11: np.ndarray
    A12: np.ndarray
    A22: np.ndarray
    n_stable: int
    n_anti: int


def ordered_schur_split(A: np.ndarray, opts: NumericOptions = DEFAULT) -> SchurSplit:
    """Split a real matrix into stable and anti-stable invariant subspaces.

    Raises ImaginaryAxisError if any eigenvalue has |Re lambda| below
    split_tol relative to the spectral scale, since the split is then
    ill-defined.
    """
    A = _as_square(A, "A")
    if not np.isrealobj(A):
        if np.max(np.abs(A.imag)) > opts.imag_tol * max(1.0, np.linalg.norm(A)):
            raise ValueError("ordered_schur_split expects a real matrix")
        A = A.real
    n = A.shape[0]
    if n == 0:
        e = np.zeros((0, 0))
        return SchurSplit(e, e, e, e, 0, 0)
    lam = np.linalg.eigvals(A)
    scale = max(1.0, float(np.max(np.abs(lam))))
    if np.min(np.abs(lam.real)) <= opts.split_tol * scale:
        raise ImaginaryAxisError(
            "eigenvalue on or near the imaginary axis; stable/anti-stable "
            "split is ill-defined (standing assumptions violated)")
    T, Z, sdim = sla.schur(A, output="real", sort=lambda re, im: re < 0.0)
    W = Z.T
    split = SchurSplit(
        W=W,
        A11=T[:sdim, :sdim],
        A12=T[:sdim, sdim:],
        A22=T[sdim:, sdim:],
        n_stable=int(sdim),
        n_anti=n - int(sdim),
    )
    # sanity: the (2,1) block of W A W^T must vanish
    lower = T[sdim:, :sdim]
    if lower.size and np.linalg.norm(lower) > opts.residual_tol * scale:
        raise ImaginaryAxisError("Schur reordering failed to decouple blocks")
    return split


# ---------------------------------------------------------------------------
# H-infinity norm
# ---------------------------------------------------------------------------

def transfer_value(A: np.ndarray, B: np.ndarray, C: np.ndarray, D: np.ndarray,
                   s: complex) -> np.ndarray:
    """Evaluate C (sI - A)^{-1} B + D at a single complex frequency."""
    n = A.shape[0]
    if n == 0:
        return np.asarray(D, dtype=complex)
    return C @ np.linalg.solve(s * np.eye(n) - A, B) + D


def gain_at(A, B, C, D, omega: float) -> float:
    """Largest singular value of the transfer matrix at s = i*omega."""
    return max_singular_value(transfer_value(A, B, C, D, 1j * omega))


def _probe_frequencies(A: np.ndarray, n_grid: int) -> np.ndarray:
    lam = np.linalg.eigvals(A) if A.shape[0] else np.array([1.0 + 0j])
    mags = np.abs(lam)
    lo = max(1e-8, 1e-3 * float(np.min(mags[mags > 0], initial=1.0)))
    hi = max(10.0, 1e3 * float(np.max(mags, initial=1.0)))
    grid = np.geomspace(lo, hi, n_grid)
    res = np.abs(lam.imag)
    return np.unique(np.concatenate([[0.0], grid, res[res > 0]]))


def hinf_norm_grid(A, B, C, D, n_grid: int = 2000) -> tuple[float, float]:
    """Lower-bound the H-infinity norm on a dense log frequency grid.

    Returns (max gain, frequency achieving it).  Used as an independent
    cross-check of the bisection; the grid can only under-estimate.
    """
    A, B, C, D = map(np.asarray, (A, B, C, D))
    best, wbest = max_singular_value(D), np.inf
    for w in _probe_frequencies(A, n_grid):
        g = gain_at(A, B, C, D, w)
        if g > best:
            best, wbest = g, w
    return best, wbest


def _has_imaginary_eigenvalue(A, B, C, D, gamma: float) -> bool:
    """Test gamma <= ||G||_inf via the Hamiltonian eigenvalue criterion."""
    n = A.shape[0]
    R = D.conj().T @ D - gamma**2 * np.eye(D.shape[1])
    S = D @ D.conj().T - gamma**2 * np.eye(D.shape[0])
    Rinv_DhC = np.linalg.solve(R, D.conj().T @ C)
    Abar = A - B @ Rinv_DhC
    M = np.block([
        [Abar, -gamma * B @ np.linalg.solve(R, B.conj().T)],
        [gamma * C.conj().T @ np.linalg.solve(S, C), -Abar.conj().T],
    ])
    lam = np.linalg.eigvals(M)
    tol = 1e-10 * np.maximum(1.0, np.abs(lam))
    return bool(np.any(np.abs(lam.real) <= tol))


def hinf_norm(A, B, C, D, opts: NumericOptions = DEFAULT) -> float:
    """H-infinity norm of the stable system (A, B, C, D) by bisection.

    Bracket from a frequency-grid lower bound (which also handles the
    all-pass case, where the norm equals the largest singular value of D)
    and a resolvent-based upper bound; refine with the standard Hamiltonian
    imaginary-axis-eigenvalue test.  Raises NotHurwitzError for unstable A.
    """
    A, B, C, D = map(lambda M: np.atleast_2d(np.asarray(M)), (A, B, C, D))
    A = _as_square(A, "A")
    n = A.shape[0]
    if n and not is_hurwitz(A):
        raise NotHurwitzError("H-infinity norm requires a Hurwitz A")
    if n == 0 or B.size == 0 or C.size == 0:
        return max_singular_value(D)

    lo = max(max_singular_value(D), hinf_norm_grid(A, B, C, D, n_grid=400)[0])
    decay = -float(np.max(np.linalg.eigvals(A).real))
    hi = max_singular_value(D) + 2.0 * np.linalg.norm(C, 2) * np.linalg.norm(B, 2) / decay
    hi = max(hi, lo * (1 + 1e-6) + opts.hinf_tol)
    while hi - lo > opts.hinf_tol * max(1.0, lo):
        mid = 0.5 * (lo + hi)
        if _has_imaginary_eigenvalue(A, B, C, D, mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
