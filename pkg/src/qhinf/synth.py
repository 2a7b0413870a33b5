"""Controller synthesis by stable/anti-stable splitting and Lyapunov solves.

Instead of solving the two coupled Riccati equations directly, the pipeline
splits the shifted generator Ax into stable and anti-stable invariant
subspaces, solves (at most) four standard Lyapunov equations there, and
assembles the stabilizing Riccati solutions X and Y from the inverses of the
differences S - T/gamma^2 and U - V/gamma^2.  Certification always checks the
spectral-radius coupling rho(XY) < 1 and the stabilizing (Hurwitz) properties
directly; the singular-value short-cut tests are reported as diagnostics,
and are necessary-and-sufficient only in the symmetric-Ax regime.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import AssumptionError, SynthesisError
from .linalg import SchurSplit
from .options import DEFAULT, NumericOptions
from .plant import AxAyPair, HinfPlant, compute_ax_ay
from .qls import j_symplectic, sharp_adjoint


@dataclass
class LyapunovQuad:
    """The four Lyapunov solutions on the split subspaces.

    (S, T) live on the anti-stable block and control X; (U, V) live on the
    stable block and control Y.  Either pair is zero-dimensional when the
    corresponding block is empty.  SmTg = S - T/gamma^2, UmVg = U - V/gamma^2
    are the matrices whose inverses build the Riccati solutions.
    """
    S: np.ndarray
    T: np.ndarray
    U: np.ndarray
    V: np.ndarray
    SmTg: np.ndarray
    UmVg: np.ndarray


@dataclass
class Controller:
    """Output-feedback controller with its quantum-realizability data.

    The input/output matrices of the physical realization are tied to the
    state-space ones (BKtilde = -CK#, CKtilde = -BK#).  prResidual measures
    how far (AK, BK, CK) is from being realizable as-is; a nonzero value
    means extra vacuum channels would be needed (needs_augmentation).
    """
    AK: np.ndarray
    BK: np.ndarray
    CK: np.ndarray
    BKtilde: np.ndarray
    CKtilde: np.ndarray
    pr_residual: float
    needs_augmentation: bool


@dataclass
class SynthesisResult:
    """Everything produced by one synthesis run, for reporting."""
    gamma: float
    schur: SchurSplit | None
    quad: LyapunovQuad | None
    X: np.ndarray | None
    Y: np.ndarray | None
    Z: np.ndarray | None
    rho_xy: float | None
    sigma_condition: bool | None
    controller: Controller | None
    certified: bool
    regime: str = "general"        # "general" or "symmetric-iff"
    failure: str = ""              # violated condition when not certified
    diagnostics: dict = field(default_factory=dict)


def solve_quad(plant: HinfPlant, split: SchurSplit,
               opts: NumericOptions = DEFAULT) -> LyapunovQuad:
    """Solve the four Lyapunov equations on the split subspaces.

    With B1x = W B1, B2x = W B2 partitioned conformally (subscript 1 stable,
    2 anti-stable):

        -Ax3 S - S Ax3' + B2x2 B2x2' = 0      (anti-stable pair)
        -Ax3 T - T Ax3' + B1x2 B1x2' = 0
         Ax1 U + U Ax1' + B1x1 B1x1' = 0      (stable pair)
         Ax1 V + V Ax1' + B2x1 B2x1' = 0

    Empty blocks give zero-dimensional members and the pipeline degenerates
    to two equations.
    """
    sd = split.n_stable
    B1x, B2x = split.W @ plant.B1, split.W @ plant.B2
    g2 = plant.gamma ** 2
    S = linalg.solve_lyapunov(-split.A22, B2x[sd:] @ B2x[sd:].T, opts)
    T = linalg.solve_lyapunov(-split.A22, B1x[sd:] @ B1x[sd:].T, opts)
    U = linalg.solve_lyapunov(split.A11, B1x[:sd] @ B1x[:sd].T, opts)
    V = linalg.solve_lyapunov(split.A11, B2x[:sd] @ B2x[:sd].T, opts)
    return LyapunovQuad(S, T, U, V, S - T / g2, U - V / g2)


def _blockdiag(first: np.ndarray, second: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros((n, n))
    k = first.shape[0]
    out[:k, :k] = first
    out[k:, k:] = second
    return out


def assemble_xy(plant: HinfPlant, split: SchurSplit, quad: LyapunovQuad,
                opts: NumericOptions = DEFAULT):
    """Build the stabilizing Riccati solutions X, Y from the Lyapunov data.

    Returns (X, Y, Z, rho_xy, diagnostics).  Requires SmTg and UmVg positive
    definite (raises SynthesisError naming the violated condition otherwise;
    the caller converts this into a certified-failure result).
    """
    n2 = plant.A.shape[0]
    sd = split.n_stable
    g2 = plant.gamma ** 2
    diagnostics: dict = {}

    if quad.SmTg.size and not linalg.is_positive_definite(quad.SmTg, opts):
        raise SynthesisError("S - T/gamma^2 is not positive definite")
    if quad.UmVg.size and not linalg.is_positive_definite(quad.UmVg, opts):
        raise SynthesisError("U - V/gamma^2 is not positive definite")

    SmTg_inv = np.linalg.inv(quad.SmTg) if quad.SmTg.size else quad.SmTg
    UmVg_inv = np.linalg.inv(quad.UmVg) if quad.UmVg.size else quad.UmVg
    Xt = _blockdiag(np.zeros((sd, sd)), SmTg_inv, n2)
    Yt = _blockdiag(UmVg_inv, np.zeros((split.n_anti,) * 2), n2)
    X = split.W.T @ Xt @ split.W
    JJ = j_symplectic(n2 // 2)
    Y = (JJ @ split.W.T @ Yt @ split.W @ JJ.T) / g2
    Z = JJ @ split.W @ JJ.T @ split.W.T
    X, Y = 0.5 * (X + X.T), 0.5 * (Y + Y.T)

    # cross-block compatibility: the padded Y-candidate solves its Riccati
    # equation only when the off-diagonal blocks Y1 Ax2 (and its transpose)
    # vanish, i.e. the coupling block must be annihilated
    if split.A12.size:
        c1 = np.linalg.norm(UmVg_inv @ split.A12)
        diagnostics["compat_residual"] = float(
            c1 / ((1.0 + np.linalg.norm(UmVg_inv))
                  * (1.0 + np.linalg.norm(split.A11) + np.linalg.norm(split.A22))))
        diagnostics["cross_block_norm"] = float(np.linalg.norm(split.A12))
    else:
        diagnostics["compat_residual"] = 0.0
        diagnostics["cross_block_norm"] = 0.0

    pair = compute_ax_ay(plant, opts)
    M = plant.B1 @ plant.B1.T / g2 - plant.B2 @ plant.B2.T
    N = plant.C1.T @ plant.C1 - g2 * plant.C2.T @ plant.C2
    resX = np.linalg.norm(pair.Ax.T @ X + X @ pair.Ax + X @ M @ X)
    resY = np.linalg.norm(pair.Ay @ Y + Y @ pair.Ay.T + Y @ N @ Y)
    diagnostics["are_residual_x"] = float(resX)
    diagnostics["are_residual_y"] = float(resY)

    rho_xy = linalg.spectral_radius(X @ Y)
    return X, Y, Z, rho_xy, diagnostics


def _is_symmetric_regime(Ax: np.ndarray, Z: np.ndarray, opts: NumericOptions) -> bool:
    scale = 1.0 + np.linalg.norm(Ax)
    sym = np.linalg.norm(Ax - Ax.T) <= opts.struct_tol * scale
    n2 = Z.shape[0]
    z_id = min(np.linalg.norm(Z - np.eye(n2)), np.linalg.norm(Z + np.eye(n2)))
    return bool(sym and z_id <= 1e-8 * n2)


def certify(plant: HinfPlant, pair: AxAyPair, quad: LyapunovQuad,
            X: np.ndarray, Y: np.ndarray, Z: np.ndarray, rho_xy: float,
            diagnostics: dict, opts: NumericOptions = DEFAULT) -> tuple[bool, bool, str]:
    """Decide whether the assembled (X, Y) certify the attenuation target.

    The operative conditions are the direct ones: X, Y PSD, rho(XY) < 1,
    cross-block compatibility, and Hurwitz stability of the two loop
    matrices Ax + M X and Ay + Y N.  The singular-value short-cut
    sigma_max((S-T/g^2)^{-1}) sigma_max((U-V/g^2)^{-1}) < g^2 is recorded;
    when Ax is symmetric and Z is (up to sign) the identity it is an exact
    characterization and the result is labeled "symmetric-iff", otherwise it
    is only sufficient and rho(XY) rules.
    Returns (certified, sigma_condition, regime).
    """
    g2 = plant.gamma ** 2
    ok, why = True, []

    if not linalg.is_positive_semidefinite(X, opts):
        ok, why = False, why + ["X not positive semidefinite"]
    if not linalg.is_positive_semidefinite(Y, opts):
        ok, why = False, why + ["Y not positive semidefinite"]
    if rho_xy >= 1.0:
        ok, why = False, why + [f"rho(XY) = {rho_xy:.6g} >= 1"]
    if diagnostics.get("compat_residual", 0.0) > opts.residual_tol:
        ok, why = False, why + ["cross-block compatibility equation fails"]

    M = plant.B1 @ plant.B1.T / g2 - plant.B2 @ plant.B2.T
    N = plant.C1.T @ plant.C1 - g2 * plant.C2.T @ plant.C2
    hurw_x = linalg.is_hurwitz(pair.Ax + M @ X)
    hurw_y = linalg.is_hurwitz(pair.Ay + Y @ N)
    diagnostics["loop_x_hurwitz"] = hurw_x
    diagnostics["loop_y_hurwitz"] = hurw_y
    if not hurw_x:
        ok, why = False, why + ["X is not stabilizing"]
    if not hurw_y:
        ok, why = False, why + ["Y is not stabilizing"]

    # singular-value diagnostics; vacuous factors are 1 for empty blocks
    f_x = linalg.max_singular_value(np.linalg.inv(quad.SmTg)) if quad.SmTg.size else 1.0
    f_y = linalg.max_singular_value(np.linalg.inv(quad.UmVg)) if quad.UmVg.size else 1.0
    sigma_condition = bool(f_x * f_y < g2) if (quad.SmTg.size and quad.UmVg.size) else True
    diagnostics["sigma_product"] = float(f_x * f_y)
    diagnostics["sigma_product_direct"] = float(
        (linalg.min_singular_value(quad.SmTg) if quad.SmTg.size else 1.0)
        * (linalg.min_singular_value(quad.UmVg) if quad.UmVg.size else 1.0))

    regime = "symmetric-iff" if _is_symmetric_regime(pair.Ax, Z, opts) else "general"
    diagnostics["failure_reasons"] = why
    return ok, sigma_condition, regime


def build_controller(plant: HinfPlant, X: np.ndarray, Y: np.ndarray,
                     opts: NumericOptions = DEFAULT) -> Controller:
    """Assemble the output-feedback controller from the Riccati solutions."""
    g2 = plant.gamma ** 2
    n2 = plant.A.shape[0]
    IYX = np.eye(n2) - Y @ X
    if linalg.min_singular_value(IYX) < 1e-12 * max(1.0, linalg.max_singular_value(IYX)):
        raise SynthesisError("I - YX is singular (rho(XY) >= 1)")
    CK = -(plant.B2.T @ X + plant.D12.T @ plant.C1)
    BK = np.linalg.solve(IYX, g2 * Y @ plant.C2.T + plant.B1 @ plant.D21.T)
    AK = (plant.A + plant.B2 @ CK - BK @ plant.C2
          + (plant.B1 - BK @ plant.D21) @ plant.B1.T @ X / g2)
    resid = np.linalg.norm(AK + sharp_adjoint(AK) + BK @ sharp_adjoint(BK)
                           + sharp_adjoint(CK) @ CK)
    pr = float(resid / (1.0 + np.linalg.norm(AK)))
    return Controller(AK, BK, CK,
                      BKtilde=-sharp_adjoint(CK),
                      CKtilde=-sharp_adjoint(BK),
                      pr_residual=pr,
                      needs_augmentation=bool(pr > opts.pr_tol))


def synthesize(plant: HinfPlant, opts: NumericOptions = DEFAULT) -> SynthesisResult:
    """Full pipeline: assumptions -> split -> Lyapunov -> X/Y -> certificate
    -> controller.  Structural violations raise; a solvability failure at the
    stated gamma comes back as an uncertified result naming the condition."""
    from .plant import check_assumptions

    report = check_assumptions(plant, opts)
    if not report.a3a4:
        raise AssumptionError(
            "shifted generator has an eigenvalue too close to the imaginary "
            f"axis (min |Re| = {report.min_abs_real:.3e}); synthesis is ill-posed")
    pair = compute_ax_ay(plant, opts)
    split = linalg.ordered_schur_split(pair.Ax, opts)
    quad = solve_quad(plant, split, opts)
    try:
        X, Y, Z, rho_xy, diagnostics = assemble_xy(plant, split, quad, opts)
    except SynthesisError as exc:
        return SynthesisResult(plant.gamma, split, quad, None, None, None,
                               None, None, None, certified=False,
                               failure=str(exc))
    certified, sigma_condition, regime = certify(
        plant, pair, quad, X, Y, Z, rho_xy, diagnostics, opts)
    controller = None
    if rho_xy < 1.0 - 1e-12:
        controller = build_controller(plant, X, Y, opts)
    failure = "; ".join(diagnostics.get("failure_reasons", []))
    return SynthesisResult(plant.gamma, split, quad, X, Y, Z, rho_xy,
                           sigma_condition, controller, certified,
                           regime=regime, failure=failure,
                           diagnostics=diagnostics)


def min_certified_gamma(plant: HinfPlant, lo: float, hi: float,
                        opts: NumericOptions = DEFAULT,
                        max_iter: int = 60,
                        tol: float = 1e-6,
                        predicate=None) -> float:
    """Bisect for the smallest gamma in [lo, hi] whose synthesis certifies.

    `predicate` may replace the default certified-flag test with any boolean
    function of a SynthesisResult (used for threshold studies).  The plant's
    own gamma is ignored; lo must fail and hi must pass.
    """
    if predicate is None:
        predicate = lambda res: res.certified

    def ok(g: float) -> bool:
        try:
            return bool(predicate(synthesize(plant.with_gamma(g), opts)))
        except (AssumptionError, SynthesisError):
            return False

    if not ok(hi):
        raise SynthesisError(f"upper bracket gamma = {hi} does not certify")
    if ok(lo):
        return lo
    for _ in range(max_iter):
        if hi - lo <= tol * max(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi
