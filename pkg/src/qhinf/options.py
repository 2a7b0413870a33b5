"""Central numerical tolerance table.

All routines take an optional NumericOptions; omitting it uses the defaults
below.  Keeping the knobs in one dataclass makes sweeps reproducible: a single
options object threads through an entire synthesis run.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class NumericOptions:
    # relative tolerance for '|Re lambda| too close to the imaginary axis'
    # when splitting a spectrum into stable / anti-stable parts
    split_tol: float = 1e-8
    # residual tolerance for linear-equation / Lyapunov / Riccati solutions,
    # relative to the scale of the data
    residual_tol: float = 1e-9
    # threshold below which a physical-realizability residual counts as zero
    pr_tol: float = 1e-9
    # smallest eigenvalue for a matrix to count as positive definite,
    # relative to its spectral norm
    pd_tol: float = 1e-10
    # slack for positive-semidefiniteness checks (eigenvalues may dip this
    # far below zero from rounding)
    psd_tol: float = 1e-8
    # absolute tolerance for the H-infinity norm bisection
    hinf_tol: float = 1e-9
    # tolerance on imaginary parts when a matrix is expected to be real
    imag_tol: float = 1e-10
    # symmetry / structural residual tolerance for input validation
    struct_tol: float = 1e-9
    # bisection tolerance for gamma thresholds
    gamma_tol: float = 1e-10

    def override(self, **kwargs) -> "NumericOptions":
        """Copy with some fields replaced."""
        return replace(self, **kwargs)


DEFAULT = NumericOptions()
