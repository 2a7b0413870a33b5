"""Exception types shared across the package."""


class QhinfError(Exception):
    """Base class for package-specific failures."""


class DimensionError(QhinfError, ValueError):
    """Array shapes are inconsistent with the requested operation."""


class StructureError(QhinfError, ValueError):
    """Input violates a structural invariant (symmetry, unitarity, ...)."""


class ImaginaryAxisError(QhinfError, ValueError):
    """An eigenvalue lies on (or numerically too close to) the imaginary
    axis, so a stable/anti-stable split or a Riccati solve is ill-posed."""


class NotHurwitzError(QhinfError, ValueError):
    """A matrix required to be Hurwitz has an eigenvalue with
    non-negative real part."""


class AssumptionError(QhinfError, ValueError):
    """A plant violates one of the standing synthesis assumptions."""


class SynthesisError(QhinfError, RuntimeError):
    """Synthesis could not produce a controller for a structural reason
    (as opposed to an honest certified-failure result)."""


class OracleError(QhinfError, RuntimeError):
    """An independent cross-check solver failed to produce a usable
    stabilizing solution."""
