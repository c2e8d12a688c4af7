"""Exception hierarchy shared by all modules.

Two families: ValidationError covers rejected inputs (bad parameters,
mirrors, grids, tables) and maps to CLI exit code 2; NumericError covers
failures of a numerical procedure on otherwise valid input (quadrature
breakdown, non-convergence, pole evaluation) and maps to exit code 3.
"""


class BellcavError(Exception):
    """Base class for every package-specific error."""


class ValidationError(BellcavError, ValueError):
    """An input record violates its invariants."""


class NegativeRate(ValidationError):
    """A coupling or decay rate is negative."""


class ZeroCoupling(ValidationError):
    """Both channel couplings vanish; the atoms never see the photon."""


class NonPositiveKappa(ValidationError):
    """A linewidth that must be positive is zero or negative."""


class InvalidMirror(ValidationError):
    """Mirror coefficients violate the lossless-element constraint."""


class EmptyTable(ValidationError):
    """A tabulated spectrum has no rows."""


class UnnormalizedSpectrum(ValidationError):
    """A spectrum's norm deviates too far from 1 to renormalize silently."""


class GammaUnsupported(ValidationError):
    """Closed forms require gamma = 0; use the quadrature variant."""


class GridTooCoarse(ValidationError):
    """A simulation grid violates one of its resolution guards."""


class NormDeficit(ValidationError):
    """Too little spectral mass falls inside the simulated bandwidth."""


class NumericError(BellcavError, RuntimeError):
    """A numerical procedure failed on valid input."""


class PoleProximity(NumericError):
    """Evaluation requested at (or too near) a true pole."""


class NoConvergence(NumericError):
    """An iterative solver exhausted its iteration budget."""


class QuadratureFailure(NumericError):
    """Adaptive quadrature could not reach the requested tolerance."""


class NormDriftExceeded(NumericError):
    """Unitary evolution drifted in norm beyond the allowed budget."""


class NotConverged(NumericError):
    """A simulation ended before reaching its asymptotic regime."""
