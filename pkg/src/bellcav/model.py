"""Physical parameter records, unit conventions, and validation.

Two three-level atoms sit in a leaky one-sided cavity that supports a
single quasi-mode of width ``kappa`` centered at ``k_c``. A single
photon couples the shared excited state to the two ground-state channels
with strengths ``lambda_l`` and ``lambda_r``. All rates and detunings
are dimensionless multiples of one caller-chosen unit (hbar = c = 1);
only ratios matter. Internally every frequency is an offset
``dk = k - k_c`` (rotating frame), so ``k_c`` enters input and output
only. Of the two channel phases only the difference ``delta_lr`` is
observable, and it is the only phase stored.
"""

from dataclasses import dataclass
from math import isfinite

from .errors import NegativeRate, NonPositiveKappa, NumericError, ZeroCoupling


@dataclass(frozen=True)
class PhysicalParams:
    """All rates, detunings, and phases of the atom-cavity system.

    Attributes
    ----------
    lambda_l : float
        Coupling strength of the L emission channel (rate units, >= 0).
    lambda_r : float
        Coupling strength of the R emission channel (rate units, >= 0).
    kappa : float
        Quasi-mode decay rate (rate units, > 0).
    k_c : float
        Quasi-mode center frequency; may be 0 in the rotating frame.
    delta_e : float
        Excited-level detuning omega_e - k_c.
    gamma : float
        Spontaneous decay rate of the excited level into free space (>= 0).
    delta_lr : float
        Relative phase theta_L - theta_R between the channel couplings
        (radians).
    """

    lambda_l: float
    lambda_r: float
    kappa: float
    k_c: float = 0.0
    delta_e: float = 0.0
    gamma: float = 0.0
    delta_lr: float = 0.0


def validate(params: PhysicalParams) -> PhysicalParams:
    """Check the parameter invariants and return the record unchanged.

    Raises
    ------
    NegativeRate
        If a coupling or gamma is negative, or any field is not finite.
    ZeroCoupling
        If both couplings vanish.
    NonPositiveKappa
        If kappa <= 0.
    """
    for name in ("lambda_l", "lambda_r", "kappa", "k_c", "delta_e", "gamma", "delta_lr"):
        value = getattr(params, name)
        if not isfinite(value):
            raise NegativeRate(f"{name} must be finite, got {value!r}")
    if params.lambda_l < 0 or params.lambda_r < 0:
        raise NegativeRate(
            f"couplings must be >= 0, got lambda_l={params.lambda_l}, "
            f"lambda_r={params.lambda_r}"
        )
    if params.gamma < 0:
        raise NegativeRate(f"gamma must be >= 0, got {params.gamma}")
    if params.lambda_l == 0 and params.lambda_r == 0:
        raise ZeroCoupling("lambda_l and lambda_r are both zero")
    if params.kappa <= 0:
        raise NonPositiveKappa(f"kappa must be > 0, got {params.kappa}")
    return params


def total_coupling(params: PhysicalParams) -> float:
    """Return S = 2*lambda_l**2 + lambda_r**2.

    The L channel enters twice because either atom can emit the L photon,
    which enhances that coupling by sqrt(2). Phases do not enter S.
    """
    return 2.0 * params.lambda_l**2 + params.lambda_r**2


@dataclass(frozen=True)
class ProbabilityResult:
    """Outcome probabilities of one photon-scattering experiment.

    p_l is the probability of an L-polarized output photon (atoms left in
    |LL>), p_r of an R-polarized one (atoms projected onto the Bell state),
    p_loss of losing the excitation to free space. method tags which
    engine produced the numbers.
    """

    p_l: float
    p_r: float
    p_loss: float
    method: str
    err_estimate: float

    def __post_init__(self):
        tol = max(self.err_estimate, 1e-9) + 1e-12
        for name in ("p_l", "p_r", "p_loss"):
            value = getattr(self, name)
            if not -tol <= value <= 1.0 + tol:
                raise NumericError(f"{name}={value} outside [0, 1] beyond tolerance {tol}")
        total = self.p_l + self.p_r + self.p_loss
        if abs(total - 1.0) > tol:
            raise NumericError(f"probabilities sum to {total}, not 1 within {tol}")


def result_from_lr(p_l: float, p_r: float, method: str, err_estimate: float) -> ProbabilityResult:
    """Build a ProbabilityResult with p_loss = 1 - p_l - p_r.

    Tiny negative remainders (quadrature roundoff) are clamped to zero;
    anything beyond the error budget still fails the record's own checks.
    """
    p_loss = 1.0 - p_l - p_r
    if -(err_estimate + 1e-10) < p_loss < 0.0:
        p_loss = 0.0
    return ProbabilityResult(p_l=p_l, p_r=p_r, p_loss=p_loss, method=method,
                             err_estimate=err_estimate)
