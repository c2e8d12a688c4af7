"""Heralded two-atom entanglement from a single photon in a leaky cavity.

Closed forms, spectral-packet quadrature, and an independent
time-domain oracle for the probability that one photon scattering off
two Lambda atoms in a one-sided cavity heralds the Bell state
(|LR> + |RL>)/sqrt(2) through an R-polarized output photon.
"""

from .analytic import (AmplitudePair, CouplingProfile, DressedRoots,
                       TransferOffsets, cavity_photon_probs_closed,
                       cavity_photon_probs_quadrature, dressed_roots,
                       excited_propagator, injected_amplitudes, injected_pr,
                       level_shift, perfect_transfer_offsets, pr_bound,
                       pr_closed_form, s_matrix)
from .cavity import (MirrorSpec, QuasiMode, exterior_reflection,
                     interior_coeff, mirror_coeffs, mode_function,
                     quasi_mode_residual, quasi_modes_approx,
                     quasi_modes_exact)
from .errors import (BellcavError, EmptyTable, GammaUnsupported,
                     GridTooCoarse, InvalidMirror, NegativeRate,
                     NoConvergence, NonPositiveKappa, NormDeficit,
                     NormDriftExceeded, NotConverged, NumericError,
                     PoleProximity, QuadratureFailure, UnnormalizedSpectrum,
                     ValidationError, ZeroCoupling)
from .harness import SweepRow, SweepSpec, figure, optimize_ratio, run_cli, sweep
from .kernels import backend_name
from .model import (PhysicalParams, ProbabilityResult, total_coupling,
                    validate)
from .oracle import (DiscretizedModel, OracleState, SimGrid, build, evolve,
                     initial_state, make_grid, refinement_pair,
                     simulate_experiment)
from .spectra import SpectralFunction, evaluate, norm, scattering_residual

__version__ = "0.1.0"

__all__ = [
    "AmplitudePair", "BellcavError", "CouplingProfile", "DiscretizedModel",
    "DressedRoots", "EmptyTable", "GammaUnsupported", "GridTooCoarse",
    "InvalidMirror", "MirrorSpec", "NegativeRate", "NoConvergence",
    "NonPositiveKappa", "NormDeficit", "NormDriftExceeded", "NotConverged",
    "NumericError", "OracleState", "PhysicalParams", "PoleProximity",
    "ProbabilityResult", "QuadratureFailure", "QuasiMode", "SimGrid",
    "SpectralFunction", "SweepRow", "SweepSpec", "TransferOffsets",
    "UnnormalizedSpectrum", "ValidationError", "ZeroCoupling",
    "backend_name", "build", "cavity_photon_probs_closed",
    "cavity_photon_probs_quadrature", "dressed_roots", "evaluate", "evolve",
    "excited_propagator", "exterior_reflection", "figure",
    "initial_state", "injected_amplitudes", "injected_pr", "interior_coeff",
    "level_shift", "make_grid", "mirror_coeffs", "mode_function", "norm",
    "optimize_ratio", "perfect_transfer_offsets", "pr_bound",
    "pr_closed_form", "quasi_mode_residual", "quasi_modes_approx",
    "quasi_modes_exact", "refinement_pair", "run_cli", "s_matrix",
    "scattering_residual", "simulate_experiment", "sweep", "total_coupling",
    "validate",
]
