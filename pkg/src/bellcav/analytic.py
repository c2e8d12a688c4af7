"""Resolvent engine for the atom-cavity scattering problem.

One photon and two Lambda atoms behind a leaky mirror reduce, within the
single-excitation subspace, to a three-arm problem: the collective
excited state |E> couples to the |LL> continuum with sqrt(2) g_L(k) and
to the Bell-state continuum |Phi> with g_R(k), where

    g_mu(k) = sqrt(kappa/2pi) lambda_mu e^{i theta_mu} / (dk + i kappa/2).

At every frequency the two continua split into a bright combination
(coupled with V(k) = sqrt(2|g_L|^2 + |g_R|^2)) and a dark one that
evolves freely. The excited-state propagator has two dressed poles

    omega_pm = (de' - i kappa/2)/2 +- sqrt(((de' + i kappa/2)/2)^2 + S),

with S = 2 lambda_l^2 + lambda_r^2 and de' = delta_e - i gamma/2 (free
space loss enters everywhere through this complex detuning). Scattering
of a monochromatic bright component multiplies it by the unit-modulus
factor s(k); recombining channels yields the output amplitudes C_L, C_R
whose squared moduli integrate to the entanglement probabilities.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import spectra
from ._integrate import real_line_integral
from .errors import (GammaUnsupported, NumericError, PoleProximity,
                     UnnormalizedSpectrum, ValidationError, ZeroCoupling)
from .model import (PhysicalParams, ProbabilityResult, result_from_lr,
                    total_coupling, validate)


def _de_eff(params: PhysicalParams) -> complex:
    """Complex excited-level detuning delta_e - i gamma / 2."""
    return params.delta_e - 0.5j * params.gamma


class CouplingProfile:
    """Frequency profiles g_L, g_R, V and the bright/dark rotation.

    Immutable after construction; all methods take the absolute
    wavenumber k and work internally with dk = k - k_c.
    """

    def __init__(self, params: PhysicalParams):
        self.params = validate(params)
        self.s_total = total_coupling(params)
        self._pref = np.sqrt(params.kappa / (2.0 * np.pi))

    def g_l(self, k) -> complex:
        p = self.params
        dk = np.asarray(k, dtype=float) - p.k_c
        out = self._pref * p.lambda_l * np.exp(1j * p.delta_lr) / (dk + 0.5j * p.kappa)
        return complex(out) if np.isscalar(k) else out

    def g_r(self, k) -> complex:
        p = self.params
        dk = np.asarray(k, dtype=float) - p.k_c
        out = self._pref * p.lambda_r / (dk + 0.5j * p.kappa)
        return complex(out) if np.isscalar(k) else out

    def v(self, k) -> float:
        """Bright-channel coupling V(k) = sqrt(2|g_L|^2 + |g_R|^2) > 0."""
        p = self.params
        dk = np.asarray(k, dtype=float) - p.k_c
        out = np.sqrt(p.kappa * self.s_total / (2.0 * np.pi)) / np.sqrt(dk**2 + 0.25 * p.kappa**2)
        return float(out) if np.isscalar(k) else out

    def bright_weight(self, k) -> complex:
        """Component of |LL;k> along the bright state: sqrt(2) g_L / V."""
        return np.sqrt(2.0) * self.g_l(k) / self.v(k)

    def dark_weight(self, k) -> complex:
        """Component of |LL;k> along the dark state: conj(g_R) / V."""
        return np.conj(self.g_r(k)) / self.v(k)

    def rotation(self, k) -> np.ndarray:
        """2x2 unitary mapping (|LL;k>, |Phi;k>) to (bright, dark)."""
        gl, gr, v = self.g_l(k), self.g_r(k), self.v(k)
        return np.array(
            [[np.sqrt(2.0) * gl / v, gr / v],
             [np.conj(gr) / v, -np.sqrt(2.0) * np.conj(gl) / v]]
        )


def level_shift(params: PhysicalParams, omega) -> complex:
    """Excited-state self-energy S / (omega - k_c + i kappa / 2)."""
    validate(params)
    den = complex(omega) - params.k_c + 0.5j * params.kappa
    scale = max(1.0, params.kappa, abs(complex(omega) - params.k_c))
    if abs(den) < 1e-14 * scale:
        raise PoleProximity(f"level shift evaluated at its pole, omega = {omega}")
    return total_coupling(params) / den


@dataclass(frozen=True)
class DressedRoots:
    """The two poles of the excited-state propagator."""

    omega_plus: complex
    omega_minus: complex


def dressed_roots(params: PhysicalParams) -> DressedRoots:
    """Dressed poles omega_pm in the rotating frame (offsets from k_c).

    Uses the principal branch of the square root. The pair is unordered
    for every downstream formula (all are symmetric in the two roots);
    for lambda -> 0 and delta_e > 0 the labels reduce to
    omega_plus = delta_e (atom-like) and omega_minus = -i kappa/2
    (cavity-like).
    """
    validate(params)
    de = _de_eff(params)
    half_k = 0.5j * params.kappa
    rad = np.sqrt(complex((0.5 * (de + half_k)) ** 2 + total_coupling(params)))
    center = 0.5 * (de - half_k)
    return DressedRoots(omega_plus=center + rad, omega_minus=center - rad)


def excited_propagator(params: PhysicalParams, omega) -> complex:
    """Resolvent matrix element G_EE(omega) of the excited state.

    (d_omega + i kappa/2) / ((d_omega - omega_plus)(d_omega - omega_minus))
    with d_omega = omega - k_c; gamma enters through the dressed roots.
    """
    roots = dressed_roots(params)
    d_omega = complex(omega) - params.k_c
    den = (d_omega - roots.omega_plus) * (d_omega - roots.omega_minus)
    scale = max(1.0, params.kappa, np.sqrt(total_coupling(params)), abs(d_omega))
    if abs(den) < 1e-14 * scale**2:
        raise PoleProximity(f"propagator evaluated at a dressed pole, omega = {omega}")
    return (d_omega + 0.5j * params.kappa) / den


def s_matrix(params: PhysicalParams, k: float) -> complex:
    """Bright-channel scattering factor s(k) = 1 - 2 pi i V(k)^2 G_EE(k).

    Unit modulus for gamma = 0; |s| < 1 when the free-space loss channel
    is open.
    """
    profile = CouplingProfile(params)
    v2 = profile.v(k) ** 2
    return 1.0 - 2j * np.pi * v2 * excited_propagator(params, k)


@dataclass(frozen=True)
class AmplitudePair:
    """Output amplitudes at one frequency: c_l keeps |LL>, c_r heralds |Phi>."""

    c_l: complex
    c_r: complex


def injected_amplitudes(params: PhysicalParams, k: float) -> AmplitudePair:
    """Monochromatic output amplitudes C_L(k), C_R(k) for an injected photon.

    Computed from the explicit rational forms, then re-derived through
    the bright/dark route (dark component passes untouched, bright picks
    up s(k)); the two must agree to 1e-10 or a NumericError flags an
    internal inconsistency.
    """
    validate(params)
    p = params
    de = _de_eff(p)
    s_tot = total_coupling(p)
    roots = dressed_roots(p)
    dk = k - p.k_c
    denom = (dk - 0.5j * p.kappa) * (dk - roots.omega_plus) * (dk - roots.omega_minus)
    scale = max(1.0, p.kappa, np.sqrt(s_tot), abs(dk))
    if abs(denom) < 1e-13 * scale**3:
        raise PoleProximity(f"amplitude denominator vanished at k = {k}")
    num_l = (dk - de) * (dk**2 + 0.25 * p.kappa**2) - dk * s_tot \
        + 0.5j * p.kappa * (p.lambda_r**2 - 2.0 * p.lambda_l**2)
    c_l = num_l / denom
    c_r = np.sqrt(2.0) * 1j * np.exp(1j * p.delta_lr) * p.kappa * p.lambda_l * p.lambda_r / denom

    # Independent route: rotate to bright/dark, scatter, rotate back.
    profile = CouplingProfile(p)
    gl, gr = profile.g_l(k), profile.g_r(k)
    v2 = profile.v(k) ** 2
    s = s_matrix(p, k)
    c_l_bd = (2.0 * abs(gl) ** 2 * s + abs(gr) ** 2) / v2
    c_r_bd = -np.sqrt(2.0) * gl * np.conj(gr) * (s - 1.0) / v2
    if abs(c_l - c_l_bd) > 1e-10 or abs(c_r - c_r_bd) > 1e-10:
        raise NumericError(
            f"bright/dark route disagrees with direct amplitudes at k={k}: "
            f"dC_L={abs(c_l - c_l_bd):.2e}, dC_R={abs(c_r - c_r_bd):.2e}")
    return AmplitudePair(c_l=c_l, c_r=c_r)


@dataclass(frozen=True)
class TransferOffsets:
    """Real perfect-transfer offsets with multiplicities.

    When the side pair moves off the real axis only the center offset
    remains; imag_side_offset then records the magnitude of the
    imaginary pair as a diagnostic.
    """

    offsets: tuple[float, ...]
    multiplicities: tuple[int, ...]
    imag_side_offset: float | None = None
    note: str = ""


def perfect_transfer_offsets(params: PhysicalParams) -> TransferOffsets:
    """Frequencies (offsets from k_c) where C_L = 0 and |C_R| = 1.

    Requires delta_e = 0, gamma = 0, lambda_r = sqrt(2) lambda_l; if the
    preconditions fail the offset list is empty and the note says why.
    The candidates are 0 and +-sqrt(4 lambda_l^2 - kappa^2/4); all three
    coincide (triple root) at lambda_l = kappa/4.
    """
    validate(params)
    p = params
    if p.delta_e != 0 or p.gamma != 0:
        return TransferOffsets((), (), note="requires delta_e = 0 and gamma = 0")
    if abs(p.lambda_r - np.sqrt(2.0) * p.lambda_l) > 1e-9 * max(p.lambda_l, p.lambda_r):
        return TransferOffsets((), (), note="requires lambda_r = sqrt(2) lambda_l")
    disc = 4.0 * p.lambda_l**2 - 0.25 * p.kappa**2
    if abs(disc) <= 1e-9 * p.kappa**2:
        return TransferOffsets((0.0,), (3,), note="triple root at lambda_l = kappa/4")
    if disc > 0:
        side = float(np.sqrt(disc))
        return TransferOffsets((-side, 0.0, side), (1, 1, 1))
    return TransferOffsets((0.0,), (1,), imag_side_offset=float(np.sqrt(-disc)),
                           note="side pair imaginary, only the center offset is real")


def pr_closed_form(lambda_l: float, lambda_r: float, kappa: float,
                   delta_e: float = 0.0) -> float:
    """Closed-form P_R for the cavity photon, plain arithmetic.

    Valid for gamma = 0. kappa = 0 is accepted here as the documented
    lossless limit 4 lambda_l^2 lambda_r^2 / S^2 (the validated record
    type requires kappa > 0, so sweeps over that limit use this helper).
    """
    s_tot = 2.0 * lambda_l**2 + lambda_r**2
    if s_tot == 0:
        raise ZeroCoupling("both couplings are zero")
    a = s_tot + 0.5 * kappa**2
    return 4.0 * lambda_l**2 * lambda_r**2 * a / (s_tot * (a**2 + delta_e**2 * kappa**2))


def cavity_photon_probs_closed(params: PhysicalParams) -> ProbabilityResult:
    """Closed-form outcome probabilities for the photon born in the cavity."""
    validate(params)
    if params.gamma > 0:
        raise GammaUnsupported(
            "closed forms hold for gamma = 0; use cavity_photon_probs_quadrature")
    p_r = pr_closed_form(params.lambda_l, params.lambda_r, params.kappa, params.delta_e)
    return ProbabilityResult(p_l=1.0 - p_r, p_r=p_r, p_loss=0.0,
                             method="closed_form", err_estimate=0.0)


def _cavity_output_amplitudes(params: PhysicalParams, dk: float) -> tuple[complex, complex]:
    """Long-time output amplitudes A_L, A_R for the cavity photon at offset dk."""
    p = params
    de = _de_eff(p)
    roots = dressed_roots(p)
    f_c = np.sqrt(p.kappa / (2.0 * np.pi)) / (dk - 0.5j * p.kappa)
    pole = (dk - roots.omega_plus) * (dk - roots.omega_minus)
    a_l = f_c * ((dk - de) * (dk + 0.5j * p.kappa) - p.lambda_r**2) / pole
    a_r = f_c * np.sqrt(2.0) * p.lambda_l * p.lambda_r * np.exp(1j * p.delta_lr) / pole
    return a_l, a_r


def cavity_photon_probs_quadrature(params: PhysicalParams) -> ProbabilityResult:
    """Cavity-photon probabilities by direct quadrature of the output spectrum.

    Agrees with the closed forms to 1e-8 when gamma = 0 and extends them
    to gamma > 0, where the deficit 1 - p_l - p_r is the free-space loss.
    """
    validate(params)
    roots = dressed_roots(params)
    points = sorted({0.0, roots.omega_plus.real, roots.omega_minus.real})
    halfwidth = 10.0 * max(params.kappa, np.sqrt(total_coupling(params)), 1e-30)

    p_l, err_l = real_line_integral(
        lambda dk: abs(_cavity_output_amplitudes(params, dk)[0]) ** 2, points, halfwidth)
    p_r, err_r = real_line_integral(
        lambda dk: abs(_cavity_output_amplitudes(params, dk)[1]) ** 2, points, halfwidth)
    return result_from_lr(p_l, p_r, "quadrature", err_l + err_r + 1e-12)


def pr_bound(params: PhysicalParams) -> tuple[float, float]:
    """Upper bound on closed-form P_R over lambda_r, and the optimizer.

    For delta_e = 0, gamma = 0 the maximum over lambda_r of the closed
    form is 2 / (1 + sqrt(1 + (kappa/2 lambda_l)^2))^2, reached at
    lambda_r* = sqrt(2) (1 + (kappa/2 lambda_l)^2)^{1/4} lambda_l. The
    bound stays below 1/2 for every kappa > 0.
    """
    validate(params)
    if params.delta_e != 0 or params.gamma != 0:
        raise ValidationError("pr_bound requires delta_e = 0 and gamma = 0")
    if params.lambda_l <= 0:
        raise ValidationError("pr_bound requires lambda_l > 0")
    u = np.sqrt(1.0 + (params.kappa / (2.0 * params.lambda_l)) ** 2)
    bound = 2.0 / (1.0 + u) ** 2
    lambda_r_star = np.sqrt(2.0) * params.lambda_l * np.sqrt(u)
    return float(bound), float(lambda_r_star)


def _tabulated_pr(params: PhysicalParams, f: spectra.SpectralFunction,
                  nrm: float) -> ProbabilityResult:
    """Packet probabilities for a tabulated spectrum, knot by knot.

    The interpolant is piecewise linear, so |f|^2 is quadratic on each
    segment; the amplitude weights |C|^2 vary on the much larger
    physical scales and are linearized between knots. Simpson's rule
    integrates the resulting cubic product exactly; adaptive quadrature
    would stall on the thousands of interpolation kinks. The error
    estimate bounds the linearization of |C|^2 by its second
    differences.
    """
    shifted = replace(params, k_c=0.0)
    xs = np.asarray(f.table_dk, dtype=float)
    amps = np.asarray(spectra.evaluate(f, shifted, xs))
    pairs = [injected_amplitudes(shifted, float(x)) for x in xs]
    w_l = np.array([abs(p.c_l) ** 2 for p in pairs])
    w_r = np.array([abs(p.c_r) ** 2 for p in pairs])

    h = np.diff(xs)
    m = np.abs(amps) ** 2
    m_mid = np.abs(0.5 * (amps[:-1] + amps[1:])) ** 2
    seg_mass = h / 6.0 * (m[:-1] + 4.0 * m_mid + m[1:])

    def simpson(w):
        w_mid = 0.5 * (w[:-1] + w[1:])
        return float(np.sum(h / 6.0 * (m[:-1] * w[:-1] + 4.0 * m_mid * w_mid
                                       + m[1:] * w[1:])))

    def lin_err(w):
        if w.size < 3:
            return 0.0
        d2 = np.abs(np.diff(w, 2))
        per_seg = np.concatenate([d2[:1], d2])
        return float(np.sum(seg_mass * per_seg) / 8.0)

    err = lin_err(w_l) + lin_err(w_r) + abs(nrm - 1.0) + 1e-12
    return result_from_lr(simpson(w_l), simpson(w_r), "quadrature", err)


def injected_pr(params: PhysicalParams, f: spectra.SpectralFunction) -> ProbabilityResult:
    """Outcome probabilities for an injected packet with spectrum f.

    P_R integrates |f(k) C_R(k)|^2 over k (and P_L likewise); only |f|
    enters, so any displacement phase is irrelevant here. The spectrum
    must be unit-normalized.
    """
    validate(params)
    nrm = spectra.norm(f, params)
    if abs(nrm - 1.0) > 1e-6:
        raise UnnormalizedSpectrum(f"spectrum norm is {nrm:.8f}, expected 1")
    if f.shape == "tabulated":
        return _tabulated_pr(params, f, nrm)

    shifted = replace(params, k_c=0.0)
    roots = dressed_roots(params)
    points = sorted({0.0, roots.omega_plus.real, roots.omega_minus.real,
                     *spectra._feature_points(f, shifted)})
    widths = [params.kappa, np.sqrt(total_coupling(params))]
    if f.kappa_in is not None:
        widths.append(f.kappa_in)
    halfwidth = 10.0 * max(widths)

    def weight(dk, which):
        pair = injected_amplitudes(shifted, dk)
        c = pair.c_l if which == "l" else pair.c_r
        return abs(spectra.evaluate(f, shifted, dk)) ** 2 * abs(c) ** 2

    p_l, err_l = real_line_integral(lambda dk: weight(dk, "l"), points, halfwidth)
    p_r, err_r = real_line_integral(lambda dk: weight(dk, "r"), points, halfwidth)
    err = err_l + err_r + abs(nrm - 1.0) + 1e-12
    return result_from_lr(p_l, p_r, "quadrature", err)
