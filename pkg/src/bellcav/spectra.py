"""Photon spectral amplitudes f(k) and the scattering-state diagnostic.

Four shapes are supported, all normalized so that the integral of |f|^2
over k equals 1:

    cavity_photon   sqrt(kappa/2pi) e^{-i delta_lr} / (dk - i kappa/2)
    lorentzian      sqrt(kappa_in/2pi) / (dk - peak_offset + i kappa_in/2)
    gaussian        (sqrt(2)/pi^{1/4} sqrt(kappa_in)) exp(-2 (dk-peak_offset)^2 / kappa_in^2)
    tabulated       linear interpolation of a sampled amplitude, zero outside

where dk = k - k_c. The cavity photon is the photon already inside the
cavity (its spectrum is the cavity line, pole in the upper half plane);
the Lorentzian packet has its pole in the lower half plane and satisfies
the scattering-state condition tested by ``scattering_residual``.

The displacement parameter tau shifts an injected packet away from the
mirror at t = 0. Analytic probabilities depend only on |f|, so tau is
never applied on the analytic path; the time-domain oracle consumes it
as an initial phase exp(i dk tau) on each mode.
"""

from dataclasses import dataclass, replace

import numpy as np

from ._integrate import complex_quad, quad_checked, real_line_integral
from .errors import EmptyTable, NonPositiveKappa, UnnormalizedSpectrum
from .model import PhysicalParams, total_coupling

_SHAPES = ("cavity_photon", "lorentzian", "gaussian", "tabulated")


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    """A unit-normalized photon spectral amplitude.

    Build instances through the classmethods; they validate shape
    parameters and renormalize tabulated data.
    """

    shape: str
    kappa_in: float | None = None
    peak_offset: float = 0.0
    tau: float = 0.0
    table_dk: np.ndarray | None = None
    table_amp: np.ndarray | None = None

    @classmethod
    def cavity_photon(cls) -> "SpectralFunction":
        """The photon initially inside the cavity. Peak fixed at k_c, tau = 0."""
        return cls(shape="cavity_photon")

    @classmethod
    def lorentzian(cls, kappa_in: float, peak_offset: float = 0.0,
                   tau: float = 0.0) -> "SpectralFunction":
        if kappa_in <= 0:
            raise NonPositiveKappa(f"kappa_in must be > 0, got {kappa_in}")
        return cls(shape="lorentzian", kappa_in=kappa_in, peak_offset=peak_offset, tau=tau)

    @classmethod
    def gaussian(cls, kappa_in: float, peak_offset: float = 0.0,
                 tau: float = 0.0) -> "SpectralFunction":
        if kappa_in <= 0:
            raise NonPositiveKappa(f"kappa_in must be > 0, got {kappa_in}")
        return cls(shape="gaussian", kappa_in=kappa_in, peak_offset=peak_offset, tau=tau)

    @classmethod
    def tabulated(cls, dk, amplitude, tau: float = 0.0) -> "SpectralFunction":
        """Sampled amplitude on an increasing dk grid, renormalized on load.

        The interpolant's norm must already be within 1% of 1; larger
        deviations raise UnnormalizedSpectrum instead of being hidden.
        """
        dk = np.asarray(dk, dtype=float)
        amp = np.asarray(amplitude, dtype=complex)
        if dk.size == 0 or amp.size == 0:
            raise EmptyTable("tabulated spectrum has no rows")
        if dk.shape != amp.shape or dk.ndim != 1:
            raise UnnormalizedSpectrum(
                f"grid and amplitude shapes differ: {dk.shape} vs {amp.shape}")
        if dk.size > 1 and np.any(np.diff(dk) <= 0):
            raise UnnormalizedSpectrum("tabulated dk grid must be strictly increasing")
        nrm = _table_norm(dk, amp)
        if abs(nrm - 1.0) > 0.01:
            raise UnnormalizedSpectrum(
                f"tabulated spectrum norm {nrm:.6f} deviates from 1 by more than 1%")
        if nrm > 0:
            amp = amp / np.sqrt(nrm)
        return cls(shape="tabulated", tau=tau, table_dk=dk, table_amp=amp)

    @classmethod
    def from_csv(cls, path, tau: float = 0.0) -> "SpectralFunction":
        """Load a tabulated spectrum from CSV: dk, re [, im]; '#' comments."""
        data = np.atleast_2d(np.loadtxt(path, delimiter=",", comments="#", ndmin=2))
        if data.size == 0:
            raise EmptyTable(f"no data rows in {path}")
        if data.shape[1] == 2:
            amp = data[:, 1].astype(complex)
        elif data.shape[1] == 3:
            amp = data[:, 1] + 1j * data[:, 2]
        else:
            raise UnnormalizedSpectrum(
                f"{path}: expected 2 or 3 columns, got {data.shape[1]}")
        return cls.tabulated(data[:, 0], amp, tau=tau)

    def with_kappa_in(self, kappa_in: float) -> "SpectralFunction":
        """Copy with a new width; only meaningful for analytic packet shapes."""
        if self.shape not in ("lorentzian", "gaussian"):
            raise NonPositiveKappa(f"{self.shape} spectrum has no kappa_in")
        if kappa_in <= 0:
            raise NonPositiveKappa(f"kappa_in must be > 0, got {kappa_in}")
        return replace(self, kappa_in=kappa_in)


def _table_norm(dk: np.ndarray, amp: np.ndarray) -> float:
    """Exact integral of |linear interpolant|^2 (piecewise quadratic)."""
    if dk.size < 2:
        return 0.0
    h = np.diff(dk)
    a = amp[:-1]
    b = amp[1:]
    seg = (np.abs(a) ** 2 + np.abs(b) ** 2 + (a * np.conj(b)).real) / 3.0
    return float(np.sum(h * seg))


def evaluate(f: SpectralFunction, params: PhysicalParams, k):
    """Spectral amplitude f(k); k may be a scalar or an array.

    The displacement phase tau is never applied here (see module
    docstring); analytic integrals depend on |f| only.
    """
    dk = np.asarray(k, dtype=float) - params.k_c
    if f.shape == "cavity_photon":
        kap = params.kappa
        out = np.sqrt(kap / (2 * np.pi)) * np.exp(-1j * params.delta_lr) / (dk - 0.5j * kap)
    elif f.shape == "lorentzian":
        out = np.sqrt(f.kappa_in / (2 * np.pi)) / (dk - f.peak_offset + 0.5j * f.kappa_in)
    elif f.shape == "gaussian":
        amp = np.sqrt(2.0) / (np.pi ** 0.25 * np.sqrt(f.kappa_in))
        out = amp * np.exp(-2.0 * (dk - f.peak_offset) ** 2 / f.kappa_in ** 2) + 0j
    elif f.shape == "tabulated":
        if f.table_dk is None or f.table_dk.size == 0:
            raise EmptyTable("tabulated spectrum has no rows")
        out = (np.interp(dk, f.table_dk, f.table_amp.real, left=0.0, right=0.0)
               + 1j * np.interp(dk, f.table_dk, f.table_amp.imag, left=0.0, right=0.0))
    else:
        raise EmptyTable(f"unknown spectral shape {f.shape!r}")
    if np.isscalar(k):
        return complex(out)
    return out


def _feature_points(f: SpectralFunction, params: PhysicalParams) -> list[float]:
    if f.shape == "cavity_photon":
        return [0.0]
    if f.shape == "tabulated":
        return [float(f.table_dk[0]), float(f.table_dk[-1])]
    # mark the packet support, not just its center: a packet much
    # narrower than the core must not sit inside a single panel
    return [f.peak_offset - 5.0 * f.kappa_in, f.peak_offset,
            f.peak_offset + 5.0 * f.kappa_in]


def _core_halfwidth(f: SpectralFunction, params: PhysicalParams) -> float:
    """Truncation rule for the quadrature core around the features."""
    widths = [10.0 * params.kappa, 4.0 * np.sqrt(total_coupling(params))]
    if f.kappa_in is not None:
        widths.append(10.0 * f.kappa_in)
    return max(widths)


def norm(f: SpectralFunction, params: PhysicalParams) -> float:
    """Integral of |f(k)|^2 over all k; approximately 1 for built-in shapes.

    Tabulated spectra integrate their interpolant exactly (piecewise
    quadratic modulus); analytic shapes use adaptive quadrature with the
    tails carried out to infinity.
    """
    if f.shape == "tabulated":
        if f.table_dk is None or f.table_dk.size == 0:
            raise EmptyTable("tabulated spectrum has no rows")
        return _table_norm(f.table_dk, f.table_amp)

    # Integrate in offset coordinates (peak positions are offsets).
    shifted = replace(params, k_c=0.0)
    value, _ = real_line_integral(
        lambda dk: abs(evaluate(f, shifted, dk)) ** 2,
        _feature_points(f, shifted),
        _core_halfwidth(f, shifted),
    )
    return value


def scattering_residual(f: SpectralFunction, params: PhysicalParams,
                        z_samples) -> float:
    """Check the half-plane identity behind the scattering-state condition.

    A packet that has not yet reached the mirror at t = 0 must satisfy,
    for real z and vanishing eps > 0,

        integral F(k') / (z + i eps - k') dk'  =  -2 pi i F(z),

    where F(k) = sqrt(2) g_L(k) f(k) is the packet amplitude carried by
    the bright channel (the combination actually coupled to the excited
    state). The identity holds when F is analytic in the upper half
    plane, which the displaced Lorentzian satisfies; the cavity-photon
    line (pole in the upper half plane) and an undisplaced Gaussian
    violate it at order one.

    Returns the maximum over z_samples of |LHS - RHS| / max(|RHS|, tiny).
    The principal-value-shaped part of the LHS is handled by subtracting
    F(z) on a window split at k' = z and integrating the pole factor
    exactly; eps is fixed at 1e-6 kappa.
    """
    from .analytic import CouplingProfile

    profile = CouplingProfile(params)
    eps = 1e-6 * params.kappa
    shifted = replace(params, k_c=0.0)

    def F(dk):
        return np.sqrt(2.0) * profile.g_l(dk + params.k_c) * evaluate(f, shifted, dk)

    features = sorted(set(_feature_points(f, shifted) + [0.0]))
    halfwidth = _core_halfwidth(f, shifted)
    big = max(abs(features[0]), abs(features[-1])) + 5.0 * halfwidth

    worst = 0.0
    for z in z_samples:
        z = float(z) - params.k_c
        fz = F(z)
        rhs = -2j * np.pi * fz
        d = max(params.kappa, f.kappa_in or params.kappa)
        # window around the pole: subtracted integrand plus the exact
        # integral of the pole factor itself; (F - fz) removes the pole,
        # so eps may be dropped here (keeping it would plant a width-eps
        # spike the quadrature cannot resolve)
        window, _ = complex_quad(lambda kp: (F(kp) - fz) / (z - kp),
                                 z - d, z + d, points=[z])
        pole_part = fz * (np.log(d + 1j * eps) - np.log(-d + 1j * eps))
        # outer pieces: the full integrand decays at least like 1/k^3
        lo = min(-big, z - d)
        hi = max(big, z + d)
        outer = 0.0 + 0.0j
        for a, b in ((z + d, hi), (lo, z - d)):
            if b > a:
                pts = [p for p in features if a < p < b]
                piece, _ = complex_quad(lambda kp: F(kp) / (z + 1j * eps - kp),
                                        a, b, points=pts)
                outer += piece
        for a, b in ((hi, np.inf), (-np.inf, lo)):
            tail_re, _ = quad_checked(lambda kp: (F(kp) / (z + 1j * eps - kp)).real,
                                      a, b, limit=200)
            tail_im, _ = quad_checked(lambda kp: (F(kp) / (z + 1j * eps - kp)).imag,
                                      a, b, limit=200)
            outer += tail_re + 1j * tail_im
        lhs = window + pole_part + outer
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    return worst
