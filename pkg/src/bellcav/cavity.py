"""Mirror models, cavity mode functions, and quasi-mode extraction.

The cavity occupies 0 < x <= l, closed by a hard wall at x = 0 and a
partially transmitting element at x = l. For each wavenumber k > 0 the
spatial mode is

    U_k(x) = I(k) sin(kx)                for 0 < x <= l,
    U_k(x) = exp(-ikx) + R(k) exp(ikx)   for x > l,

with interior weight I(k) = -2it / (1 + r exp(2ikl)) and exterior
reflection R(k) = (-r - t + r exp(-2ikl)) / (1 + r exp(2ikl)). A
lossless element keeps |R(k)| = 1; the interior weight peaks where the
round-trip factor 1 + r exp(2ikl) comes closest to zero, and the complex
roots k_n - i kappa_n / 2 of that factor are the quasi-modes.

Two mirror models are provided. ``thin_dielectric`` is the delta-slab
element (dielectric profile 1 + zeta * delta(x - l)) with

    r(k) = i beta / (1 - i beta),  t(k) = 1 / (1 - i beta),  beta = zeta k / 2,

which satisfies |R(k)| = 1 identically. ``constant`` takes fixed (r, t)
and is validated against the same losslessness requirement.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidMirror, NoConvergence, PoleProximity

_POLE_TOL = 1e-14
_LOSSLESS_TOL = 1e-9


@dataclass(frozen=True)
class MirrorSpec:
    """Mirror model for the transmitting element at x = l.

    model is "thin_dielectric" (uses zeta) or "constant" (uses r, t).
    l is the cavity length, > 0.
    """

    model: str
    l: float
    zeta: float = 0.0
    r: complex = 0.0
    t: complex = 0.0

    @classmethod
    def thin_dielectric(cls, zeta: float, l: float) -> "MirrorSpec":
        if zeta < 0:
            raise InvalidMirror(f"zeta must be >= 0, got {zeta}")
        if l <= 0:
            raise InvalidMirror(f"cavity length must be > 0, got {l}")
        return cls(model="thin_dielectric", l=l, zeta=zeta)

    @classmethod
    def constant(cls, r: complex, t: complex, l: float) -> "MirrorSpec":
        if l <= 0:
            raise InvalidMirror(f"cavity length must be > 0, got {l}")
        m = cls(model="constant", l=l, r=complex(r), t=complex(t))
        _check_lossless(m)
        return m


def _coeffs(m: MirrorSpec, k) -> tuple[complex, complex]:
    """Mirror (r, t) at wavenumber k; accepts complex k for root finding."""
    if m.model == "thin_dielectric":
        beta = 0.5 * m.zeta * k
        if beta == 0:
            return 0.0 + 0.0j, 1.0 + 0.0j
        # r written as -1/(1 + i/beta) to stay stable for large beta
        return -1.0 / (1.0 + 1j / beta), 1.0 / (1.0 - 1j * beta)
    if m.model == "constant":
        return m.r, m.t
    raise InvalidMirror(f"unknown mirror model {m.model!r}")


def _r_derivative(m: MirrorSpec, k) -> complex:
    """d r / dk, used by the Newton refinement of quasi-mode roots."""
    if m.model == "thin_dielectric":
        beta = 0.5 * m.zeta * k
        return 1j * (0.5 * m.zeta) / (1.0 - 1j * beta) ** 2
    return 0.0 + 0.0j


def _check_lossless(m: MirrorSpec) -> None:
    """Sample |R(k)| over a few free spectral ranges; reject lossy mirrors."""
    ks = (0.4321 + 0.7131 * np.arange(20)) * np.pi / m.l
    for k in ks:
        denom = 1.0 + _coeffs(m, k)[0] * np.exp(2j * k * m.l)
        if abs(denom) < 1e-6:
            continue  # sampled too close to a resonance, skip
        if abs(abs(exterior_reflection(m, k)) - 1.0) > _LOSSLESS_TOL:
            raise InvalidMirror(
                f"constant mirror (r={m.r}, t={m.t}) is lossy: |R({k:.4g})| = "
                f"{abs(exterior_reflection(m, k)):.6f}"
            )


def mirror_coeffs(m: MirrorSpec, k: float) -> tuple[complex, complex]:
    """Reflection and transmission coefficients (r, t) at wavenumber k > 0."""
    return _coeffs(m, k)


def _round_trip(m: MirrorSpec, k) -> complex:
    return 1.0 + _coeffs(m, k)[0] * np.exp(2j * k * m.l)


def interior_coeff(m: MirrorSpec, k: float) -> complex:
    """Interior mode weight I(k) = -2it / (1 + r exp(2ikl))."""
    r, t = _coeffs(m, k)
    denom = 1.0 + r * np.exp(2j * k * m.l)
    if abs(denom) < _POLE_TOL:
        raise PoleProximity(f"1 + r exp(2ikl) = {denom} at k = {k}")
    return -2j * t / denom


def exterior_reflection(m: MirrorSpec, k: float) -> complex:
    """Exterior reflection R(k); |R| = 1 for a lossless element."""
    r, t = _coeffs(m, k)
    denom = 1.0 + r * np.exp(2j * k * m.l)
    if abs(denom) < _POLE_TOL:
        raise PoleProximity(f"1 + r exp(2ikl) = {denom} at k = {k}")
    return (-r - t + r * np.exp(-2j * k * m.l)) / denom


def mode_function(m: MirrorSpec, k: float, x: float) -> complex:
    """Spatial mode U_k(x), piecewise across the mirror at x = l."""
    if x <= 0:
        raise ValueError(f"x must be > 0, got {x}")
    if x <= m.l:
        return interior_coeff(m, k) * np.sin(k * x)
    return np.exp(-1j * k * x) + exterior_reflection(m, k) * np.exp(1j * k * x)


@dataclass(frozen=True)
class QuasiMode:
    """One cavity resonance: index n, frequency k_n, width kappa_n > 0."""

    n: int
    k_n: float
    kappa_n: float


def _finish_modes(modes: list[QuasiMode]) -> list[QuasiMode]:
    for mode in modes:
        if mode.kappa_n <= 0:
            raise InvalidMirror(
                f"non-decaying quasi-mode n={mode.n} (kappa_n={mode.kappa_n}); |r| >= 1?"
            )
        if mode.k_n <= 0:
            raise NoConvergence(f"quasi-mode n={mode.n} landed at k_n={mode.k_n} <= 0")
    for a, b in zip(modes, modes[1:]):
        if b.k_n <= a.k_n:
            raise NoConvergence(
                f"quasi-mode frequencies not increasing: k_{a.n}={a.k_n}, k_{b.n}={b.k_n}"
            )
    return modes


def quasi_modes_approx(m: MirrorSpec, n_lo: int, n_hi: int) -> list[QuasiMode]:
    """Quasi-modes from the slowly-varying-mirror approximation.

    Solves k_n = [(2n+1) pi - arg r(k_n)] / (2l) by fixed-point iteration
    and sets kappa_n = -ln|r(k_n)| / l. Valid when r varies little over
    one free spectral range.
    """
    modes = []
    for n in range(n_lo, n_hi + 1):
        k = (2 * n + 1) * np.pi / (2 * m.l)
        for _ in range(100):
            k_next = ((2 * n + 1) * np.pi - np.angle(_coeffs(m, k)[0])) / (2 * m.l)
            if abs(k_next - k) <= 1e-12 * max(1.0, abs(k_next)):
                k = k_next
                break
            k = k_next
        else:
            raise NoConvergence(f"fixed point for quasi-mode n={n} did not settle in 100 steps")
        r_mag = abs(_coeffs(m, k)[0])
        if r_mag <= 0:
            raise InvalidMirror(f"r({k}) = 0, no resonance for n={n}")
        modes.append(QuasiMode(n=n, k_n=k, kappa_n=-np.log(r_mag) / m.l))
    return _finish_modes(modes)


def quasi_modes_exact(m: MirrorSpec, n_lo: int, n_hi: int) -> list[QuasiMode]:
    """Quasi-modes as exact complex roots of 1 + r(k) exp(2ikl) = 0.

    Runs a damped Newton iteration on the round-trip factor, seeded from
    quasi_modes_approx. The root k_n - i kappa_n / 2 gives the resonance
    frequency and width.
    """
    seeds = quasi_modes_approx(m, n_lo, n_hi)
    modes = []
    for seed in seeds:
        z = seed.k_n - 0.5j * seed.kappa_n
        h = _round_trip(m, z)
        converged = False
        for _ in range(100):
            if abs(h) < 1e-13:
                converged = True
                break
            r = _coeffs(m, z)[0]
            dh = (_r_derivative(m, z) + 2j * m.l * r) * np.exp(2j * z * m.l)
            if dh == 0:
                raise NoConvergence(f"Newton derivative vanished at z={z}")
            step = -h / dh
            # Damp: halve the step until the residual actually drops.
            for _ in range(40):
                h_new = _round_trip(m, z + step)
                if abs(h_new) < abs(h):
                    break
                step *= 0.5
            else:
                raise NoConvergence(f"Newton stalled at z={z}, |h|={abs(h)}")
            z = z + step
            h = h_new
            if abs(h) < 1e-13 and abs(step) <= 1e-12 * max(1.0, abs(z)):
                converged = True
                break
        if not converged and abs(h) >= 1e-12:
            raise NoConvergence(f"root for n={seed.n} stuck at |residual|={abs(h)}")
        modes.append(QuasiMode(n=seed.n, k_n=z.real, kappa_n=-2.0 * z.imag))
    return _finish_modes(modes)


def quasi_mode_residual(m: MirrorSpec, mode: QuasiMode) -> float:
    """|1 + r exp(2ikl)| at the mode's complex root; ~0 for exact roots."""
    z = mode.k_n - 0.5j * mode.kappa_n
    return abs(_round_trip(m, z))
