"""Brute-force time-domain verifier on a discretized photon continuum.

Independent of the resolvent machinery: each polarization continuum is
discretized into n_modes uniformly spaced modes on [k_c - W, k_c + W],
coupled to the collective excited state with sqrt(2) g_L(k_j) sqrt(dk)
on the |LL> channel and g_R(k_j) sqrt(dk) on the Bell channel, and the
Schrodinger equation is integrated with fixed-step RK4. Asymptotic
channel populations give P_L and P_R with a grid-refinement error
estimate. Fixed-step integration keeps runs bit-reproducible for a
given (params, spectrum, grid).
"""

from dataclasses import dataclass, replace

import numpy as np

from . import spectra
from .analytic import CouplingProfile, dressed_roots
from .errors import (GridTooCoarse, NormDeficit, NormDriftExceeded,
                     NotConverged, ValidationError)
from .kernels import rk4_segment
from .model import (PhysicalParams, ProbabilityResult, total_coupling,
                    validate)
from .tableio import write_csv

_NORM_SAMPLE_STEPS = 100


@dataclass(frozen=True)
class SimGrid:
    """Discretization and integration controls for one oracle run.

    Attributes
    ----------
    n_modes : int
        Modes per channel, at least 200.
    bandwidth : float
        Half-width W of the k window around k_c.
    t_final : float
        Integration horizon.
    dt : float
        Fixed RK4 step, at most 0.1/W.
    tau : float
        Packet displacement: injected packets start a distance tau
        (in time units) from the mirror, encoded as a k-space phase.
    """

    n_modes: int
    bandwidth: float
    t_final: float
    dt: float
    tau: float = 0.0


def grid_spacing(grid: SimGrid) -> float:
    """Mode spacing delta_k = 2W/(n_modes - 1)."""
    return 2.0 * grid.bandwidth / (grid.n_modes - 1)


def validate_grid(grid: SimGrid) -> SimGrid:
    """Check the guards that do not need physical parameters."""
    if grid.bandwidth <= 0 or grid.t_final <= 0 or grid.dt <= 0:
        raise ValidationError("bandwidth, t_final and dt must be positive")
    if grid.tau < 0:
        raise ValidationError("tau must be nonnegative")
    if grid.n_modes < 200:
        raise GridTooCoarse(
            f"n_modes guard: need at least 200 modes per channel, got {grid.n_modes}")
    recurrence = 2.0 * np.pi / grid_spacing(grid)
    if grid.t_final >= 0.8 * recurrence:
        raise GridTooCoarse(
            f"recurrence guard: t_final = {grid.t_final:g} must stay below "
            f"0.8 * 2pi/delta_k = {0.8 * recurrence:g}; raise n_modes or shorten the run")
    if grid.dt > 0.1 / grid.bandwidth:
        raise GridTooCoarse(
            f"dt guard: dt = {grid.dt:g} exceeds 0.1/bandwidth = {0.1 / grid.bandwidth:g}")
    return grid


def _relaxation_rate(params: PhysicalParams) -> float:
    # kappa in the strong-coupling regime, S/kappa in the weak one; the
    # min interpolates the crossover.
    return min(params.kappa, total_coupling(params) / params.kappa)


def _check_injected_guards(f: spectra.SpectralFunction, grid: SimGrid,
                           params: PhysicalParams) -> None:
    if f.shape == "cavity_photon":
        if grid.tau != 0:
            raise ValidationError("cavity-photon runs use tau = 0")
        return
    if f.kappa_in is not None and grid.tau < 5.0 / f.kappa_in:
        raise GridTooCoarse(
            f"tau guard: injected packets need tau >= 5/kappa_in = "
            f"{5.0 / f.kappa_in:g}, got {grid.tau:g}")
    floor = grid.tau + 10.0 / _relaxation_rate(params)
    if grid.t_final < floor:
        raise GridTooCoarse(
            f"relaxation guard: t_final = {grid.t_final:g} must reach "
            f"tau + 10/relaxation_rate = {floor:g}")


@dataclass(frozen=True)
class DiscretizedModel:
    """Star-graph Hamiltonian data for one (params, grid) pair."""

    params: PhysicalParams
    grid: SimGrid
    offsets: np.ndarray
    delta_k: float
    diag: np.ndarray
    coup: np.ndarray
    eps_e: complex

    @property
    def dimension(self) -> int:
        return 2 * self.grid.n_modes + 1


def build(params: PhysicalParams, grid: SimGrid) -> DiscretizedModel:
    """Discretize both continua and assemble the coupling vectors.

    diag holds the mode offsets dk_j twice (L block then R block); coup
    holds sqrt(2) g_L(k_j) sqrt(dk) followed by g_R(k_j) sqrt(dk).
    """
    validate(params)
    validate_grid(grid)
    offsets = np.linspace(-grid.bandwidth, grid.bandwidth, grid.n_modes)
    delta_k = grid_spacing(grid)
    profile = CouplingProfile(params)
    ks = params.k_c + offsets
    root_dk = np.sqrt(delta_k)
    coup = np.concatenate([np.sqrt(2.0) * profile.g_l(ks) * root_dk,
                           profile.g_r(ks) * root_dk]).astype(np.complex128)
    diag = np.concatenate([offsets, offsets]).astype(np.float64)
    eps_e = complex(params.delta_e - 0.5j * params.gamma)
    return DiscretizedModel(params=params, grid=grid, offsets=offsets,
                            delta_k=delta_k, diag=diag, coup=coup, eps_e=eps_e)


@dataclass(frozen=True)
class OracleState:
    """Amplitudes on |E> and on the two discretized channels."""

    e_amp: complex
    l_amps: np.ndarray
    r_amps: np.ndarray

    def norm(self) -> float:
        return float(np.sqrt(abs(self.e_amp) ** 2
                             + np.sum(np.abs(self.l_amps) ** 2)
                             + np.sum(np.abs(self.r_amps) ** 2)))

    def populations(self) -> tuple[float, float, float]:
        """(excited, p_l, p_r) populations."""
        return (abs(self.e_amp) ** 2,
                float(np.sum(np.abs(self.l_amps) ** 2)),
                float(np.sum(np.abs(self.r_amps) ** 2)))


def initial_state(f: spectra.SpectralFunction, grid: SimGrid,
                  params: PhysicalParams, channel: str = "l") -> OracleState:
    """Sample the packet onto the grid: amp_j = f(k_j) e^{i k_j tau} sqrt(dk).

    The phase displaces the packet so it reaches the mirror around
    t = tau. Amplitudes are renormalized to unit norm; a pre-
    renormalization squared norm below 0.99 means the bandwidth clips
    the packet and raises NormDeficit. channel selects which ground-
    state continuum carries the incoming photon.
    """
    validate(params)
    validate_grid(grid)
    _check_injected_guards(f, grid, params)
    if channel not in ("l", "r"):
        raise ValidationError("channel must be 'l' or 'r'")
    offsets = np.linspace(-grid.bandwidth, grid.bandwidth, grid.n_modes)
    ks = params.k_c + offsets
    amps = np.asarray(spectra.evaluate(f, params, ks), dtype=np.complex128)
    amps = amps * np.exp(1j * ks * grid.tau) * np.sqrt(grid_spacing(grid))
    mass = float(np.sum(np.abs(amps) ** 2))
    if mass < 0.99:
        raise NormDeficit(
            f"pre-renormalization norm {mass:.4f} < 0.99; increase bandwidth")
    amps /= np.sqrt(mass)
    empty = np.zeros_like(amps)
    if channel == "l":
        return OracleState(e_amp=0j, l_amps=amps, r_amps=empty)
    return OracleState(e_amp=0j, l_amps=empty, r_amps=amps)


def evolve(model: DiscretizedModel, state: OracleState,
           grid: SimGrid | None = None, trace_path=None) -> OracleState:
    """Integrate i d(state)/dt = H state to t_final and return the result.

    The norm is sampled every 100 steps: for gamma = 0 a drift beyond
    1e-6 raises NormDriftExceeded; for gamma > 0 the norm must be
    nonincreasing. trace_path, if given, receives a CSV of
    (t, excited population, p_l, p_r, norm) at every sample.
    """
    grid = model.grid if grid is None else grid
    validate_grid(grid)
    n = grid.n_modes
    if state.l_amps.shape[0] != n or state.r_amps.shape[0] != n:
        raise ValidationError("state does not match the grid")
    psi = np.empty(2 * n + 1, dtype=np.complex128)
    psi[0] = state.e_amp
    psi[1:n + 1] = state.l_amps
    psi[n + 1:] = state.r_amps

    n_steps_total = int(round(grid.t_final / grid.dt))
    lossless = model.params.gamma == 0
    prev_norm = float(np.sqrt(np.sum(np.abs(psi) ** 2)))
    trace_rows = [(0.0, abs(psi[0]) ** 2,
                   float(np.sum(np.abs(psi[1:n + 1]) ** 2)),
                   float(np.sum(np.abs(psi[n + 1:]) ** 2)), prev_norm)]
    done = 0
    while done < n_steps_total:
        todo = min(_NORM_SAMPLE_STEPS, n_steps_total - done)
        rk4_segment(psi, model.diag, model.coup, model.eps_e, grid.dt, todo)
        done += todo
        nrm = float(np.sqrt(np.sum(np.abs(psi) ** 2)))
        t = done * grid.dt
        if lossless and abs(nrm - 1.0) > 1e-6:
            raise NormDriftExceeded(
                f"norm drifted to {nrm:.8f} at t = {t:g} in a gamma = 0 run")
        if not lossless and nrm > prev_norm + 1e-9:
            raise NormDriftExceeded(
                f"norm increased to {nrm:.8f} at t = {t:g} despite gamma > 0")
        prev_norm = nrm
        if trace_path is not None:
            trace_rows.append((t, abs(psi[0]) ** 2,
                               float(np.sum(np.abs(psi[1:n + 1]) ** 2)),
                               float(np.sum(np.abs(psi[n + 1:]) ** 2)), nrm))
    if trace_path is not None:
        p = model.params
        meta = {"lambda_l": p.lambda_l, "lambda_r": p.lambda_r, "kappa": p.kappa,
                "delta_e": p.delta_e, "gamma": p.gamma, "delta_lr": p.delta_lr,
                "k_c": p.k_c, "n_modes": grid.n_modes, "bandwidth": grid.bandwidth,
                "t_final": grid.t_final, "dt": grid.dt, "tau": grid.tau}
        write_csv(trace_path, meta, ["t", "excited_pop", "p_l", "p_r", "norm"],
                  trace_rows)
    return OracleState(e_amp=complex(psi[0]), l_amps=psi[1:n + 1].copy(),
                       r_amps=psi[n + 1:].copy())


def _single_run(params, f, grid, channel, trace_path=None):
    model = build(params, grid)
    state = initial_state(f, grid, params, channel=channel)
    final = evolve(model, state, trace_path=trace_path)
    excited, p_l, p_r = final.populations()
    if excited >= 1e-4:
        raise NotConverged(
            f"excited population {excited:.2e} at t_final = {grid.t_final:g}; "
            "extend the run")
    return excited, p_l, p_r


def refinement_pair(params: PhysicalParams, f: spectra.SpectralFunction,
                    grid: SimGrid, channel: str = "l"):
    """Run at the given grid and at halved delta_k; return both results.

    The refined grid doubles the mode count (2 n - 1 modes, same
    bandwidth), halving delta_k exactly. Both results carry only the
    residual-excitation part of the error estimate.
    """
    base = simulate_experiment(params, f, grid, channel=channel, refine_check=False)
    fine_grid = replace(grid, n_modes=2 * grid.n_modes - 1)
    fine = simulate_experiment(params, f, fine_grid, channel=channel, refine_check=False)
    return base, fine


def simulate_experiment(params: PhysicalParams, f: spectra.SpectralFunction,
                        grid: SimGrid, channel: str = "l",
                        refine_check: bool = True,
                        trace_path=None) -> ProbabilityResult:
    """End-to-end oracle run: build, sample the packet, evolve, read off.

    p_l and p_r are the asymptotic channel populations and
    p_loss = 1 - p_l - p_r - (residual excited population). The run
    flags NotConverged unless the excited population has decayed below
    1e-4. With refine_check the run is repeated at halved delta_k and
    the p_r difference enters err_estimate (Richardson-style check that
    the discretization is converged).
    """
    excited, p_l, p_r = _single_run(params, f, grid, channel, trace_path=trace_path)
    err = excited
    if refine_check:
        fine_grid = replace(grid, n_modes=2 * grid.n_modes - 1)
        _, _, p_r_fine = _single_run(params, f, fine_grid, channel)
        err = err + abs(p_r_fine - p_r)
    p_loss = 1.0 - p_l - p_r - excited
    return ProbabilityResult(p_l=p_l, p_r=p_r, p_loss=p_loss, method="oracle",
                             err_estimate=max(err, 1e-9))


def make_grid(params: PhysicalParams, f: spectra.SpectralFunction,
              n_modes: int = 4001, bandwidth: float | None = None,
              t_final: float | None = None, dt: float | None = None,
              tau: float | None = None) -> SimGrid:
    """Choose grid controls that satisfy every guard for this scenario.

    Bandwidth defaults to 40 kappa; tau to 6/kappa_in (Gaussian) or
    8/kappa_in (Lorentzian, heavier tails); t_final allows the packet
    to arrive, pass, and the excited state to decay by a factor e^{-16}
    at its slowest pole rate. Tabulated spectra need an explicit tau.
    """
    validate(params)
    w = 40.0 * params.kappa if bandwidth is None else bandwidth
    roots = dressed_roots(params)
    e_rate = 2.0 * min(abs(roots.omega_plus.imag), abs(roots.omega_minus.imag))
    e_rate = max(e_rate, 1e-6 * params.kappa)

    if f.shape == "cavity_photon":
        t_packet = 0.0
        tau_default = 0.0
    elif f.kappa_in is not None:
        t_packet = (6.0 if f.shape == "gaussian" else 8.0) / f.kappa_in
        tau_default = t_packet
    else:
        if tau is None:
            raise ValidationError("make_grid needs an explicit tau for tabulated spectra")
        t_packet = tau
        tau_default = tau
    tau = tau_default if tau is None else tau

    if t_final is None:
        t_final = tau + t_packet + 16.0 / e_rate
        if f.shape != "cavity_photon":
            t_final = max(t_final, tau + 10.5 / _relaxation_rate(params))
    if dt is None:
        dt = 0.08 / w
    grid = SimGrid(n_modes=n_modes, bandwidth=w, t_final=t_final, dt=dt, tau=tau)
    validate_grid(grid)
    return grid
