#!/usr/bin/env python
"""Benchmark the compiled RK4 kernel against the numpy fallback.

Assembles the discretized star-graph model for the resonant
cavity-photon landmark scenario, advances the same initial state with
both kernels, and reports wall time, steps per second, and the speedup.
Run from the repository root:

    python benchmarks/bench_evolve.py
    python benchmarks/bench_evolve.py --n-modes 4001 --steps 4000
"""

import argparse
import sys
import time

import numpy as np

from bellcav import _evolve_py
from bellcav.model import PhysicalParams
from bellcav.oracle import build, initial_state, make_grid
from bellcav.spectra import SpectralFunction

try:
    from bellcav import _evolve
except ImportError:
    _evolve = None


def scenario(n_modes):
    """Discretized model and packed state vector for the 3/7 landmark."""
    params = PhysicalParams(lambda_l=1.0, lambda_r=1.0, kappa=np.sqrt(2.0) / 3.0)
    f = SpectralFunction.cavity_photon()
    grid = make_grid(params, f, n_modes=n_modes)
    model = build(params, grid)
    state = initial_state(f, grid, params)
    psi = np.empty(model.dimension, dtype=np.complex128)
    psi[0] = state.e_amp
    psi[1:n_modes + 1] = state.l_amps
    psi[n_modes + 1:] = state.r_amps
    return model, psi, grid.dt


def time_kernel(kernel, model, psi0, dt, steps, repeats):
    """Median wall time over repeats and the final state of the last run."""
    times = []
    psi = None
    for _ in range(repeats):
        psi = psi0.copy()
        t0 = time.perf_counter()
        kernel.rk4_segment(psi, model.diag, model.coup, model.eps_e, dt, steps)
        times.append(time.perf_counter() - t0)
    return float(np.median(times)), psi


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-modes", type=int, default=2001,
                        help="modes per channel (state dimension 2n+1)")
    parser.add_argument("--steps", type=int, default=2000,
                        help="RK4 steps per timed run")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timed repetitions; the median is reported")
    args = parser.parse_args(argv)

    try:
        model, psi0, dt = scenario(args.n_modes)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"state dimension {model.dimension}, dt = {dt:.3e}, "
          f"{args.steps} steps, median of {args.repeats}")

    backends = [("numpy", _evolve_py)]
    if _evolve is not None:
        backends.insert(0, ("cython", _evolve))
    else:
        print("compiled extension not available; timing the fallback only")

    results = {}
    for name, kernel in backends:
        # untimed warm-up to absorb allocator and import effects
        time_kernel(kernel, model, psi0, dt, min(args.steps, 50), 1)
        seconds, final = time_kernel(kernel, model, psi0, dt, args.steps,
                                     args.repeats)
        results[name] = (seconds, final)
        print(f"{name:>8}: {seconds:8.3f} s  ({args.steps / seconds:10.0f} steps/s)")

    if len(results) == 2:
        speedup = results["numpy"][0] / results["cython"][0]
        diff = float(np.max(np.abs(results["cython"][1] - results["numpy"][1])))
        print(f"speedup: {speedup:.1f}x (compiled over fallback)")
        print(f"final-state agreement: max |dpsi| = {diff:.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
