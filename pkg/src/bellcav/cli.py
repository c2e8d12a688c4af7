"""Command-line front end.

Subcommands: quasimodes, cavity, injected, oracle, sweep, figure.
Configuration comes from an optional JSON file (--config) with sections
{"params", "spectrum", "grid", "engines"}; individual flags override
config values. Exit codes: 0 success, 2 invalid configuration or
parameters, 3 numeric non-convergence.
"""

import argparse
import json
import sys
from pathlib import Path

from . import harness, oracle, spectra
from .cavity import (MirrorSpec, quasi_mode_residual, quasi_modes_approx,
                     quasi_modes_exact)
from .errors import NumericError, ValidationError
from .model import PhysicalParams, validate
from .tableio import format_value, write_csv

_PARAM_FIELDS = ("lambda_l", "lambda_r", "kappa", "k_c", "delta_e", "gamma", "delta_lr")
_SPECTRUM_SHAPES = ("cavity_photon", "lorentzian", "gaussian", "tabulated")


def _add_param_flags(p):
    p.add_argument("--lambda-l", dest="lambda_l", type=float, help="L-transition coupling")
    p.add_argument("--lambda-r", dest="lambda_r", type=float, help="R-transition coupling")
    p.add_argument("--kappa", type=float, help="cavity linewidth")
    p.add_argument("--k-c", dest="k_c", type=float, help="cavity resonance wavenumber")
    p.add_argument("--delta-e", dest="delta_e", type=float, help="excited-level detuning")
    p.add_argument("--gamma", type=float, help="free-space loss rate")
    p.add_argument("--delta-lr", dest="delta_lr", type=float,
                   help="relative phase of the two couplings")


def _add_spectrum_flags(p):
    p.add_argument("--spectrum", choices=_SPECTRUM_SHAPES, help="packet line shape")
    p.add_argument("--kappa-in", dest="kappa_in", type=float, help="packet spectral width")
    p.add_argument("--peak-offset", dest="peak_offset", type=float,
                   help="packet center offset from k_c")
    p.add_argument("--tau", type=float, help="packet displacement time")
    p.add_argument("--table", help="CSV file for a tabulated spectrum")


def _add_grid_flags(p):
    p.add_argument("--n-modes", dest="n_modes", type=int, help="modes per channel")
    p.add_argument("--bandwidth", type=float, help="half-width of the k window")
    p.add_argument("--t-final", dest="t_final", type=float, help="integration horizon")
    p.add_argument("--dt", type=float, help="integrator step")


def _add_common_flags(p):
    p.add_argument("--engines", help="comma-separated subset of closed_form,quadrature,oracle")
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--config", help="JSON config file")


def _load_config(path):
    if path is None:
        return {}
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValidationError("config must be a JSON object")
    unknown = set(raw) - {"params", "spectrum", "grid", "engines"}
    if unknown:
        raise ValidationError(f"unknown config sections: {sorted(unknown)}")
    return raw


def _collect_params(cfg, args) -> PhysicalParams:
    values = dict(cfg.get("params", {}))
    unknown = set(values) - set(_PARAM_FIELDS)
    if unknown:
        raise ValidationError(f"unknown parameter keys: {sorted(unknown)}")
    for name in _PARAM_FIELDS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    missing = [n for n in ("lambda_l", "lambda_r", "kappa") if n not in values]
    if missing:
        raise ValidationError(f"missing required parameters: {', '.join(missing)}")
    return validate(PhysicalParams(**{k: float(v) for k, v in values.items()}))


def _collect_spectrum(cfg, args, default_shape=None):
    values = dict(cfg.get("spectrum", {}))
    unknown = set(values) - {"shape", "kappa_in", "peak_offset", "tau", "table"}
    if unknown:
        raise ValidationError(f"unknown spectrum keys: {sorted(unknown)}")
    if getattr(args, "spectrum", None) is not None:
        values["shape"] = args.spectrum
    for name in ("kappa_in", "peak_offset", "tau", "table"):
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    shape = values.get("shape", default_shape)
    if shape is None:
        return None
    tau = float(values.get("tau", 0.0))
    if shape == "cavity_photon":
        return spectra.SpectralFunction.cavity_photon()
    if shape in ("lorentzian", "gaussian"):
        if "kappa_in" not in values:
            raise ValidationError(f"{shape} spectrum needs kappa_in")
        make = getattr(spectra.SpectralFunction, shape)
        return make(float(values["kappa_in"]),
                    peak_offset=float(values.get("peak_offset", 0.0)), tau=tau)
    if shape == "tabulated":
        if "table" not in values:
            raise ValidationError("tabulated spectrum needs a table CSV path")
        return spectra.SpectralFunction.from_csv(values["table"], tau=tau)
    raise ValidationError(f"unknown spectrum shape {shape!r}")


def _collect_grid(cfg, args, params, f) -> oracle.SimGrid:
    values = dict(cfg.get("grid", {}))
    unknown = set(values) - {"n_modes", "bandwidth", "t_final", "dt", "tau"}
    if unknown:
        raise ValidationError(f"unknown grid keys: {sorted(unknown)}")
    for name in ("n_modes", "bandwidth", "t_final", "dt"):
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    tau = values.get("tau")
    if getattr(args, "tau", None) is not None:
        tau = args.tau
    if tau is None and f is not None and f.tau:
        tau = f.tau
    n_modes = int(values.get("n_modes", 4001))
    return oracle.make_grid(
        params, f, n_modes=n_modes,
        bandwidth=None if "bandwidth" not in values else float(values["bandwidth"]),
        t_final=None if "t_final" not in values else float(values["t_final"]),
        dt=None if "dt" not in values else float(values["dt"]),
        tau=None if tau is None else float(tau))


def _collect_engines(cfg, args, default):
    if getattr(args, "engines", None):
        return tuple(part.strip() for part in args.engines.split(",") if part.strip())
    if "engines" in cfg:
        return tuple(cfg["engines"])
    return default


def _param_meta(params: PhysicalParams) -> dict:
    return {name: getattr(params, name) for name in _PARAM_FIELDS}


def _spectrum_meta(f) -> dict:
    if f is None:
        return {"spectrum": "cavity_photon"}
    meta = {"spectrum": f.shape}
    if f.kappa_in is not None:
        meta["kappa_in"] = f.kappa_in
        meta["peak_offset"] = f.peak_offset
    if f.tau:
        meta["tau"] = f.tau
    return meta


def _print_result(engine, res):
    print(f"engine = {engine}")
    print(f"p_l = {res.p_l:.12g}")
    print(f"p_r = {res.p_r:.12g}")
    print(f"p_loss = {res.p_loss:.12g}")
    print(f"err_estimate = {res.err_estimate:.3g}")


def _write_scenario_csv(path, params, f, grid, results):
    meta = _param_meta(params)
    meta.update(_spectrum_meta(f))
    if grid is not None:
        meta.update({"n_modes": grid.n_modes, "bandwidth": grid.bandwidth,
                     "t_final": grid.t_final, "dt": grid.dt, "grid_tau": grid.tau})
    header = ["engine", "p_l", "p_r", "p_loss", "err"]
    rows = [(engine, res.p_l, res.p_r, res.p_loss, res.err_estimate)
            for engine, res in results.items()]
    write_csv(path, meta, header, rows)
    print(f"wrote {path}")


def _run_scenario(args, f_default_shape, default_engines):
    cfg = _load_config(args.config)
    params = _collect_params(cfg, args)
    f = _collect_spectrum(cfg, args, default_shape=f_default_shape)
    engines = _collect_engines(cfg, args, default_engines)
    grid = None
    if "oracle" in engines:
        grid = _collect_grid(cfg, args, params, f)
    results = {}
    for engine in engines:
        results[engine] = harness.run_engine(engine, params, f, grid)
        _print_result(engine, results[engine])
    if args.out:
        _write_scenario_csv(args.out, params, f, grid, results)
    return 0


def _cmd_cavity(args):
    default = ("closed_form",) if not args.gamma else ("quadrature",)
    return _run_scenario(args, "cavity_photon", default)


def _cmd_injected(args):
    cfg = _load_config(args.config)
    f = _collect_spectrum(cfg, args)
    if f is None or f.shape == "cavity_photon":
        raise ValidationError(
            "injected needs --spectrum lorentzian, gaussian or tabulated")
    return _run_scenario(args, None, ("quadrature",))


def _cmd_oracle(args):
    cfg = _load_config(args.config)
    params = _collect_params(cfg, args)
    f = _collect_spectrum(cfg, args, default_shape="cavity_photon")
    grid = _collect_grid(cfg, args, params, f)
    res = oracle.simulate_experiment(params, f, grid, trace_path=args.trace)
    _print_result("oracle", res)
    if args.trace:
        print(f"wrote {args.trace}")
    if args.out:
        _write_scenario_csv(args.out, params, f, grid, {"oracle": res})
    return 0


def _cmd_sweep(args):
    cfg = _load_config(args.config)
    params = _collect_params(cfg, args)
    f = _collect_spectrum(cfg, args)
    default = ("closed_form",) if f is None or f.shape == "cavity_photon" \
        else ("quadrature",)
    engines = _collect_engines(cfg, args, default)
    grid = None
    if "oracle" in engines:
        grid = _collect_grid(cfg, args, params, f)
    spec = harness.SweepSpec(axis=args.axis, lo=args.lo, hi=args.hi,
                             steps=args.steps, params=params, spectrum=f,
                             engines=engines, grid=grid)
    rows = harness.sweep(spec)
    header, table = harness.sweep_table(rows, engines)
    meta = {"axis": args.axis, "lo": args.lo, "hi": args.hi, "steps": args.steps,
            "engines": "+".join(engines)}
    meta.update(_param_meta(params))
    meta.update(_spectrum_meta(f))
    if args.out:
        write_csv(args.out, meta, header, table)
        print(f"wrote {args.out}")
    else:
        print(",".join(header))
        for row in table:
            print(",".join(format_value(cell) for cell in row))
    return 0


def _cmd_figure(args):
    for path in harness.figure(args.fig_id, args.out):
        print(f"wrote {path}")
    return 0


def _cmd_quasimodes(args):
    if args.zeta is not None:
        mirror = MirrorSpec.thin_dielectric(args.zeta, args.length)
        meta = {"mirror": "thin_dielectric", "zeta": args.zeta, "length": args.length}
    elif args.mirror_r is not None and args.mirror_t is not None:
        mirror = MirrorSpec.constant(args.mirror_r, args.mirror_t, args.length)
        meta = {"mirror": "constant", "r": args.mirror_r, "t": args.mirror_t,
                "length": args.length}
    else:
        raise ValidationError("quasimodes needs --zeta or both --mirror-r and --mirror-t")
    solver = quasi_modes_exact if args.method == "exact" else quasi_modes_approx
    modes = solver(mirror, args.n_lo, args.n_hi)
    meta["method"] = args.method
    header = ["n", "k_n", "kappa_n", "residual"]
    rows = [(m.n, m.k_n, m.kappa_n, quasi_mode_residual(mirror, m)) for m in modes]
    if args.out:
        write_csv(args.out, meta, header, rows)
        print(f"wrote {args.out}")
    else:
        print(",".join(header))
        for row in rows:
            print(",".join(format_value(cell) for cell in row))
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="bellcav",
        description="Heralded two-atom entanglement from one photon in a leaky cavity")
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("quasimodes", help="extract cavity resonances and linewidths")
    q.add_argument("--zeta", type=float, help="thin-dielectric mirror strength")
    q.add_argument("--mirror-r", dest="mirror_r", type=float,
                   help="constant mirror reflectivity")
    q.add_argument("--mirror-t", dest="mirror_t", type=float,
                   help="constant mirror transmissivity")
    q.add_argument("--length", type=float, default=1.0, help="cavity length")
    # n = 0 sits at k near zero for high-reflectivity thin mirrors (not a
    # physical resonance), so the default range starts at 1.
    q.add_argument("--n-lo", dest="n_lo", type=int, default=1)
    q.add_argument("--n-hi", dest="n_hi", type=int, default=10)
    q.add_argument("--method", choices=("exact", "approx"), default="exact",
                   help="root-finder (exact) or the closed-form approximation")
    q.add_argument("--out", help="output CSV path")
    q.set_defaults(handler=_cmd_quasimodes)

    c = sub.add_parser("cavity", help="probabilities for the photon born in the cavity")
    _add_param_flags(c)
    _add_grid_flags(c)
    c.add_argument("--tau", type=float, help=argparse.SUPPRESS)
    _add_common_flags(c)
    c.set_defaults(handler=_cmd_cavity)

    i = sub.add_parser("injected", help="probabilities for an injected photon packet")
    _add_param_flags(i)
    _add_spectrum_flags(i)
    _add_grid_flags(i)
    _add_common_flags(i)
    i.set_defaults(handler=_cmd_injected)

    o = sub.add_parser("oracle", help="time-domain brute-force run")
    _add_param_flags(o)
    _add_spectrum_flags(o)
    _add_grid_flags(o)
    _add_common_flags(o)
    o.add_argument("--trace", help="per-sample trace CSV path")
    o.set_defaults(handler=_cmd_oracle)

    s = sub.add_parser("sweep", help="one-axis parameter sweep")
    s.add_argument("--axis", required=True, choices=harness.SWEEP_AXES)
    s.add_argument("--lo", type=float, required=True)
    s.add_argument("--hi", type=float, required=True)
    s.add_argument("--steps", type=int, required=True)
    _add_param_flags(s)
    _add_spectrum_flags(s)
    _add_grid_flags(s)
    _add_common_flags(s)
    s.set_defaults(handler=_cmd_sweep)

    g = sub.add_parser("figure", help="write figure-data CSV curves")
    g.add_argument("fig_id", type=int, choices=(3, 4, 5))
    g.add_argument("--out", default=".", help="output directory")
    g.set_defaults(handler=_cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
