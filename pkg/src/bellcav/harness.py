"""Parameter sweeps, ratio optimization, and figure-data production.

Every output is a deterministic CSV (see tableio); sweep rows are
computed in a thread pool, collected, and emitted sorted by axis value
with per-row error annotations instead of aborting the whole run.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import analytic, oracle, spectra
from .errors import BellcavError, ValidationError
from .model import PhysicalParams, ProbabilityResult, validate
from .tableio import write_csv

SWEEP_AXES = ("ratio_lambdaL_over_lambdaR", "kappa_in_over_kappa", "delta_e", "gamma")
ENGINES = ("closed_form", "quadrature", "oracle")


@dataclass(frozen=True)
class SweepSpec:
    """One-axis sweep description.

    axis names which quantity varies; params/spectrum hold everything
    fixed. spectrum = None means the photon born in the cavity. The
    oracle engine needs a SimGrid.
    """

    axis: str
    lo: float
    hi: float
    steps: int
    params: PhysicalParams
    spectrum: spectra.SpectralFunction | None = None
    engines: tuple = ("closed_form",)
    grid: oracle.SimGrid | None = None


@dataclass
class SweepRow:
    """Per-engine results (or error annotations) at one axis value."""

    axis_value: float
    results: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)


def _check_spec(spec: SweepSpec) -> None:
    if spec.axis not in SWEEP_AXES:
        raise ValidationError(f"unknown sweep axis {spec.axis!r}; choose from {SWEEP_AXES}")
    if not spec.lo < spec.hi:
        raise ValidationError("sweep range needs lo < hi")
    if spec.steps < 2:
        raise ValidationError("sweep needs at least 2 steps")
    for engine in spec.engines:
        if engine not in ENGINES:
            raise ValidationError(f"unknown engine {engine!r}; choose from {ENGINES}")
    if "oracle" in spec.engines and spec.grid is None:
        raise ValidationError("the oracle engine requires a grid")


def _apply_axis(spec: SweepSpec, value: float):
    params, f = spec.params, spec.spectrum
    if spec.axis == "ratio_lambdaL_over_lambdaR":
        return replace(params, lambda_l=value * params.lambda_r), f
    if spec.axis == "kappa_in_over_kappa":
        if f is None or f.shape not in ("lorentzian", "gaussian"):
            raise ValidationError(
                "the kappa_in_over_kappa axis needs a Lorentzian or Gaussian spectrum")
        return params, f.with_kappa_in(value * params.kappa)
    if spec.axis == "delta_e":
        return replace(params, delta_e=value), f
    return replace(params, gamma=value), f


def run_engine(engine: str, params: PhysicalParams,
               f: spectra.SpectralFunction | None,
               grid: oracle.SimGrid | None = None) -> ProbabilityResult:
    """Dispatch one scenario to one computation engine."""
    if engine == "closed_form":
        if f is not None and f.shape != "cavity_photon":
            raise ValidationError("the closed_form engine covers only the cavity photon")
        return analytic.cavity_photon_probs_closed(params)
    if engine == "quadrature":
        if f is None or f.shape == "cavity_photon":
            return analytic.cavity_photon_probs_quadrature(params)
        return analytic.injected_pr(params, f)
    if engine == "oracle":
        if grid is None:
            raise ValidationError("the oracle engine requires a grid")
        f_run = spectra.SpectralFunction.cavity_photon() if f is None else f
        return oracle.simulate_experiment(params, f_run, grid)
    raise ValidationError(f"unknown engine {engine!r}")


def _sweep_row(spec: SweepSpec, value: float) -> SweepRow:
    row = SweepRow(axis_value=value)
    try:
        params, f = _apply_axis(spec, value)
    except BellcavError as exc:
        row.errors = {engine: f"{type(exc).__name__}: {exc}" for engine in spec.engines}
        return row
    for engine in spec.engines:
        try:
            row.results[engine] = run_engine(engine, params, f, spec.grid)
        except BellcavError as exc:
            row.errors[engine] = f"{type(exc).__name__}: {exc}"
    return row


def sweep(spec: SweepSpec) -> list:
    """Evaluate every engine at every axis value; never drops a row.

    Rows are computed concurrently (each point is independent and
    deterministic) and returned sorted by axis value. Engine failures
    are recorded in the row's errors dict and the run continues.
    """
    _check_spec(spec)
    values = [float(v) for v in np.linspace(spec.lo, spec.hi, spec.steps)]
    workers = min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda v: _sweep_row(spec, v), values))
    rows.sort(key=lambda row: row.axis_value)
    return rows


def sweep_table(rows: list, engines: tuple) -> tuple:
    """Flatten sweep rows to (header, tuple rows) for CSV emission."""
    header = ["axis_value"]
    for engine in engines:
        header += [f"{engine}_p_l", f"{engine}_p_r", f"{engine}_p_loss",
                   f"{engine}_err", f"{engine}_error"]
    table = []
    for row in rows:
        cells = [row.axis_value]
        for engine in engines:
            res = row.results.get(engine)
            if res is None:
                note = row.errors.get(engine, "not run").replace(",", ";")
                cells += ["", "", "", "", note]
            else:
                cells += [res.p_l, res.p_r, res.p_loss, res.err_estimate, ""]
        table.append(tuple(cells))
    return header, table


_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def optimize_ratio(params: PhysicalParams) -> tuple:
    """Golden-section maximization of closed-form P_R over lambda_r.

    Searches lambda_r in (0, 10 lambda_l] to an interval tolerance of
    1e-8 and returns (lambda_r_star, p_r_star). The objective is smooth
    and unimodal in lambda_r, so bracketing is robust and needs no
    derivatives. Requires delta_e = 0 and gamma = 0, where the closed
    form holds.
    """
    validate(params)
    if params.delta_e != 0 or params.gamma != 0:
        raise ValidationError("optimize_ratio requires delta_e = 0 and gamma = 0")
    if params.lambda_l <= 0:
        raise ValidationError("optimize_ratio requires lambda_l > 0")

    def objective(lr):
        return analytic.pr_closed_form(params.lambda_l, lr, params.kappa)

    a, b = 0.0, 10.0 * params.lambda_l
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = objective(c), objective(d)
    for _ in range(500):
        if b - a <= 1e-8:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = objective(d)
    lambda_r_star = 0.5 * (a + b)
    return lambda_r_star, objective(lambda_r_star)


def _figure3(out: Path) -> list:
    # Integer-arithmetic grid so the landmark abscissae 0.3 and 1.0 are
    # hit bit-exactly; sqrt(5/6) and 1/sqrt(2) appended for the quoted
    # rational values.
    ratios = np.unique(np.concatenate([np.arange(20, 301) / 100.0,
                                       [np.sqrt(5.0 / 6.0), 1.0 / np.sqrt(2.0)]]))
    lambda_r = 1.0
    curves = [("0", 0.0), ("sqrt2over3", np.sqrt(2.0) / 3.0), ("7p5", 7.5)]
    paths = []
    for tag, ratio_kappa in curves:
        kappa = ratio_kappa * lambda_r
        rows = [(x, analytic.pr_closed_form(x * lambda_r, lambda_r, kappa), 0.0)
                for x in ratios]
        meta = {"figure": 3, "axis": "lambda_l_over_lambda_r",
                "kappa_over_lambda_r": ratio_kappa, "lambda_r": lambda_r,
                "delta_e": 0.0, "gamma": 0.0, "spectrum": "cavity_photon",
                "engine": "closed_form"}
        path = out / f"fig3_kappa_over_lambdar_{tag}.csv"
        write_csv(path, meta, ["lambda_l_over_lambda_r", "p_r", "err"], rows)
        paths.append(path)
    return paths


def _figure45(fig_id: int, out: Path) -> list:
    shape = "lorentzian" if fig_id == 4 else "gaussian"
    make = (spectra.SpectralFunction.lorentzian if fig_id == 4
            else spectra.SpectralFunction.gaussian)
    xs = np.arange(1, 76) / 50.0  # kappa_in/kappa on 0.02 .. 1.50, hits 0.3 exactly
    kappa = 1.0
    curves = [("2p5", 2.5), ("0p25", 0.25), ("0p13", 0.13)]
    paths = []
    for tag, ll in curves:
        lambda_l = ll * kappa
        lambda_r = np.sqrt(2.0) * lambda_l
        params = PhysicalParams(lambda_l=lambda_l, lambda_r=lambda_r, kappa=kappa)
        rows = []
        for x in xs:
            res = analytic.injected_pr(params, make(kappa_in=x * kappa))
            rows.append((x, res.p_r, res.err_estimate))
        meta = {"figure": fig_id, "axis": "kappa_in_over_kappa", "spectrum": shape,
                "lambda_l_over_kappa": ll, "lambda_r_rule": "sqrt(2)*lambda_l",
                "lambda_l": lambda_l, "lambda_r": lambda_r, "kappa": kappa,
                "delta_e": 0.0, "gamma": 0.0, "engine": "quadrature"}
        path = out / f"fig{fig_id}_lambdal_over_kappa_{tag}.csv"
        write_csv(path, meta, ["kappa_in_over_kappa", "p_r", "err"], rows)
        paths.append(path)
    return paths


def figure(fig_id: int, out_dir) -> list:
    """Write the CSV curve files for one result figure; returns the paths.

    Figure 3: closed-form P_R versus lambda_l/lambda_r at
    kappa/lambda_r in {0, sqrt(2)/3, 7.5} (cavity photon). Figures 4
    and 5: quadrature P_R versus kappa_in/kappa for Lorentzian and
    Gaussian packets at lambda_l/kappa in {2.5, 0.25, 0.13}; the
    captions leave lambda_r free, so the optimal rule
    lambda_r = sqrt(2) lambda_l is used and recorded in the metadata.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if fig_id == 3:
        return _figure3(out)
    if fig_id in (4, 5):
        return _figure45(fig_id, out)
    raise ValidationError("figure id must be 3, 4 or 5")


def run_cli(argv=None) -> int:
    """Entry point for the command-line interface; returns the exit code."""
    from . import cli
    return cli.main(argv)
