"""Mirror coefficients, cavity mode functions, and quasi-mode roots."""

import numpy as np
import pytest

from bellcav.cavity import (MirrorSpec, exterior_reflection, interior_coeff,
                            mirror_coeffs, mode_function, quasi_mode_residual,
                            quasi_modes_approx, quasi_modes_exact)
from bellcav.errors import InvalidMirror, NoConvergence, PoleProximity


def test_thin_dielectric_coeffs_at_unit_beta():
    m = MirrorSpec.thin_dielectric(zeta=2.0, l=1.0)
    r, t = mirror_coeffs(m, 1.0)
    assert r == pytest.approx((-1.0 + 1.0j) / 2.0, abs=1e-15)
    assert t == pytest.approx((1.0 + 1.0j) / 2.0, abs=1e-15)


def test_thin_dielectric_transparent_limit():
    m = MirrorSpec.thin_dielectric(zeta=0.0, l=1.0)
    assert mirror_coeffs(m, 3.0) == (0.0, 1.0)


def test_thin_dielectric_opaque_limit():
    m = MirrorSpec.thin_dielectric(zeta=1e6, l=1.0)
    r, _ = mirror_coeffs(m, 1.0)
    assert abs(r) <= 1.0
    assert abs(r) > 1.0 - 1e-11
    assert abs(r + 1.0) < 1e-5  # r -> -1: hard-wall phase


@pytest.mark.parametrize("zeta", [0.3, 2.0, 50.0])
def test_thin_dielectric_flux_conservation(zeta):
    m = MirrorSpec.thin_dielectric(zeta=zeta, l=1.0)
    for k in np.linspace(0.05, 40.0, 200):
        r, t = mirror_coeffs(m, k)
        assert abs(r) ** 2 + abs(t) ** 2 == pytest.approx(1.0, abs=1e-14)


def test_constant_mirror_accepts_lossless_pair():
    m = MirrorSpec.constant(r=0.99, t=-1.99, l=1.0)
    assert mirror_coeffs(m, 2.0) == (0.99, -1.99)


def test_constant_mirror_rejects_lossy_pair():
    with pytest.raises(InvalidMirror):
        MirrorSpec.constant(r=0.9, t=0.5, l=1.0)


def test_mirror_rejects_bad_geometry():
    with pytest.raises(InvalidMirror):
        MirrorSpec.thin_dielectric(zeta=-1.0, l=1.0)
    with pytest.raises(InvalidMirror):
        MirrorSpec.thin_dielectric(zeta=1.0, l=0.0)
    with pytest.raises(InvalidMirror):
        MirrorSpec.constant(r=0.0, t=1.0, l=-2.0)


def test_transparent_mirror_mode_weights():
    m = MirrorSpec.constant(r=0.0, t=1.0, l=1.0)
    assert interior_coeff(m, 1.7) == pytest.approx(-2.0j, abs=1e-15)
    assert exterior_reflection(m, 1.7) == pytest.approx(-1.0, abs=1e-15)


def test_exterior_reflection_unimodular_for_thin_mirror():
    m = MirrorSpec.thin_dielectric(zeta=2.0, l=1.0)
    worst = max(abs(abs(exterior_reflection(m, k)) - 1.0)
                for k in np.linspace(0.1, 50.0, 500))
    assert worst < 1e-12


def test_round_trip_pole_raises():
    m = MirrorSpec.constant(r=-1.0, t=0.0, l=1.0)
    with pytest.raises(PoleProximity):
        interior_coeff(m, np.pi)


def test_mode_function_continuous_across_mirror():
    m = MirrorSpec.thin_dielectric(zeta=7.0, l=1.0)
    for k in (0.9, 2.3, 11.0):
        inside = mode_function(m, k, m.l)
        outside = mode_function(m, k, m.l + 1e-13)
        assert abs(inside - outside) < 1e-10


def test_mode_function_vanishes_at_hard_wall():
    m = MirrorSpec.thin_dielectric(zeta=7.0, l=1.0)
    assert abs(mode_function(m, 2.3, 1e-12)) < 1e-9
    with pytest.raises(ValueError):
        mode_function(m, 2.3, 0.0)
    with pytest.raises(ValueError):
        mode_function(m, 2.3, -0.5)


def test_mode_function_free_space_limit():
    m = MirrorSpec.constant(r=0.0, t=1.0, l=1.0)
    for x in (1.5, 3.7):
        expected = -2j * np.sin(2.3 * x)
        assert mode_function(m, 2.3, x) == pytest.approx(expected, abs=1e-13)


def test_interior_weight_peaks_at_resonance():
    m = MirrorSpec.thin_dielectric(zeta=50.0, l=1.0)
    mode = quasi_modes_exact(m, 2, 2)[0]
    ks = np.linspace(mode.k_n - 3 * mode.kappa_n, mode.k_n + 3 * mode.kappa_n, 2001)
    weights = np.array([abs(interior_coeff(m, k)) for k in ks])
    k_peak = ks[np.argmax(weights)]
    assert abs(k_peak - mode.k_n) < 0.5 * mode.kappa_n


def test_quasi_modes_approx_constant_mirror():
    m = MirrorSpec.constant(r=0.99, t=-1.99, l=1.0)
    modes = quasi_modes_approx(m, 0, 4)
    assert modes[0].k_n == pytest.approx(np.pi / 2, abs=1e-12)
    assert modes[0].kappa_n == pytest.approx(0.0100503, abs=1e-6)
    for a, b in zip(modes, modes[1:]):
        assert b.k_n - a.k_n == pytest.approx(np.pi, abs=1e-12)
        assert b.kappa_n == pytest.approx(a.kappa_n, abs=1e-14)


def test_quasi_modes_exact_matches_approx_for_constant_mirror():
    m = MirrorSpec.constant(r=0.99, t=-1.99, l=1.0)
    approx = quasi_modes_approx(m, 0, 3)
    exact = quasi_modes_exact(m, 0, 3)
    for a, e in zip(approx, exact):
        assert abs(e.k_n - a.k_n) < 1e-10
        assert abs(e.kappa_n - a.kappa_n) < 1e-10


def test_quasi_modes_exact_residual_small():
    m = MirrorSpec.thin_dielectric(zeta=50.0, l=1.0)
    for mode in quasi_modes_exact(m, 1, 10):
        assert quasi_mode_residual(m, mode) < 1e-10


def test_quasi_modes_approx_close_to_exact_for_good_mirror():
    m = MirrorSpec.thin_dielectric(zeta=50.0, l=1.0)
    approx = quasi_modes_approx(m, 15, 15)[0]
    exact = quasi_modes_exact(m, 15, 15)[0]
    assert abs(approx.k_n - exact.k_n) < 1e-3 * exact.kappa_n
    assert abs(approx.kappa_n - exact.kappa_n) < 1e-3 * exact.kappa_n


def test_quasi_mode_widths_track_mirror_opacity():
    kappas = []
    for zeta in (10.0, 30.0, 100.0):
        m = MirrorSpec.thin_dielectric(zeta=zeta, l=1.0)
        kappas.append(quasi_modes_exact(m, 3, 3)[0].kappa_n)
    assert kappas[0] > kappas[1] > kappas[2] > 0


def test_quasi_mode_width_matches_mirror_reflectivity():
    # Exact widths must agree with -ln|r(k_n)|/l within 1% once |r| >= 0.9.
    m = MirrorSpec.thin_dielectric(zeta=30.0, l=1.0)
    for mode in quasi_modes_exact(m, 2, 8):
        r, _ = mirror_coeffs(m, mode.k_n)
        assert abs(r) >= 0.9
        predicted = -np.log(abs(r)) / m.l
        assert abs(mode.kappa_n - predicted) < 0.01 * mode.kappa_n


def test_quasi_modes_degenerate_index_refuses_to_converge():
    # For a thin mirror arg r(k) ~ pi, which pushes the n = 0 candidate
    # toward k = 0 where no resonance exists; the solver must say so
    # instead of returning a junk root.
    m = MirrorSpec.thin_dielectric(zeta=30.0, l=1.0)
    with pytest.raises(NoConvergence):
        quasi_modes_approx(m, 0, 2)
