"""Resolvent quantities, closed forms, and packet-integrated probabilities."""

import dataclasses

import numpy as np
import pytest

from bellcav.analytic import (CouplingProfile, cavity_photon_probs_closed,
                              cavity_photon_probs_quadrature, dressed_roots,
                              excited_propagator, injected_amplitudes,
                              injected_pr, level_shift,
                              perfect_transfer_offsets, pr_bound,
                              pr_closed_form, s_matrix)
from bellcav.errors import (GammaUnsupported, PoleProximity,
                            UnnormalizedSpectrum, ValidationError,
                            ZeroCoupling)
from bellcav.model import PhysicalParams, total_coupling
from bellcav.spectra import SpectralFunction

THREE_SEVENTHS = PhysicalParams(lambda_l=1.0, lambda_r=1.0, kappa=np.sqrt(2.0) / 3.0)


def test_level_shift_on_resonance():
    p = PhysicalParams(lambda_l=1.0, lambda_r=1.0, kappa=2.0)
    assert level_shift(p, p.k_c) == pytest.approx(-3.0j, abs=1e-14)


def test_level_shift_off_resonance():
    p = PhysicalParams(lambda_l=1.0, lambda_r=np.sqrt(2.0), kappa=1.0)
    assert level_shift(p, p.k_c + 1.0) == pytest.approx((16.0 - 8.0j) / 5.0, abs=1e-13)


def test_level_shift_vanishes_far_away():
    p = PhysicalParams(lambda_l=1.0, lambda_r=1.0, kappa=1.0)
    assert abs(level_shift(p, p.k_c + 1e9)) < 1e-8


def test_level_shift_pole():
    p = PhysicalParams(lambda_l=1.0, lambda_r=1.0, kappa=2.0)
    with pytest.raises(PoleProximity):
        level_shift(p, p.k_c - 1j)


def test_dressed_roots_product_rule():
    for p in (PhysicalParams(1.0, 1.0, 2.0), PhysicalParams(0.3, 0.8, 0.7)):
        roots = dressed_roots(p)
        product = roots.omega_plus * roots.omega_minus
        assert product == pytest.approx(-total_coupling(p), abs=1e-12)


def test_dressed_roots_sum_rule_with_loss():
    p = PhysicalParams(0.3, 0.7, 1.3, delta_e=0.4, gamma=0.2)
    roots = dressed_roots(p)
    total = roots.omega_plus + roots.omega_minus
    assert total == pytest.approx(p.delta_e - 0.5j * (p.kappa + p.gamma), abs=1e-12)
    assert roots.omega_plus.imag < 0 and roots.omega_minus.imag < 0


def test_dressed_roots_decoupled_limit():
    p = PhysicalParams(lambda_l=1e-9, lambda_r=1e-9, kappa=1.0, delta_e=0.7)
    roots = dressed_roots(p)
    assert roots.omega_plus == pytest.approx(0.7, abs=1e-6)
    assert roots.omega_minus == pytest.approx(-0.5j, abs=1e-6)


def test_dressed_roots_strong_coupling_splitting():
    p = PhysicalParams(lambda_l=0.25, lambda_r=0.25 * np.sqrt(2.0), kappa=1.0)
    roots = dressed_roots(p)
    side = np.sqrt(4 * 0.25**2 - 1.0 / 16.0)
    assert roots.omega_plus == pytest.approx(side - 0.25j, abs=1e-12)
    assert roots.omega_minus == pytest.approx(-side - 0.25j, abs=1e-12)


def test_excited_propagator_on_resonance():
    p = PhysicalParams(lambda_l=1.0, lambda_r=1.0, kappa=2.0)
    assert excited_propagator(p, p.k_c) == pytest.approx(-1j / 3.0, abs=1e-13)


def test_excited_propagator_free_atom_limit():
    p = PhysicalParams(lambda_l=1e-8, lambda_r=1e-8, kappa=1.0, delta_e=0.3)
    g = excited_propagator(p, p.k_c + 1.7)
    assert g == pytest.approx(1.0 / (1.7 - 0.3), abs=1e-6)


def test_excited_propagator_asymptotics():
    p = PhysicalParams(lambda_l=1.0, lambda_r=1.0, kappa=1.0)
    omega = p.k_c + 1e8
    assert excited_propagator(p, omega) * (omega - p.k_c) == pytest.approx(1.0, abs=1e-6)


def test_excited_propagator_pole():
    p = PhysicalParams(lambda_l=1.0, lambda_r=1.0, kappa=2.0)
    roots = dressed_roots(p)
    with pytest.raises(PoleProximity):
        excited_propagator(p, p.k_c + roots.omega_plus)


def test_s_matrix_limits():
    p = PhysicalParams(lambda_l=1.0, lambda_r=np.sqrt(2.0), kappa=1.0)
    assert abs(s_matrix(p, p.k_c + 1e7) - 1.0) < 1e-5
    assert abs(s_matrix(p, p.k_c - 1e7) - 1.0) < 1e-5
    assert s_matrix(p, p.k_c) == pytest.approx(-1.0, abs=1e-10)


def test_s_matrix_unimodular_without_loss():
    p = PhysicalParams(lambda_l=0.7, lambda_r=0.4, kappa=1.0, delta_e=0.3)
    for k in np.linspace(-15.0, 15.0, 301):
        assert abs(abs(s_matrix(p, k)) - 1.0) < 1e-10


def test_s_matrix_subunitary_with_loss():
    p = PhysicalParams(lambda_l=0.7, lambda_r=0.4, kappa=1.0, gamma=0.1)
    for k in (-2.0, -0.3, 0.0, 0.5, 4.0):
        assert abs(s_matrix(p, k)) < 1.0 - 1e-6


def test_coupling_profile_rotation_is_unitary():
    p = PhysicalParams(lambda_l=0.7, lambda_r=0.4, kappa=1.0, delta_lr=0.9)
    profile = CouplingProfile(p)
    for k in (-3.0, 0.0, 0.2, 5.0):
        u = profile.rotation(k)
        assert np.max(np.abs(u @ u.conj().T - np.eye(2))) < 1e-14


def test_coupling_profile_v_combines_channels():
    p = PhysicalParams(lambda_l=0.7, lambda_r=0.4, kappa=1.0, delta_lr=0.9)
    profile = CouplingProfile(p)
    for k in (-1.0, 0.3):
        combined = 2 * abs(profile.g_l(k)) ** 2 + abs(profile.g_r(k)) ** 2
        assert profile.v(k) ** 2 == pytest.approx(combined, rel=1e-12)


def test_injected_amplitudes_perfect_transfer_center():
    p = PhysicalParams(lambda_l=0.25, lambda_r=0.25 * np.sqrt(2.0), kappa=1.0,
                       delta_lr=0.7)
    pair = injected_amplitudes(p, p.k_c)
    assert abs(pair.c_l) < 1e-12
    assert pair.c_r == pytest.approx(np.exp(0.7j), abs=1e-12)


def test_injected_amplitudes_single_channel():
    p = PhysicalParams(lambda_l=1.0, lambda_r=0.0, kappa=1.0)
    for k in (-2.0, 0.0, 1.3):
        pair = injected_amplitudes(p, k)
        assert pair.c_r == 0.0
        assert abs(abs(pair.c_l) - 1.0) < 1e-12


def test_injected_amplitudes_unitary_without_loss():
    p = PhysicalParams(lambda_l=0.6, lambda_r=0.9, kappa=1.0, delta_e=0.2,
                       delta_lr=1.1)
    for k in np.linspace(-10.0, 10.0, 101):
        pair = injected_amplitudes(p, k)
        total = abs(pair.c_l) ** 2 + abs(pair.c_r) ** 2
        assert total == pytest.approx(1.0, abs=1e-12)


def test_injected_amplitudes_contractive_with_loss():
    p = PhysicalParams(lambda_l=0.6, lambda_r=0.9, kappa=1.0, gamma=0.1)
    for k in np.linspace(-5.0, 5.0, 51):
        pair = injected_amplitudes(p, k)
        assert abs(pair.c_l) ** 2 + abs(pair.c_r) ** 2 <= 1.0 + 1e-12


def test_perfect_transfer_offsets_strong_coupling():
    p = PhysicalParams(lambda_l=2.5, lambda_r=2.5 * np.sqrt(2.0), kappa=1.0)
    res = perfect_transfer_offsets(p)
    side = np.sqrt(4 * 2.5**2 - 0.25)
    assert res.offsets == pytest.approx((-side, 0.0, side), abs=1e-12)
    assert res.multiplicities == (1, 1, 1)
    assert res.imag_side_offset is None


def test_perfect_transfer_offsets_triple_root():
    p = PhysicalParams(lambda_l=0.25, lambda_r=0.25 * np.sqrt(2.0), kappa=1.0)
    res = perfect_transfer_offsets(p)
    assert res.offsets == (0.0,)
    assert res.multiplicities == (3,)
    assert "triple" in res.note


def test_perfect_transfer_offsets_weak_coupling():
    p = PhysicalParams(lambda_l=0.1, lambda_r=0.1 * np.sqrt(2.0), kappa=1.0)
    res = perfect_transfer_offsets(p)
    assert res.offsets == (0.0,)
    assert res.multiplicities == (1,)
    assert res.imag_side_offset == pytest.approx(np.sqrt(0.25 - 0.04), abs=1e-12)


def test_perfect_transfer_offsets_preconditions():
    detuned = PhysicalParams(0.25, 0.25 * np.sqrt(2.0), 1.0, delta_e=0.1)
    assert perfect_transfer_offsets(detuned).offsets == ()
    unbalanced = PhysicalParams(0.25, 0.3, 1.0)
    res = perfect_transfer_offsets(unbalanced)
    assert res.offsets == () and res.note


def test_closed_form_values():
    assert pr_closed_form(1.0, 1.0, np.sqrt(2.0) / 3.0) == pytest.approx(3.0 / 7.0, abs=1e-14)
    assert pr_closed_form(np.sqrt(5.0 / 6.0), 1.0, np.sqrt(2.0) / 3.0) == pytest.approx(
        9.0 / 20.0, abs=1e-14)
    assert pr_closed_form(1.0, 1.0, 7.5) == pytest.approx(4.0 / 93.375, abs=1e-14)


def test_closed_form_lossless_limit():
    assert pr_closed_form(1.0, np.sqrt(2.0), 0.0) == pytest.approx(0.5, abs=1e-14)


def test_closed_form_rejects_dead_system():
    with pytest.raises(ZeroCoupling):
        pr_closed_form(0.0, 0.0, 1.0)


def test_cavity_probs_closed_record():
    r = cavity_photon_probs_closed(THREE_SEVENTHS)
    assert r.p_r == pytest.approx(3.0 / 7.0, abs=1e-14)
    assert r.p_l == pytest.approx(4.0 / 7.0, abs=1e-14)
    assert r.p_loss == 0.0
    assert r.method == "closed_form"


def test_cavity_probs_closed_rejects_gamma():
    p = dataclasses.replace(THREE_SEVENTHS, gamma=0.01)
    with pytest.raises(GammaUnsupported):
        cavity_photon_probs_closed(p)


def test_quadrature_matches_closed_form():
    for p in (THREE_SEVENTHS,
              PhysicalParams(1.0, np.sqrt(2.0), 1.0),
              PhysicalParams(0.6, 1.1, 0.8, delta_e=0.3)):
        closed = cavity_photon_probs_closed(p)
        quad = cavity_photon_probs_quadrature(p)
        assert abs(quad.p_r - closed.p_r) < 1e-8
        assert abs(quad.p_l - closed.p_l) < 1e-8
        assert quad.method == "quadrature"


def test_quadrature_opens_loss_channel():
    p = PhysicalParams(1.0, 1.0, 1.0, gamma=0.05)
    r = cavity_photon_probs_quadrature(p)
    assert r.p_loss > 1e-4
    assert abs(r.p_l + r.p_r + r.p_loss - 1.0) <= r.err_estimate + 1e-12
    assert r.err_estimate < 1e-8


def test_pr_bound_values():
    p = PhysicalParams(lambda_l=1.0, lambda_r=1.0, kappa=2.0)
    bound, lr_star = pr_bound(p)
    u = np.sqrt(2.0)
    assert bound == pytest.approx(2.0 / (1.0 + u) ** 2, abs=1e-14)
    assert lr_star == pytest.approx(np.sqrt(2.0) * 2.0**0.25, abs=1e-14)
    assert pr_closed_form(1.0, lr_star, 2.0) == pytest.approx(bound, abs=1e-12)


def test_pr_bound_below_half():
    for kappa in (0.01, 0.5, 1.0, 2.0, 7.5):
        bound, _ = pr_bound(PhysicalParams(1.0, 1.0, kappa))
        assert bound < 0.5


def test_pr_bound_preconditions():
    with pytest.raises(ValidationError):
        pr_bound(PhysicalParams(1.0, 1.0, 1.0, delta_e=0.1))
    with pytest.raises(ValidationError):
        pr_bound(PhysicalParams(0.0, 1.0, 1.0))


def test_injected_pr_monochromatic_limit():
    p = PhysicalParams(lambda_l=2.5, lambda_r=2.5 * np.sqrt(2.0), kappa=1.0)
    f = SpectralFunction.lorentzian(kappa_in=0.01)
    r = injected_pr(p, f)
    assert abs(r.p_r - 1.0) < 0.02


def test_injected_pr_rejects_unnormalized_spectrum():
    dk = np.linspace(-2.0, 2.0, 401)
    amp = 1.1 * np.sqrt(2.0) / (np.pi**0.25 * np.sqrt(0.3)) * np.exp(-2 * dk**2 / 0.09)
    bad = SpectralFunction(shape="tabulated", table_dk=dk, table_amp=amp.astype(complex))
    with pytest.raises(UnnormalizedSpectrum):
        injected_pr(PhysicalParams(1.0, 1.0, 1.0), bad)


def test_rate_scaling_invariance():
    base = PhysicalParams(lambda_l=0.25, lambda_r=0.6, kappa=1.0, delta_e=0.1,
                          gamma=0.02)
    c = 3.7
    scaled = PhysicalParams(lambda_l=c * base.lambda_l, lambda_r=c * base.lambda_r,
                            kappa=c * base.kappa, delta_e=c * base.delta_e,
                            gamma=c * base.gamma)
    a = cavity_photon_probs_quadrature(base)
    b = cavity_photon_probs_quadrature(scaled)
    assert b.p_r == pytest.approx(a.p_r, abs=1e-9)
    assert b.p_loss == pytest.approx(a.p_loss, abs=1e-9)

    f = SpectralFunction.gaussian(0.3)
    fa = injected_pr(dataclasses.replace(base, gamma=0.0), f)
    fb = injected_pr(dataclasses.replace(scaled, gamma=0.0), f.with_kappa_in(c * 0.3))
    assert fb.p_r == pytest.approx(fa.p_r, abs=1e-9)
