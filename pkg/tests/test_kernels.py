"""The RK4 star-graph kernel: backend selection and numerical contract."""

import numpy as np
import pytest

import bellcav._evolve_py as py_kernel
from bellcav.kernels import backend_name, rk4_segment


def _random_star(rng, n):
    psi = rng.normal(size=2 * n + 1) + 1j * rng.normal(size=2 * n + 1)
    psi /= np.linalg.norm(psi)
    diag = rng.uniform(-3.0, 3.0, size=2 * n)
    coup = 0.1 * (rng.normal(size=2 * n) + 1j * rng.normal(size=2 * n))
    return (psi.astype(np.complex128), diag.astype(np.float64),
            coup.astype(np.complex128))


def test_backend_is_reported():
    assert backend_name in ("cython", "numpy")


def test_backends_agree():
    rng = np.random.default_rng(7)
    psi, diag, coup = _random_star(rng, 400)
    a = psi.copy()
    b = psi.copy()
    rk4_segment(a, diag, coup, 0.2 - 0.05j, 0.01, 500)
    py_kernel.rk4_segment(b, diag, coup, 0.2 - 0.05j, 0.01, 500)
    assert np.max(np.abs(a - b)) < 1e-13


def test_decoupled_modes_only_rotate():
    rng = np.random.default_rng(3)
    psi, diag, _ = _random_star(rng, 300)
    coup = np.zeros(600, dtype=np.complex128)
    start = psi.copy()
    # phase error per mode ~ t |omega|^5 dt^4 / 120; dt = 0.0025 keeps
    # the worst mode (|omega| <= 3) below 1e-10 over t = 10
    dt, n_steps = 0.0025, 4000
    rk4_segment(psi, diag, coup, 0.4 + 0.0j, dt, n_steps)
    t = dt * n_steps
    expected = start * np.exp(-1j * np.concatenate(([0.4], diag)) * t)
    assert np.max(np.abs(psi - expected)) < 1e-8
    assert np.max(np.abs(np.abs(psi) - np.abs(start))) < 1e-9


def test_hub_decays_at_gamma_over_two():
    rng = np.random.default_rng(5)
    psi, diag, _ = _random_star(rng, 300)
    coup = np.zeros(600, dtype=np.complex128)
    start_hub = psi[0]
    rk4_segment(psi, diag, coup, 1.0 - 0.05j, 0.01, 1000)
    assert abs(psi[0]) == pytest.approx(abs(start_hub) * np.exp(-0.05 * 10.0),
                                        abs=1e-9)


def test_norm_preserved_for_hermitian_graph():
    rng = np.random.default_rng(11)
    psi, diag, coup = _random_star(rng, 400)
    rk4_segment(psi, diag, coup, 0.3 + 0.0j, 0.005, 2000)
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-10)


def test_kernel_rejects_mismatched_shapes():
    psi = np.zeros(11, dtype=np.complex128)
    diag = np.zeros(8)
    coup = np.zeros(10, dtype=np.complex128)
    with pytest.raises(ValueError):
        rk4_segment(psi, diag, coup, 0.0 + 0.0j, 0.01, 10)
