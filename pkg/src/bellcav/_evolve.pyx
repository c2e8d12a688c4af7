# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled fixed-step RK4 kernel for the star-graph Schrodinger equation.

The single-excitation Hamiltonian is a star graph: one hub (the
collective excited state, complex energy eps_e) coupled to M leaves
(the discretized photon modes, real energies diag[j], couplings
coup[j]). The state vector is psi = (hub, leaf_1 .. leaf_M).
"""

import numpy as np


cdef inline void _apply(const double complex[::1] src, double complex[::1] dst,
                        const double[::1] diag, const double complex[::1] coup,
                        const double complex[::1] coup_c, double complex eps_e,
                        Py_ssize_t m) noexcept nogil:
    # dst = -i H src
    cdef Py_ssize_t j
    cdef double complex acc = eps_e * src[0]
    cdef double complex e0 = src[0]
    for j in range(m):
        acc = acc + coup[j] * src[j + 1]
        dst[j + 1] = -1j * (diag[j] * src[j + 1] + coup_c[j] * e0)
    dst[0] = -1j * acc


cdef inline void _stage(const double complex[::1] psi,
                        const double complex[::1] kprev, double a,
                        double complex[::1] dst,
                        const double[::1] diag, const double complex[::1] coup,
                        const double complex[::1] coup_c, double complex eps_e,
                        Py_ssize_t m) noexcept nogil:
    # dst = -i H (psi + a * kprev), the trial vector formed on the fly
    cdef Py_ssize_t j
    cdef double complex e0 = psi[0] + a * kprev[0]
    cdef double complex acc = eps_e * e0
    cdef double complex s
    for j in range(m):
        s = psi[j + 1] + a * kprev[j + 1]
        acc = acc + coup[j] * s
        dst[j + 1] = -1j * (diag[j] * s + coup_c[j] * e0)
    dst[0] = -1j * acc


def rk4_segment(psi_arr, diag_arr, coup_arr, eps_e, double dt, Py_ssize_t n_steps):
    """Advance psi in place by n_steps classical RK4 steps of dpsi/dt = -iH psi.

    psi_arr[0] is the hub amplitude, psi_arr[1:] the leaf amplitudes;
    diag_arr and coup_arr have length len(psi_arr) - 1. All arrays must
    be C-contiguous; psi_arr is complex128 and modified in place.
    """
    cdef double complex[::1] psi = psi_arr
    cdef const double[::1] diag = diag_arr
    cdef const double complex[::1] coup = coup_arr
    cdef double complex eps = eps_e
    cdef Py_ssize_t m = diag.shape[0]
    if psi.shape[0] != m + 1 or coup.shape[0] != m:
        raise ValueError("psi must have length len(diag) + 1 and coup the length of diag")

    coup_c_arr = np.conjugate(coup_arr)
    cdef const double complex[::1] coup_c = coup_c_arr
    k1_arr = np.empty(m + 1, dtype=np.complex128)
    k2_arr = np.empty(m + 1, dtype=np.complex128)
    k3_arr = np.empty(m + 1, dtype=np.complex128)
    k4_arr = np.empty(m + 1, dtype=np.complex128)
    cdef double complex[::1] k1 = k1_arr
    cdef double complex[::1] k2 = k2_arr
    cdef double complex[::1] k3 = k3_arr
    cdef double complex[::1] k4 = k4_arr

    cdef Py_ssize_t step, j
    cdef double half = 0.5 * dt
    cdef double sixth = dt / 6.0
    with nogil:
        for step in range(n_steps):
            _apply(psi, k1, diag, coup, coup_c, eps, m)
            _stage(psi, k1, half, k2, diag, coup, coup_c, eps, m)
            _stage(psi, k2, half, k3, diag, coup, coup_c, eps, m)
            _stage(psi, k3, dt, k4, diag, coup, coup_c, eps, m)
            for j in range(m + 1):
                psi[j] = psi[j] + sixth * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j])
