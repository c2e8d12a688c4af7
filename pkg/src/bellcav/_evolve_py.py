"""Pure-numpy twin of the compiled RK4 kernel, same contract.

Used when the compiled extension is unavailable or explicitly disabled;
identical method and step count, so results agree to roundoff.
"""

import numpy as np


def rk4_segment(psi, diag, coup, eps_e, dt, n_steps):
    """Advance psi in place by n_steps classical RK4 steps of dpsi/dt = -iH psi.

    psi[0] is the hub (excited-state) amplitude, psi[1:] the leaf (mode)
    amplitudes; H is the star graph with diagonal (eps_e, diag) and
    hub-leaf couplings coup. psi must be complex128 and is modified in
    place.
    """
    if psi.shape[0] != diag.shape[0] + 1 or coup.shape[0] != diag.shape[0]:
        raise ValueError("psi must have length len(diag) + 1 and coup the length of diag")
    coup_c = np.conjugate(coup)

    def apply(src):
        dst = np.empty_like(src)
        dst[0] = eps_e * src[0] + np.dot(coup, src[1:])
        dst[1:] = diag * src[1:] + coup_c * src[0]
        dst *= -1j
        return dst

    half = 0.5 * dt
    sixth = dt / 6.0
    for _ in range(n_steps):
        k1 = apply(psi)
        k2 = apply(psi + half * k1)
        k3 = apply(psi + half * k2)
        k4 = apply(psi + dt * k3)
        psi += sixth * (k1 + 2.0 * (k2 + k3) + k4)
