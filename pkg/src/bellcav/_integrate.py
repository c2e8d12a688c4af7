"""Adaptive line integrals over the full frequency axis.

Thin wrappers around scipy's QUADPACK adaptive bisection. Probability
integrands here are smooth with a few sharp but integrable peaks, so a
finite core carrying forced subdivision points is integrated first and
the two tails are handled by the infinite-limit transformation.
"""

import numpy as np
from scipy.integrate import quad

from .errors import QuadratureFailure

EPSABS = 1e-10
EPSREL = 1e-8


def quad_checked(fn, a, b, points=None, epsabs=EPSABS, epsrel=EPSREL, limit=400):
    """quad() that converts unreliable results into QuadratureFailure."""
    kwargs = dict(full_output=1, epsabs=epsabs, epsrel=epsrel, limit=limit)
    if points:
        kwargs["points"] = points
    out = quad(fn, a, b, **kwargs)
    value, abserr = out[0], out[1]
    if len(out) > 3 and abserr > 1e-6 * max(1.0, abs(value)):
        raise QuadratureFailure(f"integral on [{a}, {b}]: {out[3]}")
    return value, abserr


def real_line_integral(fn, points, halfwidth, epsabs=EPSABS, epsrel=EPSREL):
    """Integrate fn over the whole real line.

    Parameters
    ----------
    fn : callable
        Real-valued integrand of one real variable.
    points : sequence of float
        Locations of sharp features; they bound the finite core and are
        forced as subdivision points inside it.
    halfwidth : float
        Core margin added beyond the outermost feature.

    Returns
    -------
    (value, err) : tuple of float
        Integral and accumulated absolute-error estimate.
    """
    pts = sorted(float(p) for p in points)
    a = pts[0] - halfwidth
    b = pts[-1] + halfwidth
    inner = [p for p in pts if a < p < b]
    total = 0.0
    err = 0.0
    for value, e in (
        quad_checked(fn, a, b, points=inner, epsabs=epsabs, epsrel=epsrel),
        quad_checked(fn, b, np.inf, epsabs=epsabs, epsrel=epsrel, limit=200),
        quad_checked(fn, -np.inf, a, epsabs=epsabs, epsrel=epsrel, limit=200),
    ):
        total += value
        err += e
    return total, err


def complex_quad(fn, a, b, points=None, epsabs=EPSABS, epsrel=EPSREL):
    """Complex-valued quad_checked, real and imaginary parts separately."""
    re, re_err = quad_checked(lambda x: fn(x).real, a, b, points, epsabs, epsrel)
    im, im_err = quad_checked(lambda x: fn(x).imag, a, b, points, epsabs, epsrel)
    return re + 1j * im, re_err + im_err
