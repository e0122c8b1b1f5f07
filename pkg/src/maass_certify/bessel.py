"""Modified Bessel function of the second kind for complex order.

K_nu(x) for real x > 0 and complex nu is evaluated from the integral
representation

    K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt

by panelled Gauss-Legendre quadrature with the e^{-x} peak factored out.
This is uniformly stable for purely imaginary order (where power series in
doubles lose all digits to e^{pi |Im nu|} cancellation) and vectorizes over
the argument.  For arguments beyond the underflow point a log-mode Poincare
asymptotic series is provided.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

from .errors import QuadratureError

_GL_NODES = 24
_gl_x, _gl_w = np.polynomial.legendre.leggauss(_GL_NODES)

_UNDERFLOW_X = 690.0


def _node_set(x_min: float, imag_nu: float, re_nu: float):
    """Panelled Gauss-Legendre nodes on [0, T] for the cosh integral."""
    arg = 1.0 + 745.0 / max(x_min, 1e-8)
    t_max = math.acosh(arg)
    if re_nu:
        # cosh(nu t) grows like e^{|Re nu| t}; extend slightly for safety
        t_max += abs(re_nu) / max(x_min, 1e-8) * 0.0 + 2.0
    rate = max(abs(imag_nu), abs(re_nu), 2.0)
    panels = max(8, int(math.ceil(t_max * rate / 2.5)))
    edges = np.linspace(0.0, t_max, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * _gl_x[None, :]).ravel()
    w = (half[:, None] * _gl_w[None, :]).ravel()
    return t, w


def besselk_scaled(nu: complex, x) -> np.ndarray:
    """e^{x} K_nu(x), vectorized over real x > 0."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs <= 0):
        raise QuadratureError("besselk requires positive real argument")
    nu = complex(nu)
    t, w = _node_set(float(xs.min()), nu.imag, nu.real)
    expo = -np.outer(xs, np.cosh(t) - 1.0)
    np.clip(expo, -745.0, 0.0, out=expo)
    kern = np.exp(expo)
    ch = np.cosh(nu * t)
    return kern @ (w * ch)


def besselk(nu: complex, x):
    """K_nu(x) for complex nu, real x > 0 (0.0 when fully underflowed)."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros(xs.shape, dtype=complex)
    small = xs < _UNDERFLOW_X
    if np.any(small):
        out[small] = besselk_scaled(nu, xs[small]) * np.exp(-xs[small])
    if np.isscalar(x) or np.ndim(x) == 0:
        return complex(out[0])
    return out


def log_besselk_asym(nu: complex, x: float, terms: int = 12) -> complex:
    """log K_nu(x) via the Poincare asymptotic series (x >> |nu|^2)."""
    nu = complex(nu)
    if x <= 0:
        raise QuadratureError("log_besselk_asym requires x > 0")
    if x < 4.0 * (1.0 + abs(nu)) ** 2:
        raise QuadratureError(
            "asymptotic series unreliable: x too small for this order")
    mu = 4.0 * nu * nu
    term = 1.0 + 0j
    total = 1.0 + 0j
    for k in range(1, terms + 1):
        term *= (mu - (2 * k - 1) ** 2) / (8.0 * x * k)
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return 0.5 * math.log(math.pi / (2.0 * x)) - x + np.log(total)


def log_gamma(z: complex) -> complex:
    """Principal log Gamma for complex argument (scipy loggamma)."""
    from scipy.special import loggamma
    return complex(loggamma(complex(z)))


def gamma_c(z: complex) -> complex:
    from scipy.special import gamma
    return complex(gamma(complex(z)))


__all__ = ["besselk", "besselk_scaled", "log_besselk_asym", "log_gamma",
           "gamma_c", "gammaln"]
