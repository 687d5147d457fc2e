"""Fresnel-type theta integrals across the resonance and the p.v. tau integral.

Near the resonance the phase is ``phi* + (omega'*/2) theta^2``; integrals of
harmonic functions of that phase over the whole theta line have closed
forms.  The numeric quadrature here is an independent cross-check only.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import AccuracyError, ConfigurationError

QUAD_ABS_TOL = 1e-12
QUAD_REL_TOL = 1e-12
QUAD_LIMIT = 2**15
QUAD_ACCEPT = 1e-9


@dataclass(frozen=True)
class FresnelKernel:
    curvature: float
    k: int = 1

    def __post_init__(self):
        if not self.curvature > 0:
            raise ConfigurationError(f"Fresnel curvature must be positive, got {self.curvature!r}")
        if self.k < 1:
            raise ConfigurationError(f"harmonic index must be >= 1, got {self.k!r}")

    def integrals(self, phase):
        """Full-line integrals of cos and sin of ``k*(phase + curvature*theta^2)``."""
        root = fresnel_pair(self.k * self.curvature)[0]
        kp = self.k * phase
        return root * (np.cos(kp) - np.sin(kp)), root * (np.sin(kp) + np.cos(kp))


@dataclass(frozen=True)
class PvIntegrand:
    """Integrand ``g(tau) / omega(tau)`` with a simple pole at ``pole``."""

    g: Callable
    omega: Callable
    pole: float
    residue_slope: float


def fresnel_pair(c):
    """Full-line integrals of cos(c theta^2) and sin(c theta^2)."""
    if not c > 0:
        raise ConfigurationError(f"Fresnel curvature must be positive, got {c!r}")
    v = math.sqrt(math.pi / (2.0 * c))
    return v, v


def _check_orientation(omega_prime_star):
    if not omega_prime_star > 0:
        raise ConfigurationError(
            f"only omega'* > 0 is supported (got {omega_prime_star!r})")


def theta_integral_dphi(model, I, phi_star, tau_star, omega_prime_star):
    """Integral over theta of dH1/dphi at phase phi* + (omega'*/2) theta^2."""
    _check_orientation(omega_prime_star)
    model.check_domain(I, tau_star)
    total = 0.0
    for h in model.harmonics:
        a, b = h.coefficients(I, tau_star)
        c_int, s_int = FresnelKernel(omega_prime_star / 2, h.k).integrals(phi_star)
        # d/dphi (a cos k phi + b sin k phi) = k (-a sin + b cos)
        total = total + h.k * (-a * s_int + b * c_int)
    return total


def theta_integral_dI(model, I, phi_star, tau_star, omega_prime_star):
    """Integral over theta of dH1~/dI at phase phi* + (omega'*/2) theta^2."""
    _check_orientation(omega_prime_star)
    model.check_domain(I, tau_star)
    total = 0.0
    for h in model.harmonics:
        da, db = h.coefficients(I, tau_star, 1)
        c_int, s_int = FresnelKernel(omega_prime_star / 2, h.k).integrals(phi_star)
        total = total + da * c_int + db * s_int
    return total


def theta_quadrature(g, phi_star, omega_prime_star, theta_max=80.0, panel=math.pi / 8,
                     nodes=16, fft_points=512):
    """Numeric full-line integral of a zero-mean 2pi-periodic ``g(phase)``.

    The truncated part [-theta_max, theta_max] is done by Gauss-Legendre on
    panels of equal phase increment; the tails use two terms of the
    integration-by-parts expansion, with the antiderivatives of ``g``
    obtained from its FFT.
    """
    c = omega_prime_star / 2
    s_max = c * theta_max**2
    n_panels = int(math.ceil(s_max / panel))
    edges = np.sqrt(np.linspace(0.0, s_max, n_panels + 1) / c)
    x, w = np.polynomial.legendre.leggauss(nodes)
    lo, hi = edges[:-1, None], edges[1:, None]
    theta = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    body = 2.0 * np.sum(0.5 * (hi - lo) * w * g(phi_star + c * theta**2))

    grid = 2 * np.pi * np.arange(fft_points) / fft_points
    coeffs = np.fft.rfft(g(grid)) / fft_points
    if abs(coeffs[0]) > 1e-10 * max(1.0, np.max(np.abs(coeffs))):
        raise ValueError("theta_quadrature needs a zero-mean integrand")
    n = np.arange(coeffs.size)
    n[0] = 1
    psi = phi_star + s_max

    def series(cn):
        cn = cn.copy()
        cn[0] = 0.0
        return float(np.real(cn[0] + 2 * np.sum(cn[1:] * np.exp(1j * n[1:] * psi))))

    g1 = series(coeffs / (1j * n))
    g2 = series(coeffs / (1j * n) ** 2)
    tail = -g1 / (2 * math.sqrt(c * s_max)) - g2 / (4 * math.sqrt(c) * s_max**1.5)
    return body + 2.0 * tail


def _quad(f, a, b):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(f, a, b, epsabs=QUAD_ABS_TOL, epsrel=QUAD_REL_TOL,
                                      limit=QUAD_LIMIT)
        except integrate.IntegrationWarning as exc:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                val, err = integrate.quad(f, a, b, epsabs=QUAD_ABS_TOL, epsrel=QUAD_REL_TOL,
                                          limit=QUAD_LIMIT)
            if err > QUAD_ACCEPT:
                raise AccuracyError(f"quadrature on [{a}, {b}]: {exc}", val, err) from None
    return val, err


def adaptive_integral(f, a, b):
    """Adaptive Gauss-Kronrod integral of a smooth scalar function."""
    if a == b:
        return 0.0
    return _quad(f, a, b)[0]


def pv_integral(f: PvIntegrand, window):
    """Principal value of the integral of g/omega over ``window``.

    The pole is subtracted analytically; the smooth remainder is integrated
    adaptively on each side of the pole.
    """
    lo, hi = window
    p = f.pole
    if not lo < p < hi:
        raise ConfigurationError(f"pole {p!r} not interior to window {window!r}")
    g_star = float(f.g(p))
    residue = g_star / f.residue_slope

    def regular(tau):
        d = tau - p
        if d == 0.0:
            return 0.0
        return float(f.g(tau)) / float(f.omega(tau)) - residue / d

    left = _quad(regular, lo, p)[0]
    right = _quad(regular, p, hi)[0]
    return left + right + residue * math.log(abs((hi - p) / (p - lo)))


def pv_exclusion(f: PvIntegrand, window, delta=1e-2):
    """Symmetric-exclusion p.v. with Richardson extrapolation in delta.

    The excluded-interval error is odd in delta (delta, delta^3, ...), so
    three halvings remove the first two terms.
    """
    lo, hi = window
    p = f.pole

    def h(tau):
        return float(f.g(tau)) / float(f.omega(tau))

    def excluded(d):
        return _quad(h, lo, p - d)[0] + _quad(h, p + d, hi)[0]

    return _richardson_odd(excluded(delta), excluded(delta / 2), excluded(delta / 4))


def _richardson_odd(i1, i2, i3):
    # I(d) = P + c1 d + c3 d^3 + ...: first pass removes c1, second removes c3
    r1 = 2 * i2 - i1
    r2 = 2 * i3 - i2
    return (8 * r2 - r1) / 7
