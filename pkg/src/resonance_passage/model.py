"""One-frequency resonant Hamiltonian systems.

The Hamiltonian is ``H = omega(tau) * I + eps * H1(I, phi, tau)`` with

    H1 = a0(I, tau) + sum_k [a_k(I, tau) cos(k phi) + b_k(I, tau) sin(k phi)]

stored as a finite Fourier series whose coefficients are arbitrary
(vectorised) functions of the action and the slow time.  Everything the
predictor needs from averaging theory (u1, v1, <H1~^2> and its
I-derivatives, dR2/dI) is computed harmonic by harmonic from these
coefficients.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    ConfigurationError,
    DegenerateResonanceError,
    DomainError,
    ResonanceSingularityError,
)

OMEGA_FLOOR = 1e-12
OMEGA_PRIME_FLOOR = 1e-8
_ROOT_SCAN_POINTS = 2001

Interval = tuple  # (lo, hi), closed


def _fd_step(I, order):
    scale = np.maximum(1.0, np.abs(I))
    return (1e-4 if order <= 2 else 1e-3) * scale


def finite_difference(f, I, tau, order):
    """Central finite-difference I-derivative of ``f(I, tau)`` (order 1..3)."""
    I = np.asarray(I, dtype=float)
    h = _fd_step(I, order)
    if order == 1:
        return (f(I + h, tau) - f(I - h, tau)) / (2 * h)
    if order == 2:
        return (f(I + h, tau) - 2 * f(I, tau) + f(I - h, tau)) / h**2
    if order == 3:
        return (f(I + 2 * h, tau) - 2 * f(I + h, tau)
                + 2 * f(I - h, tau) - f(I - 2 * h, tau)) / (2 * h**3)
    raise ValueError(f"unsupported derivative order {order}")


@dataclass(frozen=True)
class CoefficientFunction:
    """A coefficient ``c(I, tau)`` with optional analytic I-derivatives.

    ``derivatives[j]`` is the analytic (j+1)-th I-derivative, or None.
    Missing entries fall back to central finite differences.
    """

    value: Callable
    derivatives: tuple = ()

    def __call__(self, I, tau):
        return self.value(I, tau)

    def has_analytic(self, order):
        return order == 0 or (len(self.derivatives) >= order
                              and self.derivatives[order - 1] is not None)

    def dI(self, I, tau, order=1, analytic=True):
        if order == 0:
            return self.value(I, tau)
        if analytic and self.has_analytic(order):
            return self.derivatives[order - 1](I, tau)
        return finite_difference(self.value, I, tau, order)


def _as_coefficient(c):
    if c is None or isinstance(c, CoefficientFunction):
        return c
    return CoefficientFunction(c)


@dataclass(frozen=True)
class HarmonicCoefficient:
    """Harmonic ``k``: ``a(I, tau) cos(k phi) + b(I, tau) sin(k phi)``.

    A missing ``a`` or ``b`` is an identically zero coefficient.
    """

    k: int
    a: Optional[CoefficientFunction] = None
    b: Optional[CoefficientFunction] = None

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ConfigurationError(f"harmonic index must be a positive integer, got {self.k!r}")
        object.__setattr__(self, "a", _as_coefficient(self.a))
        object.__setattr__(self, "b", _as_coefficient(self.b))

    def coefficients(self, I, tau, order=0):
        """(a, b) or their ``order``-th I-derivatives; zeros for missing parts."""
        a = 0.0 if self.a is None else self.a.dI(I, tau, order)
        b = 0.0 if self.b is None else self.b.dI(I, tau, order)
        return a, b


@dataclass(frozen=True)
class FrequencyProfile:
    omega: Callable
    omega_prime: Callable
    omega_antiderivative: Optional[Callable] = None

    def max_abs(self, window, points=1001):
        taus = np.linspace(window[0], window[1], points)
        return float(np.max(np.abs(self.omega(taus))))


@dataclass(frozen=True)
class ResonanceGeometry:
    tau_star: float
    omega_prime_star: float
    tau_minus: float
    tau_plus: float
    symmetric: bool

    @property
    def window(self):
        return (self.tau_minus, self.tau_plus)

    def fast_times(self, eps):
        """(t-, t*, t+) for a given eps."""
        return self.tau_minus / eps, self.tau_star / eps, self.tau_plus / eps


@dataclass(frozen=True)
class HarmonicModel:
    frequency: FrequencyProfile
    harmonics: tuple = ()
    mean: Optional[CoefficientFunction] = None
    domain_I: Interval = (-math.inf, math.inf)
    domain_tau: Interval = (-math.inf, math.inf)
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "harmonics", tuple(self.harmonics))
        object.__setattr__(self, "mean", _as_coefficient(self.mean))
        ks = [h.k for h in self.harmonics]
        if len(set(ks)) != len(ks):
            raise ConfigurationError(f"duplicate harmonic indices {ks}")
        if all(map(math.isfinite, self.domain_tau)):
            _validate_single_root(self.frequency, self.domain_tau)

    @property
    def is_zero(self):
        return self.mean is None and all(h.a is None and h.b is None for h in self.harmonics)

    def check_domain(self, I, tau):
        for name, value, (lo, hi) in (("I", I, self.domain_I), ("tau", tau, self.domain_tau)):
            arr = np.asarray(value, dtype=float)
            bad = ~((arr >= lo) & (arr <= hi))
            if np.any(bad):
                offending = arr[bad].flat[0] if arr.ndim else float(arr)
                raise DomainError(name, float(offending), (lo, hi))

    def omega_checked(self, tau):
        w = self.frequency.omega(tau)
        if np.any(np.abs(w) <= OMEGA_FLOOR):
            tau_arr = np.broadcast_to(np.asarray(tau, dtype=float), np.shape(w))
            i = np.argmin(np.abs(np.asarray(w)))
            raise ResonanceSingularityError(float(np.ravel(tau_arr)[i]), float(np.ravel(w)[i]))
        return w

    def flow(self, I, phi, tau):
        """(dH1/dphi, dH1/dI) without domain checks; the integrator's hot path."""
        dphi = 0.0
        dI = 0.0 if self.mean is None else self.mean.dI(I, tau, 1)
        for h in self.harmonics:
            kphi = h.k * phi
            c, s = np.cos(kphi), np.sin(kphi)
            if h.a is not None:
                dphi = dphi - h.k * h.a(I, tau) * s
                dI = dI + h.a.dI(I, tau, 1) * c
            if h.b is not None:
                dphi = dphi + h.k * h.b(I, tau) * c
                dI = dI + h.b.dI(I, tau, 1) * s
        return dphi, dI


def _bisect(f, lo, hi, tol=1e-14):
    flo = f(lo)
    while True:
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if abs(fmid) < tol or hi - lo < tol or mid in (lo, hi):
            return mid
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi = mid


def _validate_single_root(freq, interval):
    taus = np.linspace(interval[0], interval[1], _ROOT_SCAN_POINTS)
    signs = np.sign(freq.omega(taus))
    nonzero = signs[signs != 0]
    changes = int(np.count_nonzero(np.diff(nonzero)))
    if changes != 1:
        raise ConfigurationError(
            f"frequency must have exactly one root in tau domain {interval}, found {changes} sign changes")
    i = int(np.flatnonzero(np.diff(np.sign(freq.omega(taus))) != 0)[0])
    root = _bisect(lambda t: float(freq.omega(t)), float(taus[i]), float(taus[i + 1]))
    slope = float(freq.omega_prime(root))
    if abs(slope) <= OMEGA_PRIME_FLOOR:
        raise DegenerateResonanceError(f"omega'(tau*) = {slope!r} at tau* = {root!r}")


# --- perturbation evaluators -------------------------------------------------

def eval_h1(model, I, phi, tau):
    model.check_domain(I, tau)
    out = 0.0 if model.mean is None else model.mean(I, tau)
    return out + h1_tilde(model, I, phi, tau, check=False)


def eval_dh1_dphi(model, I, phi, tau):
    model.check_domain(I, tau)
    return model.flow(I, phi, tau)[0]


def eval_dh1_dI(model, I, phi, tau):
    model.check_domain(I, tau)
    return model.flow(I, phi, tau)[1]


def mean_h1(model, I, tau, order=0):
    """H1-bar (the phi-average) or its I-derivative."""
    model.check_domain(I, tau)
    if model.mean is None:
        return np.zeros(np.broadcast(np.asarray(I), np.asarray(tau)).shape)[()]
    return model.mean.dI(I, tau, order)


def h1_tilde(model, I, phi, tau, order=0, check=True):
    """Zero-mean part H1~ = H1 - H1-bar, or its ``order``-th I-derivative."""
    if check:
        model.check_domain(I, tau)
    out = 0.0
    for h in model.harmonics:
        a, b = h.coefficients(I, tau, order)
        out = out + a * np.cos(h.k * phi) + b * np.sin(h.k * phi)
    return out


def u1(model, I, phi, tau):
    model.check_domain(I, tau)
    return h1_tilde(model, I, phi, tau, check=False) / model.omega_checked(tau)


def v1(model, I, phi, tau):
    """Zero-mean phi-antiderivative of -du1/dI, summed per harmonic."""
    model.check_domain(I, tau)
    w = model.omega_checked(tau)
    out = 0.0
    for h in model.harmonics:
        da, db = h.coefficients(I, tau, 1)
        out = out + (db * np.cos(h.k * phi) - da * np.sin(h.k * phi)) / h.k
    return out / w


def m2(model, I, tau, order=0):
    """<H1~^2> over phi (Parseval) and its I-derivatives up to order 3."""
    model.check_domain(I, tau)
    total = 0.0
    for h in model.harmonics:
        for c in (h.a, h.b):
            if c is None:
                continue
            if order == 0:
                total = total + 0.5 * c(I, tau) ** 2
            elif order == 1:
                total = total + c(I, tau) * c.dI(I, tau, 1)
            elif order == 2:
                total = total + c.dI(I, tau, 1) ** 2 + c(I, tau) * c.dI(I, tau, 2)
            elif order == 3:
                total = total + 3 * c.dI(I, tau, 1) * c.dI(I, tau, 2) + c(I, tau) * c.dI(I, tau, 3)
            else:
                raise ValueError(f"unsupported derivative order {order}")
    return total


def m2_dI2(model, I, tau):
    return m2(model, I, tau, 2)


def m2_dI3(model, I, tau):
    return m2(model, I, tau, 3)


def r2(model, I, tau):
    """R2 = -(1 / 2 omega) d<H1~^2>/dI."""
    return -m2(model, I, tau, 1) / (2 * model.omega_checked(tau))


def r2_dI(model, I, tau):
    return -m2(model, I, tau, 2) / (2 * model.omega_checked(tau))


def find_resonance(model, window):
    """Locate the resonance tau* inside ``window`` by bisection."""
    lo, hi = float(window[0]), float(window[1])
    omega = model.frequency.omega
    wlo, whi = float(omega(lo)), float(omega(hi))
    if not wlo * whi < 0:
        raise ConfigurationError(
            f"omega has no sign change on [{lo}, {hi}]: omega={wlo!r}, {whi!r}")
    tau_star = _bisect(lambda t: float(omega(t)), lo, hi)
    slope = float(model.frequency.omega_prime(tau_star))
    if abs(slope) <= OMEGA_PRIME_FLOOR:
        raise DegenerateResonanceError(f"omega'(tau*) = {slope!r} at tau* = {tau_star!r}")
    symmetric = abs((hi - tau_star) - (tau_star - lo)) <= 1e-12
    return ResonanceGeometry(tau_star, slope, lo, hi, symmetric)


# --- built-in models ---------------------------------------------------------

def _exp_shift_omega(tau):
    return np.exp(np.asarray(tau, dtype=float) - 1.0) - 1.0


def _exp_shift_omega_prime(tau):
    return np.exp(np.asarray(tau, dtype=float) - 1.0)


def _exp_shift_antiderivative(tau):
    return np.exp(np.asarray(tau, dtype=float) - 1.0) - tau


def _profile(tau):
    return 1.0 / np.sqrt(np.exp(np.asarray(tau, dtype=float) - 1.0) + 1.0)


def _amp(I, tau):
    return I * np.sqrt(4.0 - I) * _profile(tau)


def _amp_dI(I, tau):
    r = np.sqrt(4.0 - I)
    return (8.0 - 3.0 * I) / (2.0 * r) * _profile(tau)


def _amp_dI2(I, tau):
    return (3.0 * I - 16.0) / (4.0 * (4.0 - I) ** 1.5) * _profile(tau)


def _amp_dI3(I, tau):
    return 3.0 * (I - 8.0) / (8.0 * (4.0 - I) ** 2.5) * _profile(tau)


EXP_SHIFT_FREQUENCY = FrequencyProfile(
    _exp_shift_omega, _exp_shift_omega_prime, _exp_shift_antiderivative)

PAPER_WINDOW = (0.0, 2.0)


def paper_example_model(analytic_derivatives=True):
    """omega = e^(tau-1) - 1, H1 = I sqrt(4 - I) sin(phi) / sqrt(e^(tau-1) + 1)."""
    derivs = (_amp_dI, _amp_dI2, _amp_dI3) if analytic_derivatives else ()
    return HarmonicModel(
        frequency=EXP_SHIFT_FREQUENCY,
        harmonics=(HarmonicCoefficient(1, b=CoefficientFunction(_amp, derivs)),),
        domain_I=(0.0, 3.9),
        domain_tau=(-0.5, 2.5),
        name="paper-example",
    )


def zero_model():
    """Same frequency as the builtin worked example, H1 identically zero."""
    return HarmonicModel(frequency=EXP_SHIFT_FREQUENCY, domain_I=(0.0, 3.9),
                         domain_tau=(-0.5, 2.5), name="zero")


BUILTIN_MODELS = {
    "paper-example": paper_example_model,
    "zero": zero_model,
}
