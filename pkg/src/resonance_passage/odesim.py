"""Brute-force reference integration of the exact equations of motion.

The state is (I, chi) with the de-rotated phase ``chi = phi - Phi(tau)/eps``,
``Phi(tau) = int_{tau_start}^{tau} omega``, so that

    dI/dt   = -eps dH1/dphi(I, chi + Phi(tau)/eps, tau)
    dchi/dt =  eps dH1/dI  (I, chi + Phi(tau)/eps, tau)

is integrated by classical RK4 with a fixed step in fast time t = tau/eps.
Many initial conditions are advanced together as numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BlowUpError, ConfigurationError, DomainError, TrajectoryError
from .oscint import adaptive_integral

MAX_STEPS = 2 * 10**8
STEPS_PER_OSCILLATION = 400
_CHECK_EVERY = 4096


@dataclass(frozen=True)
class SimConfig:
    eps: float
    I0: float
    phi0: float
    tau_start: float
    tau_end: float
    sample_taus: tuple = ()
    h: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "sample_taus", tuple(float(t) for t in self.sample_taus))
        if not 0 < self.eps <= 0.1:
            raise ConfigurationError(f"eps must lie in (0, 0.1], got {self.eps!r}")
        if self.h is not None and not self.h > 0:
            raise ConfigurationError(f"step must be positive, got {self.h!r}")
        if self.tau_start == self.tau_end:
            raise ConfigurationError("empty integration window")
        lo, hi = sorted((self.tau_start, self.tau_end))
        for t in self.sample_taus:
            if not lo <= t <= hi:
                raise ConfigurationError(f"sampling time {t!r} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class TrajectorySample:
    tau: float
    I: float
    chi: float
    phi: float


def default_step(model, window, eps):
    """2 pi / (400 (1 + max|omega|)), raised if the step budget would be exceeded."""
    w_max = model.frequency.max_abs(window)
    h = 2 * math.pi / (STEPS_PER_OSCILLATION * (1.0 + w_max))
    span = abs(window[1] - window[0]) / eps
    return max(h, span / MAX_STEPS)


def phase_accumulator(model, tau, tau_start):
    """Phi(tau) = integral of omega from tau_start to tau."""
    lo, hi = model.domain_tau
    if not lo <= tau <= hi:
        raise DomainError("tau", float(tau), (lo, hi))
    F = model.frequency.omega_antiderivative
    if F is not None:
        return float(F(tau) - F(tau_start))
    omega = model.frequency.omega
    return adaptive_integral(lambda t: float(omega(t)), tau_start, tau)


class _Phase:
    """Phi(tau)/eps along the run, closed form or carried as an extra state."""

    def __init__(self, model, tau_start, eps):
        self.F = model.frequency.omega_antiderivative
        self.omega = model.frequency.omega
        self.tau_start = tau_start
        self.eps = eps
        if self.F is not None:
            self.F0 = float(self.F(tau_start))

    @property
    def closed_form(self):
        return self.F is not None

    def __call__(self, tau, carried):
        if self.F is not None:
            return (self.F(tau) - self.F0) / self.eps
        return carried


def integrate_batch(model, eps, I0, phi0, tau_start, tau_end, sample_taus, h=None):
    """Integrate many initial conditions in lockstep.

    Returns ``(I, chi, phi)`` arrays of shape (len(sample_taus), n) with the
    samples in the order requested.
    """
    I = np.array(I0, dtype=float, ndmin=1)
    chi = np.array(phi0, dtype=float, ndmin=1)
    I, chi = np.broadcast_arrays(I, chi)
    I, chi = I.copy(), chi.copy()
    n = I.size
    if h is None:
        h = default_step(model, (tau_start, tau_end), eps)
    direction = 1.0 if tau_end > tau_start else -1.0
    step = direction * h
    model.check_domain(I, tau_start)

    phase = _Phase(model, tau_start, eps)
    theta = np.zeros(n)  # carried Phi/eps when there is no closed form
    omega = model.frequency.omega

    def rhs(s, I, chi, theta):
        tau = tau_start + eps * s
        phi = chi + phase(tau, theta)
        dphi, dI = model.flow(I, phi, tau)
        dtheta = 0.0 if phase.closed_form else omega(tau)
        return -eps * dphi, eps * dI, dtheta

    def rk4(s, dt, I, chi, theta):
        a1, b1, c1 = rhs(s, I, chi, theta)
        half = 0.5 * dt
        a2, b2, c2 = rhs(s + half, I + half * a1, chi + half * b1, theta + half * c1)
        a3, b3, c3 = rhs(s + half, I + half * a2, chi + half * b2, theta + half * c2)
        a4, b4, c4 = rhs(s + dt, I + dt * a3, chi + dt * b3, theta + dt * c3)
        sixth = dt / 6.0
        return (I + sixth * (a1 + 2 * a2 + 2 * a3 + a4),
                chi + sixth * (b1 + 2 * b2 + 2 * b3 + b4),
                theta + sixth * (c1 + 2 * c2 + 2 * c3 + c4))

    def validate(s, I, chi, last):
        if not (np.all(np.isfinite(I)) and np.all(np.isfinite(chi))):
            raise BlowUpError(f"non-finite state at tau={tau_start + eps * s!r}", last)
        try:
            model.check_domain(I, tau_start + eps * s)
        except DomainError as exc:
            raise TrajectoryError(f"trajectory left the domain: {exc}", last) from exc

    order = sorted(range(len(sample_taus)), key=lambda j: direction * sample_taus[j])
    out_I = np.empty((len(sample_taus), n))
    out_chi = np.empty_like(out_I)
    out_phi = np.empty_like(out_I)

    n_done = 0          # full steps taken from tau_start
    s = 0.0
    last_valid = (tau_start, I.copy(), chi.copy())
    for j in order:
        target = (sample_taus[j] - tau_start) / eps
        n_full = int(math.floor(abs(target) / h * (1 + 1e-15)))
        while n_done < n_full:
            chunk = min(_CHECK_EVERY, n_full - n_done)
            for _ in range(chunk):
                I, chi, theta = rk4(s, step, I, chi, theta)
                n_done += 1
                s = n_done * step
            validate(s, I, chi, last_valid)
            last_valid = (tau_start + eps * s, I.copy(), chi.copy())
        rest = target - s
        if abs(rest) > 1e-12 * h:
            # split step lands exactly on the sampling time; the grid is not advanced
            Is, chis, thetas = rk4(s, rest, I, chi, theta)
        else:
            Is, chis, thetas = I, chi, theta
        validate(target, Is, chis, last_valid)
        tau_j = sample_taus[j]
        out_I[j] = Is
        out_chi[j] = chis
        if phase.closed_form:
            out_phi[j] = chis + phase(tau_j, None)
        else:
            out_phi[j] = chis + phase_accumulator(model, tau_j, tau_start) / eps
    return out_I, out_chi, out_phi


def integrate(model, cfg: SimConfig):
    """Single trajectory; returns one TrajectorySample per requested time."""
    I, chi, phi = integrate_batch(model, cfg.eps, cfg.I0, cfg.phi0, cfg.tau_start, cfg.tau_end,
                                  cfg.sample_taus, cfg.h)
    return [TrajectorySample(t, float(I[j, 0]), float(chi[j, 0]), float(phi[j, 0]))
            for j, t in enumerate(cfg.sample_taus)]


def write_trajectory_csv(path, samples: Sequence[TrajectorySample]):
    with open(path, "w") as fh:
        fh.write("tau,I,chi,phi\n")
        for smp in samples:
            fh.write(f"{smp.tau:.17g},{smp.I:.17g},{smp.chi:.17g},{smp.phi:.17g}\n")
