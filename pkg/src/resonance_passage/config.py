"""Run configuration and the JSON model schema.

A model is either a builtin name ("paper-example", "zero") or an inline
``polynomial-harmonics`` description in which every coefficient is a
polynomial in I times a tau-profile from a fixed catalogue::

    {"kind": "polynomial-harmonics",
     "frequency": {"profile": "exp_shift", "shift": 1.0},
     "mean": {"poly": [0.0, 0.5], "profile": "constant"},
     "harmonics": [{"k": 1, "a": {"poly": [0, 0, 1], "profile": "inv_sqrt_exp"}}],
     "domain_I": [0.0, 4.0], "domain_tau": [-0.5, 2.5]}
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

from . import model as mdl
from .errors import ConfigurationError
from .experiment import FAST_EPS, FAST_PHASES, PAPER_EPS


# --- tau profiles ------------------------------------------------------------

@dataclass(frozen=True)
class TauProfile:
    kind: str
    shift: float = 1.0

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        if self.kind == "constant":
            return np.ones_like(tau)[()]
        if self.kind == "exp_shift":
            return np.exp(tau - self.shift)
        if self.kind == "inv_sqrt_exp":
            return 1.0 / np.sqrt(np.exp(tau - self.shift) + 1.0)
        raise ConfigurationError(f"unknown tau profile {self.kind!r}")


TAU_PROFILES = ("constant", "exp_shift", "inv_sqrt_exp")


@dataclass(frozen=True)
class PolyTimesProfile:
    """c(I, tau) = p(I) * f(tau)."""

    poly: Polynomial
    profile: TauProfile

    def __call__(self, I, tau):
        return self.poly(np.asarray(I, dtype=float)) * self.profile(tau)


def _coefficient(spec, where):
    if spec is None:
        return None
    if not isinstance(spec, dict):
        raise ConfigurationError(f"{where}: coefficient must be an object")
    _reject_unknown(spec, {"poly", "profile", "shift"}, where)
    if "poly" not in spec:
        raise ConfigurationError(f"{where}: missing 'poly'")
    coeffs = [float(c) for c in spec["poly"]]
    kind = spec.get("profile", "constant")
    if kind not in TAU_PROFILES:
        raise ConfigurationError(f"{where}: unknown tau profile {kind!r}; choose from {TAU_PROFILES}")
    profile = TauProfile(kind, float(spec.get("shift", 1.0)))
    poly = Polynomial(coeffs)
    derivs = tuple(PolyTimesProfile(poly.deriv(n), profile) for n in (1, 2, 3))
    return mdl.CoefficientFunction(PolyTimesProfile(poly, profile), derivs)


# --- frequency profiles ------------------------------------------------------

@dataclass(frozen=True)
class ExpShiftFrequency:
    shift: float

    def omega(self, tau):
        return np.exp(np.asarray(tau, dtype=float) - self.shift) - 1.0

    def omega_prime(self, tau):
        return np.exp(np.asarray(tau, dtype=float) - self.shift)

    def antiderivative(self, tau):
        return np.exp(np.asarray(tau, dtype=float) - self.shift) - tau


@dataclass(frozen=True)
class LinearFrequency:
    slope: float
    root: float

    def omega(self, tau):
        return self.slope * (np.asarray(tau, dtype=float) - self.root)

    def omega_prime(self, tau):
        return self.slope + 0.0 * np.asarray(tau, dtype=float)

    def antiderivative(self, tau):
        return 0.5 * self.slope * (np.asarray(tau, dtype=float) - self.root) ** 2


def _frequency(spec):
    if not isinstance(spec, dict):
        raise ConfigurationError("frequency must be an object")
    kind = spec.get("profile")
    if kind == "exp_shift":
        _reject_unknown(spec, {"profile", "shift"}, "frequency")
        f = ExpShiftFrequency(float(spec.get("shift", 1.0)))
    elif kind == "linear":
        _reject_unknown(spec, {"profile", "slope", "root"}, "frequency")
        f = LinearFrequency(float(spec.get("slope", 1.0)), float(spec.get("root", 1.0)))
    else:
        raise ConfigurationError(f"unknown frequency profile {kind!r}; choose exp_shift or linear")
    return mdl.FrequencyProfile(f.omega, f.omega_prime, f.antiderivative)


MODEL_KEYS = {"kind", "frequency", "mean", "harmonics", "domain_I", "domain_tau"}


def build_model(spec):
    """HarmonicModel from a builtin name or a polynomial-harmonics object."""
    if isinstance(spec, str):
        try:
            return mdl.BUILTIN_MODELS[spec]()
        except KeyError:
            raise ConfigurationError(
                f"unknown builtin model {spec!r}; choose from {sorted(mdl.BUILTIN_MODELS)}") from None
    if not isinstance(spec, dict):
        raise ConfigurationError("model must be a builtin name or an object")
    if set(spec) == {"name"}:
        return build_model(spec["name"])
    _reject_unknown(spec, MODEL_KEYS, "model")
    if spec.get("kind") != "polynomial-harmonics":
        raise ConfigurationError(f"unsupported model kind {spec.get('kind')!r}")
    harmonics = []
    for i, h in enumerate(spec.get("harmonics", [])):
        _reject_unknown(h, {"k", "a", "b"}, f"harmonics[{i}]")
        harmonics.append(mdl.HarmonicCoefficient(
            int(h["k"]), _coefficient(h.get("a"), f"harmonics[{i}].a"),
            _coefficient(h.get("b"), f"harmonics[{i}].b")))
    return mdl.HarmonicModel(
        frequency=_frequency(spec.get("frequency")),
        harmonics=tuple(harmonics),
        mean=_coefficient(spec.get("mean"), "mean"),
        domain_I=_interval(spec.get("domain_I", [-math.inf, math.inf]), "domain_I"),
        domain_tau=_interval(spec.get("domain_tau", [-0.5, 2.5]), "domain_tau"),
        name="polynomial-harmonics",
    )


def _interval(value, where):
    try:
        lo, hi = (float(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{where} must be a [lo, hi] pair") from None
    if not lo < hi:
        raise ConfigurationError(f"{where}: need lo < hi, got {value!r}")
    return (lo, hi)


def _reject_unknown(spec, allowed, where):
    unknown = set(spec) - set(allowed)
    if unknown:
        raise ConfigurationError(f"{where}: unknown keys {sorted(unknown)}")


# --- run configuration -------------------------------------------------------

@dataclass
class RunConfig:
    model: object = "paper-example"
    window: list = field(default_factory=lambda: list(mdl.PAPER_WINDOW))
    I0: float = 1.0
    eps: float = 0.01
    eps_list: list = field(default_factory=lambda: list(PAPER_EPS))
    phi0: float = 0.0
    n_phases: int = 48
    step: Optional[float] = None
    threads: int = 1
    fast: bool = False
    dense: int = 0
    out: str = "results"

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigurationError("config must be a JSON object")
        _reject_unknown(data, {f.name for f in fields(cls)}, "config")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path):
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def validate(self):
        self.window = list(_interval(self.window, "window"))
        self.eps_list = [float(e) for e in self.eps_list]
        if not self.eps_list:
            raise ConfigurationError("eps_list is empty")
        if not 0 < float(self.eps) <= 0.1:
            raise ConfigurationError(f"eps must lie in (0, 0.1], got {self.eps!r}")
        if int(self.n_phases) < 2:
            raise ConfigurationError("n_phases must be >= 2")
        if int(self.threads) < 1:
            raise ConfigurationError("threads must be >= 1")
        if self.step is not None and not float(self.step) > 0:
            raise ConfigurationError("step must be positive")
        build_model(self.model)
        return self

    def sweep_config(self):
        from .experiment import SweepConfig

        if self.fast:
            n, eps = FAST_PHASES, FAST_EPS
        else:
            n, eps = self.n_phases, tuple(self.eps_list)
        return SweepConfig(n_phases=int(n), eps_values=tuple(eps), model=build_model(self.model),
                           window=tuple(self.window), I0=float(self.I0), step=self.step,
                           workers=int(self.threads))
