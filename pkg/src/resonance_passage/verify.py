"""Self-check suite behind ``resonance-passage verify``."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import model as mdl
from .experiment import FAST_EPS, FAST_PHASES, SweepConfig, run_sweep
from .oscint import PvIntegrand, pv_exclusion, pv_integral, theta_integral_dI, theta_integral_dphi, theta_quadrature
from .predictor import PredictionInputs, check_phi_plus, check_phi_star, check_phi_star_double, predict_corollary1

TOL_ENV = "RESONANCE_VERIFY_TOL_SCALE"


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def _scale():
    return float(os.environ.get(TOL_ENV, "1"))


def _close(name, got, want, tol, label=None):
    err = abs(got - want)
    ok = err <= tol * _scale()
    return Check(name, ok, label if ok and label else f"got {got:.12g}, want {want:.12g}, err {err:.2e}")


def random_harmonic_model(rng, n_harmonics):
    """Single- or multi-harmonic model with random polynomial-in-I coefficients."""
    from .config import build_model

    harmonics = []
    for k in rng.choice(np.arange(1, 5), size=n_harmonics, replace=False):
        harmonics.append({
            "k": int(k),
            "a": {"poly": rng.uniform(-1, 1, 3).tolist(), "profile": "inv_sqrt_exp"},
            "b": {"poly": rng.uniform(-1, 1, 3).tolist(), "profile": "exp_shift"},
        })
    return build_model({
        "kind": "polynomial-harmonics",
        "frequency": {"profile": "linear", "slope": float(rng.uniform(0.3, 3.0)), "root": 1.0},
        "harmonics": harmonics,
        "domain_I": [0.0, 4.0],
        "domain_tau": [-0.5, 2.5],
    })


def theta_oracle_errors(n_models=50, seed=0):
    """Max |closed form - numeric quadrature| for both theta integrals on random models."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(n_models):
        m = random_harmonic_model(rng, 1 + i % 2)
        geom = mdl.find_resonance(m, (0.0, 2.0))
        I = float(rng.uniform(0.2, 3.0))
        phi = float(rng.uniform(0, 2 * np.pi))
        ts, wp = geom.tau_star, geom.omega_prime_star

        def dphi(p):
            return m.flow(I, p, ts)[0]

        def dI(p):
            return mdl.h1_tilde(m, I, p, ts, order=1, check=False)

        closed = (theta_integral_dphi(m, I, phi, ts, wp), theta_integral_dI(m, I, phi, ts, wp))
        numeric = (theta_quadrature(dphi, phi, wp), theta_quadrature(dI, phi, wp))
        worst = max(worst, *(abs(c - n) for c, n in zip(closed, numeric)))
    return worst


def paper_pv_integrand(I=1.0):
    m = mdl.paper_example_model()
    return PvIntegrand(lambda t: -0.5 * float(mdl.m2_dI2(m, I, t)), m.frequency.omega, 1.0, 1.0)


def closed_form_checks(eps=0.01, phi_minus=0.3):
    m = mdl.paper_example_model()
    inp = PredictionInputs.build(m, eps, 1.0, phi_minus, mdl.PAPER_WINDOW)
    e = math.e
    pcc = check_phi_star_double(inp)
    want_star = (pcc + 5 * math.sqrt(math.pi * eps) / (4 * math.sqrt(6)) * (math.cos(pcc) + math.sin(pcc))
                 + eps * math.log(eps) / 8)
    pv = eps * pv_integral(paper_pv_integrand(), mdl.PAPER_WINDOW)
    return [
        _close("phi_plus_check", check_phi_plus(inp) - phi_minus, (e - 1 / e - 2) / eps, 1e-10 * 36),
        _close("phi_star_check2", pcc - phi_minus, -1 / (eps * e), 1e-10 * 37),
        _close("phi_star_check", check_phi_star(inp), want_star, 1e-10 * 37),
        _close("m2_dI2", float(mdl.m2_dI2(m, 1.0, 1.0)), 0.5, 1e-10 * 0.5),
        _close("m2_dI3", float(mdl.m2_dI3(m, 1.0, 1.0)), -1.5, 1e-10 * 1.5),
        _close("pv_example", pv, eps / 2, 1e-10 * eps / 2, label="ε/2"),
    ]


def numeric_checks():
    worst = theta_oracle_errors()
    pv_sub = pv_integral(paper_pv_integrand(), mdl.PAPER_WINDOW)
    pv_exc = pv_exclusion(paper_pv_integrand(), mdl.PAPER_WINDOW)
    return [
        Check("theta_oracle", worst <= 1e-5 * _scale(), f"max deviation {worst:.2e} over 50 models"),
        _close("pv_exclusion", pv_sub, pv_exc, 1e-8),
    ]


def zero_model_checks():
    m = mdl.zero_model()
    table = run_sweep(SweepConfig(n_phases=3, eps_values=(0.02,), model=m))
    worst = max(max(c.errors.values()) for c in table.cells)
    rep = predict_corollary1(PredictionInputs.build(m, 0.02, 1.0, 0.4, mdl.PAPER_WINDOW))
    return [Check("zero_model", worst == 0.0 and rep.I_plus == 1.0, f"max error {worst!r}")]


def ratio_checks(n_phases=FAST_PHASES, eps_values=FAST_EPS):
    table = run_sweep(SweepConfig(n_phases=n_phases, eps_values=eps_values))
    out = []
    for name, lo, hi in (("E_I_star", 1.4, 2.6), ("E_phi_star", 1.4, 2.6),
                         ("R1_I", 2.5, math.inf)):
        r = table.ratios(name)
        ok = bool(np.all((r >= lo) & (r <= hi)))
        out.append(Check(f"ratio_{name}", ok, "ratios " + ", ".join(f"{x:.3f}" for x in r)))
    fit = table.fits["E_I"]
    out.append(Check("slope_E_I_fast", 1.35 <= fit.slope <= 1.75, f"slope {fit.slope:.3f}"))
    return out


def run_all(include_simulation=True):
    checks = closed_form_checks() + numeric_checks() + zero_model_checks()
    if include_simulation:
        checks += ratio_checks()
    return checks


def format_report(checks):
    return "\n".join(f"{c.name}: {c.detail} {'OK' if c.passed else 'FAIL'}" for c in checks)
