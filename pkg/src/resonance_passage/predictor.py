"""Forward prediction of (I, phi) after passage through the resonance.

Given only pre-resonance data (I-, phi-) at tau-, the check quantities
phi_plus_check, phi_star_check2 (zeroth-order phase at tau*), phi_star_check,
I_star_check and J_plus_check are computed explicitly and substituted into
the post-resonance formulas, which are then accurate to O(eps^(3/2)).
The classical O(eps) jump formula and the mid-resonance estimates are
provided alongside for comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import model as mdl
from .errors import ConfigurationError
from .odesim import phase_accumulator
from .oscint import PvIntegrand, adaptive_integral, pv_integral, theta_integral_dI, theta_integral_dphi

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class PredictionInputs:
    model: mdl.HarmonicModel
    eps: float
    I_minus: float
    phi_minus: float
    geometry: mdl.ResonanceGeometry

    def __post_init__(self):
        g = self.geometry
        if not self.eps > 0:
            raise ConfigurationError(f"eps must be positive, got {self.eps!r}")
        if abs((g.tau_plus - g.tau_star) - (g.tau_star - g.tau_minus)) > SYMMETRY_TOL:
            raise ConfigurationError(
                f"window [{g.tau_minus}, {g.tau_plus}] is not symmetric about tau*={g.tau_star}")
        self.model.check_domain(self.I_minus, g.tau_minus)

    @classmethod
    def build(cls, model, eps, I_minus, phi_minus, window):
        return cls(model, eps, I_minus, phi_minus, mdl.find_resonance(model, window))

    # shorthands used throughout the formulas
    @property
    def tau_minus(self):
        return self.geometry.tau_minus

    @property
    def tau_star(self):
        return self.geometry.tau_star

    @property
    def tau_plus(self):
        return self.geometry.tau_plus

    @property
    def omega_prime_star(self):
        return self.geometry.omega_prime_star

    def jump_dphi(self, I, phi):
        return theta_integral_dphi(self.model, I, phi, self.tau_star, self.omega_prime_star)

    def jump_dI(self, I, phi):
        return theta_integral_dI(self.model, I, phi, self.tau_star, self.omega_prime_star)

    def rotation(self, tau_to, tau_from=None):
        """(1/eps) * integral of omega from ``tau_from`` (default tau-) to ``tau_to``."""
        start = self.tau_minus if tau_from is None else tau_from
        return phase_accumulator(self.model, tau_to, start) / self.eps


@dataclass(frozen=True)
class PredictionReport:
    phi_plus_check: float
    phi_star_check2: float
    phi_star_check: float
    I_star_check: float
    J_minus: float
    J_plus_check: float
    I_plus: float
    phi_plus: float
    I_plus_classical: float
    I_star_estimate: float
    phi_star_estimate: float
    action_terms: dict = field(default_factory=dict)
    angle_terms: dict = field(default_factory=dict)

    def as_row(self):
        """Flat name -> value mapping with every breakdown term."""
        row = {k: v for k, v in self.__dict__.items() if not isinstance(v, dict)}
        row.update({f"I_term.{k}": v for k, v in self.action_terms.items()})
        row.update({f"phi_term.{k}": v for k, v in self.angle_terms.items()})
        return row

    def pretty(self):
        row = self.as_row()
        width = max(map(len, row))
        return "\n".join(f"{k:<{width}}  {v: .17g}" for k, v in row.items())


def reassemble(terms):
    """Sum breakdown terms in their stored order (the order used to build them)."""
    total = 0.0
    for v in terms.values():
        total = total + v
    return total


def mean_dI_integral(model, I, a, b):
    """Integral over tau in [a, b] of dH1-bar/dI at fixed action I."""
    if model.mean is None:
        return 0.0
    return adaptive_integral(lambda t: float(model.mean.dI(I, t, 1)), a, b)


def check_phi_plus(inputs: PredictionInputs):
    m = inputs.model
    return (inputs.phi_minus + inputs.rotation(inputs.tau_plus)
            + mean_dI_integral(m, inputs.I_minus, inputs.tau_minus, inputs.tau_plus))


def check_phi_star_double(inputs: PredictionInputs):
    m = inputs.model
    return (inputs.phi_minus + inputs.rotation(inputs.tau_star)
            + mean_dI_integral(m, inputs.I_minus, inputs.tau_minus, inputs.tau_star))


def _log_term(inputs, I):
    eps = inputs.eps
    return eps * math.log(eps) / (4 * inputs.omega_prime_star) * float(
        mdl.m2_dI2(inputs.model, I, inputs.tau_star))


def check_phi_star(inputs: PredictionInputs, phi_star_check2=None):
    if phi_star_check2 is None:
        phi_star_check2 = check_phi_star_double(inputs)
    half_jump = 0.5 * math.sqrt(inputs.eps) * inputs.jump_dI(inputs.I_minus, phi_star_check2)
    return phi_star_check2 + half_jump + _log_term(inputs, inputs.I_minus)


def check_I_star(inputs: PredictionInputs, phi_star_check):
    I_star = inputs.I_minus - 0.5 * math.sqrt(inputs.eps) * inputs.jump_dphi(
        inputs.I_minus, phi_star_check)
    inputs.model.check_domain(I_star, inputs.tau_star)
    return float(I_star)


def _pv_r2(inputs, I):
    """p.v. eps * integral over the window of dR2/dI at fixed action I."""
    m = inputs.model
    if m.is_zero:
        return 0.0
    integrand = PvIntegrand(
        g=lambda t: -0.5 * float(mdl.m2_dI2(m, I, t)),
        omega=m.frequency.omega,
        pole=inputs.tau_star,
        residue_slope=inputs.omega_prime_star,
    )
    return inputs.eps * pv_integral(integrand, inputs.geometry.window)


def classical_jump(inputs: PredictionInputs, phi_star_check2=None):
    """Unsymmetrised jump formula with the zeroth-order resonance phase."""
    if phi_star_check2 is None:
        phi_star_check2 = check_phi_star_double(inputs)
    return float(inputs.I_minus
                 - math.sqrt(inputs.eps) * inputs.jump_dphi(inputs.I_minus, phi_star_check2))


def predict_corollary1(inputs: PredictionInputs):
    m = inputs.model
    eps = inputs.eps
    sq = math.sqrt(eps)
    I_m, phi_m = inputs.I_minus, inputs.phi_minus
    t_m, t_s, t_p = inputs.tau_minus, inputs.tau_star, inputs.tau_plus

    phi_plus_c = check_phi_plus(inputs)
    phi_star_c2 = check_phi_star_double(inputs)
    phi_star_c = check_phi_star(inputs, phi_star_c2)
    I_star_c = check_I_star(inputs, phi_star_c)

    jump = float(inputs.jump_dphi(I_star_c, phi_star_c))
    J_minus = float(I_m + eps * mdl.u1(m, I_m, phi_m, t_m))
    J_plus_c = J_minus - sq * jump

    action_terms = {
        "I_minus": float(I_m),
        "eps_u1_minus": float(eps * mdl.u1(m, I_m, phi_m, t_m)),
        "eps_u1_plus": -float(eps * mdl.u1(m, I_m, phi_plus_c, t_p)),
        "jump": -sq * jump,
    }
    m3 = float(mdl.m2_dI3(m, I_m, t_s))
    angle_terms = {
        "phi_minus": float(phi_m),
        "rotation": inputs.rotation(t_p),
        "eps_v1_minus": float(eps * mdl.v1(m, I_m, phi_m, t_m)),
        "eps_v1_plus": -float(eps * mdl.v1(m, I_m, phi_plus_c, t_p)),
        "mean_before": mean_dI_integral(m, J_minus, t_m, t_s),
        "mean_after": mean_dI_integral(m, J_plus_c, t_s, t_p),
        "phase_jump": sq * float(inputs.jump_dI(I_star_c, phi_star_c)),
        "pv_r2": _pv_r2(inputs, I_m),
        "log_term": -(eps**1.5 * math.log(eps) / (4 * inputs.omega_prime_star)) * m3
        * float(inputs.jump_dphi(I_m, phi_star_c)),
    }
    I_star_est, phi_star_est = theorem2_estimates(
        inputs, "minus", checks=(I_star_c, phi_star_c))
    return PredictionReport(
        phi_plus_check=float(phi_plus_c),
        phi_star_check2=float(phi_star_c2),
        phi_star_check=float(phi_star_c),
        I_star_check=I_star_c,
        J_minus=J_minus,
        J_plus_check=float(J_plus_c),
        I_plus=reassemble(action_terms),
        phi_plus=reassemble(angle_terms),
        I_plus_classical=classical_jump(inputs, phi_star_c2),
        I_star_estimate=I_star_est,
        phi_star_estimate=phi_star_est,
        action_terms=action_terms,
        angle_terms=angle_terms,
    )


def theorem2_estimates(inputs: PredictionInputs, side="minus", anchors=None, checks=None):
    """O(eps) estimates of (I*, phi*) from one side of the resonance.

    The right-hand sides need I*, phi* themselves; they are replaced by the
    explicit check quantities (I_star_check, phi_star_check).  The minus
    side uses (I-, phi-); the plus side needs ``anchors=(I+, phi+)``.
    """
    m = inputs.model
    eps = inputs.eps
    sq = math.sqrt(eps)
    if checks is None:
        phi_c = check_phi_star(inputs)
        checks = (check_I_star(inputs, phi_c), phi_c)
    I_c, phi_c = checks
    if side == "minus":
        sign, tau_side = -1.0, inputs.tau_minus
        I_side, phi_side = inputs.I_minus, inputs.phi_minus
    elif side == "plus":
        if anchors is None:
            raise ConfigurationError("plus-side estimates need anchors (I+, phi+)")
        sign, tau_side = 1.0, inputs.tau_plus
        I_side, phi_side = anchors
    else:
        raise ConfigurationError(f"side must be 'minus' or 'plus', got {side!r}")
    J_side = float(I_side + eps * mdl.u1(m, I_side, phi_side, tau_side))
    I_est = I_side + sign * 0.5 * sq * float(inputs.jump_dphi(I_c, phi_c))
    phi_est = (phi_side
               + phase_accumulator(m, inputs.tau_star, tau_side) / eps
               + _signed_mean_integral(m, J_side, tau_side, inputs.tau_star)
               - sign * 0.5 * sq * float(inputs.jump_dI(I_c, phi_c))
               + _log_term(inputs, I_c))
    return float(I_est), float(phi_est)


def _signed_mean_integral(model, I, a, b):
    if a <= b:
        return mean_dI_integral(model, I, a, b)
    return -mean_dI_integral(model, I, b, a)


def theorem1_residuals(inputs: PredictionInputs, I_plus, phi_plus, I_star, phi_star):
    """Remainders of the two passage identities on a numerically known trajectory.

    ``I_star``/``phi_star`` are the on-trajectory values at tau* (unwrapped
    phase); the remainders are O(eps^(3/2)).
    """
    m = inputs.model
    eps = inputs.eps
    sq = math.sqrt(eps)
    I_m, phi_m = inputs.I_minus, inputs.phi_minus
    t_m, t_s, t_p = inputs.tau_minus, inputs.tau_star, inputs.tau_plus

    J_minus = I_m + eps * mdl.u1(m, I_m, phi_m, t_m)
    J_plus = I_plus + eps * mdl.u1(m, I_plus, phi_plus, t_p)
    jump = float(inputs.jump_dphi(I_star, phi_star))
    r_I = float(J_plus - (J_minus - sq * jump))

    lhs = phi_plus + eps * mdl.v1(m, I_plus, phi_plus, t_p)
    rhs = (phi_m + eps * mdl.v1(m, I_m, phi_m, t_m)
           + inputs.rotation(t_p)
           + mean_dI_integral(m, float(J_minus), t_m, t_s)
           + mean_dI_integral(m, float(J_plus), t_s, t_p)
           + sq * float(inputs.jump_dI(I_star, phi_star))
           + _pv_r2(inputs, I_star)
           - eps**1.5 * math.log(eps) / (4 * inputs.omega_prime_star)
           * float(mdl.m2_dI3(m, I_star, t_s)) * jump)
    return r_I, float(lhs - rhs)
