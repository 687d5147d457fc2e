import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resonance_passage import model as mdl
from resonance_passage.errors import ConfigurationError, DomainError
from resonance_passage.predictor import (
    PredictionInputs,
    check_I_star,
    check_phi_plus,
    check_phi_star,
    check_phi_star_double,
    classical_jump,
    predict_corollary1,
    reassemble,
    theorem1_residuals,
    theorem2_estimates,
)

from conftest import single_harmonic

E = math.e
W = mdl.PAPER_WINDOW


def inputs(model, eps, phi, I=1.0, window=W):
    return PredictionInputs.build(model, eps, I, phi, window)


def by_hand(eps, phi_m):
    """The worked example, written out term by term with nothing shared with the package."""
    sq = math.sqrt(eps)
    phi_plus_c = phi_m + (E - 1 / E - 2) / eps
    pcc = phi_m - 1 / (eps * E)
    ps = pcc + 5 * math.sqrt(math.pi * eps) / (4 * math.sqrt(6)) * (math.cos(pcc) + math.sin(pcc)) \
        + eps * math.log(eps) / 8
    Is = 1 - math.sqrt(3 * math.pi * eps) / (2 * math.sqrt(2)) * (math.cos(ps) - math.sin(ps))
    eu1_m = math.sqrt(3) * eps * math.sin(phi_m) / ((1 / E - 1) * math.sqrt(1 / E + 1))
    eu1_p = math.sqrt(3) * eps * math.sin(phi_plus_c) / ((E - 1) * math.sqrt(E + 1))
    jump = math.sqrt(math.pi * eps / 2) * Is * math.sqrt(4 - Is) * (math.cos(ps) - math.sin(ps))
    I_plus = 1 + eu1_m - eu1_p - jump
    c5 = 5 / (2 * math.sqrt(3))
    phi_plus = (phi_m + (E - 1 / E - 2) / eps
                + c5 * eps * math.cos(phi_m) / ((1 / E - 1) * math.sqrt(1 / E + 1))
                - c5 * eps * math.cos(phi_plus_c) / ((E - 1) * math.sqrt(E + 1))
                + sq * math.sqrt(math.pi) * (8 - 3 * Is) / (math.sqrt(8) * math.sqrt(4 - Is))
                * (math.cos(ps) + math.sin(ps))
                + eps / 2
                + 3 * math.sqrt(3 * math.pi) / (8 * math.sqrt(2)) * eps**1.5 * math.log(eps)
                * (math.cos(ps) - math.sin(ps)))
    return dict(phi_plus_check=phi_plus_c, phi_star_check2=pcc, phi_star_check=ps,
                I_star_check=Is, I_plus=I_plus, phi_plus=phi_plus)


@pytest.mark.parametrize("eps,phi", [(0.01, 0.0), (0.01, 2.3), (0.002, 5.0), (0.02, -1.0)])
def test_independent_reimplementation(paper, eps, phi):
    rep = predict_corollary1(inputs(paper, eps, phi))
    for name, want in by_hand(eps, phi).items():
        assert abs(getattr(rep, name) - want) <= 1e-12, name


def test_phi_plus_check(paper):
    # e - 1/e - 2 = 0.3504023872876...
    assert check_phi_plus(inputs(paper, 0.01, 0.0)) == pytest.approx(35.04023872876, abs=1e-9)
    assert check_phi_plus(inputs(paper, 0.01, 0.0)) == pytest.approx((E - 1 / E - 2) / 0.01, rel=1e-14)


def test_phi_star_check2(paper):
    assert check_phi_star_double(inputs(paper, 0.01, 0.0)) == pytest.approx(-100 / E, rel=1e-14)
    assert check_phi_star_double(inputs(paper, 0.01, 0.0)) == pytest.approx(-36.78794, abs=5e-6)


def test_phi_star_check_at_zero_base_phase(paper):
    got = check_phi_star(inputs(paper, 0.01, 0.0), phi_star_check2=0.0)
    first = 5 * math.sqrt(0.01 * math.pi) / (4 * math.sqrt(6))
    second = 0.01 * math.log(0.01) / 8
    assert first == pytest.approx(0.0904502, abs=5e-8)
    assert second == pytest.approx(-0.0057565, abs=5e-8)
    assert got == pytest.approx(first + second, abs=1e-14)
    assert got == pytest.approx(0.0846937, abs=5e-8)


def test_I_star_symmetry_zero(paper):
    assert check_I_star(inputs(paper, 0.01, 0.0), math.pi / 4) == pytest.approx(1.0, abs=1e-15)


def test_linear_frequency_returns_to_start():
    # Phi(tau+) = 0 for a linear omega on a symmetric window
    m = single_harmonic(b=lambda I, t: I + 0.0 * t)
    assert check_phi_plus(inputs(m, 0.01, 0.4)) == pytest.approx(0.4, abs=1e-12)
    assert check_phi_star_double(inputs(m, 0.01, 0.4, window=(0.5, 1.5))) == pytest.approx(
        0.4 - 0.25 / 2 / 0.01, abs=1e-12)


def test_mean_term_against_closed_form():
    # H1-bar = I c(tau) with c = cos(tau): phase gains int c = sin(2) - sin(0)
    m = single_harmonic(b=lambda I, t: I + 0.0 * t, mean=mdl.CoefficientFunction(
        lambda I, t: I * np.cos(t), (lambda I, t: np.cos(t) + 0.0 * I,)))
    got = check_phi_plus(inputs(m, 0.01, 0.0)) - 0.0
    assert abs(got - math.sin(2.0)) <= 1e-12


def test_zero_model(zero):
    inp = inputs(zero, 0.01, 0.7)
    rep = predict_corollary1(inp)
    assert rep.I_plus == 1.0
    assert rep.I_plus_classical == 1.0
    assert rep.I_star_check == 1.0
    assert rep.phi_star_check == rep.phi_star_check2
    assert rep.phi_plus == pytest.approx(0.7 + (E - 1 / E - 2) / 0.01, abs=1e-12)
    I_est, phi_est = theorem2_estimates(inp)
    assert I_est == 1.0
    assert phi_est == pytest.approx(0.7 - 1 / (0.01 * E), abs=1e-12)


def test_phase_independent_perturbation_has_no_jump():
    m = single_harmonic(mean=lambda I, t: I**2 + t)
    inp = inputs(m, 0.01, 0.3)
    assert classical_jump(inp) == 1.0
    assert check_I_star(inp, check_phi_star(inp)) == 1.0


@settings(max_examples=25, deadline=None)
@given(phi=st.floats(0, 2 * math.pi), eps=st.sampled_from([0.02, 0.005, 0.001]))
def test_breakdown_reassembles(phi, eps):
    rep = predict_corollary1(inputs(mdl.paper_example_model(), eps, phi))
    assert abs(sum(rep.action_terms.values()) - rep.I_plus) <= 1e-14
    assert abs(reassemble(rep.angle_terms) - rep.phi_plus) <= 1e-14 * max(1.0, abs(rep.phi_plus))


@settings(max_examples=25, deadline=None)
@given(phi=st.floats(0, 2 * math.pi))
def test_gauge_symmetry(phi):
    m = mdl.paper_example_model()
    a = predict_corollary1(inputs(m, 0.01, phi))
    b = predict_corollary1(inputs(m, 0.01, phi + 2 * math.pi))
    for name in ("phi_plus_check", "phi_star_check2", "phi_star_check", "phi_plus"):
        assert abs(getattr(b, name) - getattr(a, name) - 2 * math.pi) <= 1e-12
    for name in ("I_plus", "I_star_check", "I_plus_classical"):
        assert abs(getattr(b, name) - getattr(a, name)) <= 1e-12


def test_log_term_in_phase_estimate(paper):
    # minus-side phi* estimate carries + eps ln eps / 8 on the worked example
    inp = inputs(paper, 0.01, 0.0)
    rep = predict_corollary1(inp)
    _, phi_est = theorem2_estimates(inp, checks=(1.0, rep.phi_star_check))
    half_jump = 0.5 * 0.1 * inp.jump_dI(1.0, rep.phi_star_check)
    assert phi_est - (-100 / E + half_jump) == pytest.approx(0.01 * math.log(0.01) / 8, abs=1e-12)


def test_classical_jump_scales_as_sqrt_eps(paper):
    phis = np.linspace(0, 2 * np.pi, 48, endpoint=False)

    def worst(eps):
        return max(abs(classical_jump(inputs(paper, eps, float(p))) - 1.0) for p in phis)

    assert worst(0.01) / worst(0.0025) == pytest.approx(2.0, rel=0.1)


def test_asymmetric_window_rejected(paper):
    with pytest.raises(ConfigurationError):
        inputs(paper, 0.01, 0.0, window=(0.0, 2.5))


def test_nonpositive_eps_rejected(paper):
    geom = mdl.find_resonance(paper, W)
    with pytest.raises(ConfigurationError):
        PredictionInputs(paper, 0.0, 1.0, 0.0, geom)


def test_start_outside_domain(paper):
    with pytest.raises(DomainError):
        inputs(paper, 0.01, 0.0, I=3.95)


def test_plus_side_needs_anchors(paper):
    with pytest.raises(ConfigurationError):
        theorem2_estimates(inputs(paper, 0.01, 0.0), side="plus")
    with pytest.raises(ConfigurationError):
        theorem2_estimates(inputs(paper, 0.01, 0.0), side="middle")


def test_theorem1_residuals_vanish_on_zero_model(zero):
    from resonance_passage.odesim import integrate_batch

    inp = inputs(zero, 0.01, 1.1)
    I, _, phi = integrate_batch(zero, 0.01, 1.0, 1.1, 0.0, 2.0, (1.0, 2.0))
    assert theorem1_residuals(inp, I[1, 0], phi[1, 0], I[0, 0], phi[0, 0]) == (0.0, 0.0)


def test_report_row_and_pretty(paper):
    rep = predict_corollary1(inputs(paper, 0.01, 0.0))
    row = rep.as_row()
    assert row["phi_plus_check"] == rep.phi_plus_check
    assert "I_term.jump" in row and "phi_term.pv_r2" in row
    assert row["phi_term.pv_r2"] == pytest.approx(0.005, rel=1e-10)
    assert len(rep.pretty().splitlines()) == len(row)
