import math

import numpy as np
import pytest

from resonance_passage import experiment as ex
from resonance_passage import model as mdl
from resonance_passage.errors import ConfigurationError, DomainError, SweepError
from resonance_passage.experiment import (
    DegenerateFitError,
    SweepConfig,
    fit_loglog,
    fit_slope,
    run_sweep,
)

SMALL = dict(n_phases=3, eps_values=(0.02, 0.01))


def test_fit_exact_line():
    x = np.log([0.02, 0.01, 0.005, 0.001])
    slope, intercept, r2 = fit_slope(np.column_stack([x, 1.5 * x - 0.7]))
    assert slope == pytest.approx(1.5, abs=1e-14)
    assert intercept == pytest.approx(-0.7, abs=1e-13)
    assert r2 == pytest.approx(1.0, abs=1e-14)


def test_fit_hand_ols():
    # x = 0, 1, 2; y = 1, 2, 4: slope 3/2, intercept 5/6, r^2 = 27/28
    slope, intercept, r2 = fit_slope([(0, 1), (1, 2), (2, 4)])
    assert abs(slope - 1.5) <= 1e-12
    assert abs(intercept - 5 / 6) <= 1e-12
    assert abs(r2 - 27 / 28) <= 1e-12


@pytest.mark.parametrize("points", [[(0.0, 1.0)], [(1.0, 1.0), (1.0, 2.0)], [(0.0, math.inf), (1.0, 0.0)]])
def test_fit_degenerate(points):
    with pytest.raises(DegenerateFitError):
        fit_slope(points)


def test_loglog_rejects_zero_error():
    with pytest.raises(DegenerateFitError):
        fit_loglog([0.02, 0.01], [1e-3, 0.0])


@pytest.mark.parametrize("kwargs", [
    dict(n_phases=1), dict(eps_values=()), dict(eps_values=(0.01, 0.02)),
    dict(eps_values=(0.01, -0.01)), dict(eps_values=(0.01, 0.01)), dict(workers=0),
])
def test_config_validation(kwargs):
    with pytest.raises(ConfigurationError):
        SweepConfig(**kwargs)


def test_phase_grid():
    ph = SweepConfig(n_phases=48).phases
    assert len(ph) == 48 and ph[0] == 0.0
    assert ph[-1] == pytest.approx(2 * math.pi * 47 / 48)


def test_unknown_model():
    with pytest.raises(ConfigurationError):
        SweepConfig(model="nope").resolve_model()


def test_zero_model_is_degenerate(tmp_path):
    table = run_sweep(SweepConfig(n_phases=4, eps_values=(0.02, 0.01), model="zero"))
    assert table.degenerate
    assert all(row[n] == 0.0 for row in table.rows for n in ex.ERROR_COLUMNS)
    assert all(f is None for f in table.fits.values())
    table.write(tmp_path)
    assert (tmp_path / "fit.txt").read_text().startswith("degenerate")


def test_determinism():
    a = run_sweep(SweepConfig(**SMALL))
    b = run_sweep(SweepConfig(**SMALL))
    assert a.cells == b.cells and a.rows == b.rows


def test_parallel_matches_serial():
    a = run_sweep(SweepConfig(**SMALL))
    b = run_sweep(SweepConfig(workers=2, **SMALL))
    assert a.cells == b.cells and a.rows == b.rows and a.fits == b.fits


def test_rows_are_true_maxima(fast_table):
    for row in fast_table.rows:
        cells = [c for c in fast_table.cells if c.eps == row["eps"]]
        assert len(cells) == 8
        for name in ex.ERROR_COLUMNS:
            assert row[name] == max(c.errors[name] for c in cells)


def test_phase_error_is_unwrapped(fast_table):
    # both sides carry the ~35/eps rotation; an O(1) difference means nothing was reduced mod 2 pi
    for c in fast_table.cells:
        assert abs(c.phi_plus_num) > 10
        assert c.errors["E_phi"] < 1.0


def test_written_artifacts(fast_table, tmp_path):
    fast_table.write(tmp_path)
    for name in ("cells.csv", "errors.csv", "fit.txt", "E_I.svg", "E_I.dat", "E_phi.svg"):
        assert (tmp_path / name).exists(), name
    header = (tmp_path / "errors.csv").read_text().splitlines()[0].split(",")
    assert header[:4] == ["eps", "E_I", "E_phi", "E_I_classic"]
    svg = (tmp_path / "E_I.svg").read_text()
    assert "ln ε" in svg and "ln E" in svg and svg.count("<circle") == 4
    assert "r2=" in (tmp_path / "fit.txt").read_text()


def test_theorem1_beats_classical_at_eps_001(halving_table):
    cells = [c for c in halving_table.cells if c.eps == 0.01]
    wins = sum(abs(c.r1_I) <= c.errors["E_I_classic"] for c in cells)
    assert wins >= 0.9 * len(cells)


def test_classical_worse_than_prediction(halving_table):
    for row in halving_table.rows:
        assert row["E_I_classic"] > row["E_I"]


def test_error_envelope_at_eps_001(full_table, paper):
    # the eps = 0.01, phi- = 0 cell sits under the fitted envelope exp(c) eps^alpha
    fit = full_table.fits["E_I"]
    cell = next(c for c in full_table.cells if c.eps == 0.01 and c.phi_minus == 0.0)
    assert cell.errors["E_I"] <= math.exp(fit.intercept) * 0.01**fit.slope * 1.5


def test_monotone_trend(full_table):
    col = full_table.column("E_I")
    inversions = int(np.sum(col[1:] > col[:-1]))
    assert inversions <= 1


def test_cell_failure_reports_coordinates(monkeypatch):
    real = ex.predict_corollary1

    def flaky(inputs):
        if inputs.eps == 0.01 and inputs.phi_minus > 0:
            raise DomainError("I", 9.0, (0.0, 3.9))
        return real(inputs)

    monkeypatch.setattr(ex, "predict_corollary1", flaky)
    with pytest.raises(SweepError) as info:
        run_sweep(SweepConfig(**SMALL))
    err = info.value
    assert err.eps == 0.01 and err.phi == pytest.approx(2 * math.pi / 3)
    assert isinstance(err.cause, DomainError)
    assert [r["eps"] for r in err.partial.rows] == [0.02]
