import time

import numpy as np
import pytest

from resonance_passage import model as mdl
from resonance_passage.experiment import FAST_EPS, SweepConfig, run_sweep


def single_harmonic(a=None, b=None, k=1, slope=1.0, root=1.0, mean=None):
    """Linear-frequency model with one harmonic; handy for oracles."""
    freq = mdl.FrequencyProfile(lambda t: slope * (np.asarray(t, dtype=float) - root),
                                lambda t: slope + 0.0 * np.asarray(t, dtype=float),
                                lambda t: 0.5 * slope * (np.asarray(t, dtype=float) - root) ** 2)
    return mdl.HarmonicModel(frequency=freq, harmonics=(mdl.HarmonicCoefficient(k, a, b),),
                             mean=mean, domain_I=(-10.0, 10.0), domain_tau=(-0.5, 2.5),
                             name="synthetic")


@pytest.fixture(scope="session")
def paper():
    return mdl.paper_example_model()


@pytest.fixture(scope="session")
def zero():
    return mdl.zero_model()


@pytest.fixture(scope="session")
def fast_table():
    """The reduced grid: 8 phases x 4 eps, with its wall time attached."""
    start = time.perf_counter()
    table = run_sweep(SweepConfig.fast())
    table.elapsed = time.perf_counter() - start
    return table


@pytest.fixture(scope="session")
def halving_table():
    """48 phases on the halving eps ladder, for the residual ratio tests."""
    return run_sweep(SweepConfig(n_phases=48, eps_values=FAST_EPS))


@pytest.fixture(scope="session")
def full_table():
    """48 phases x 11 eps; several minutes on one core."""
    return run_sweep(SweepConfig())


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS.values():
        terminalreporter.write_line(line)
