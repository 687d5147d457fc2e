"""Passage through an isolated resonance in one-frequency quasi-linear Hamiltonian systems."""
from .model import (
    CoefficientFunction,
    FrequencyProfile,
    HarmonicCoefficient,
    HarmonicModel,
    ResonanceGeometry,
    find_resonance,
    paper_example_model,
    zero_model,
)
from .odesim import SimConfig, TrajectorySample, integrate, integrate_batch
from .predictor import PredictionInputs, PredictionReport, classical_jump, predict_corollary1
from .experiment import ConvergenceTable, SweepConfig, fit_slope, run_sweep

__version__ = "0.1.0"
