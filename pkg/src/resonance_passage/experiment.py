"""Convergence sweep over initial phases and eps, with log-log slope fits."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import model as mdl
from .errors import ConfigurationError, ResonanceError, SweepError
from .odesim import integrate_batch
from .predictor import PredictionInputs, predict_corollary1, theorem1_residuals

PAPER_EPS = (0.02, 0.015, 0.01, 0.007, 0.005, 0.003, 0.002, 0.0015, 0.001, 0.0007, 0.0005)
FAST_EPS = (0.02, 0.01, 0.005, 0.0025)
FAST_PHASES = 8

ERROR_COLUMNS = ("E_I", "E_phi", "E_I_classic", "E_I_star", "E_phi_star", "R1_I", "R1_phi")


class DegenerateFitError(ResonanceError, ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    n_phases: int = 48
    eps_values: tuple = PAPER_EPS
    model: object = "paper-example"
    window: tuple = mdl.PAPER_WINDOW
    I0: float = 1.0
    step: Optional[float] = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "eps_values", tuple(float(e) for e in self.eps_values))
        object.__setattr__(self, "window", tuple(float(t) for t in self.window))
        if self.n_phases < 2:
            raise ConfigurationError(f"need at least 2 phases, got {self.n_phases}")
        if not self.eps_values:
            raise ConfigurationError("empty eps list")
        if any(e <= 0 for e in self.eps_values):
            raise ConfigurationError(f"eps values must be positive: {self.eps_values}")
        if list(self.eps_values) != sorted(set(self.eps_values), reverse=True):
            raise ConfigurationError(f"eps values must be strictly descending: {self.eps_values}")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")

    @classmethod
    def fast(cls, **overrides):
        return cls(**{"n_phases": FAST_PHASES, "eps_values": FAST_EPS, **overrides})

    @property
    def phases(self):
        # equally spaced on the circle; 2 pi would duplicate 0
        return np.linspace(0.0, 2 * np.pi, self.n_phases, endpoint=False)

    def resolve_model(self):
        if isinstance(self.model, mdl.HarmonicModel):
            return self.model
        try:
            return mdl.BUILTIN_MODELS[self.model]()
        except KeyError:
            raise ConfigurationError(f"unknown model {self.model!r}") from None


@dataclass(frozen=True)
class CellRecord:
    eps: float
    phi_minus: float
    I_plus_num: float
    phi_plus_num: float
    I_plus_theor: float
    phi_plus_theor: float
    I_plus_classic: float
    I_star_num: float
    phi_star_num: float
    I_star_est: float
    phi_star_est: float
    r1_I: float
    r1_phi: float

    @property
    def errors(self):
        return {
            "E_I": abs(self.I_plus_num - self.I_plus_theor),
            "E_phi": abs(self.phi_plus_num - self.phi_plus_theor),
            "E_I_classic": abs(self.I_plus_num - self.I_plus_classic),
            "E_I_star": abs(self.I_star_num - self.I_star_est),
            "E_phi_star": abs(self.phi_star_num - self.phi_star_est),
            "R1_I": abs(self.r1_I),
            "R1_phi": abs(self.r1_phi),
        }


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r2: float


@dataclass
class ConvergenceTable:
    eps_values: tuple
    cells: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    fits: dict = field(default_factory=dict)
    degenerate: bool = False

    def column(self, name):
        return np.array([row[name] for row in self.rows])

    def ratios(self, name):
        """E(eps_i) / E(eps_{i+1}) along the (descending) eps list."""
        col = self.column(name)
        return col[:-1] / col[1:]

    def write(self, out_dir):
        from .svg import loglog_plot

        os.makedirs(out_dir, exist_ok=True)
        _write_csv(os.path.join(out_dir, "cells.csv"), [asdict(c) for c in self.cells])
        _write_csv(os.path.join(out_dir, "errors.csv"), self.rows)
        with open(os.path.join(out_dir, "fit.txt"), "w") as fh:
            fh.write(self.fit_report() + "\n")
        if self.degenerate:
            return
        ln_eps = np.log(self.column("eps"))
        for name, fit in self.fits.items():
            if fit is None:
                continue
            ln_E = np.log(self.column(name))
            loglog_plot(os.path.join(out_dir, f"{name}.svg"), ln_eps, ln_E, fit.slope,
                        fit.intercept, title=f"ln {name} vs ln eps (slope {fit.slope:.3f})")
            with open(os.path.join(out_dir, f"{name}.dat"), "w") as fh:
                fh.write("# ln_eps ln_E\n")
                for x, y in zip(ln_eps, ln_E):
                    fh.write(f"{x:.17g} {y:.17g}\n")

    def fit_report(self):
        if self.degenerate:
            return "degenerate: all errors are zero, no slope fitted"
        lines = []
        for name, fit in self.fits.items():
            if fit is None:
                lines.append(f"{name}: degenerate")
            else:
                lines.append(f"{name}: slope={fit.slope:.6f} intercept={fit.intercept:.6f} "
                             f"r2={fit.r2:.6f}")
        return "\n".join(lines)


def _write_csv(path, rows):
    if not rows:
        open(path, "w").close()
        return
    keys = list(rows[0])
    with open(path, "w") as fh:
        fh.write(",".join(keys) + "\n")
        for row in rows:
            fh.write(",".join(format(float(row[k]), ".17g") for k in keys) + "\n")


def fit_slope(points):
    """Ordinary least squares line through (x, y) points: (slope, intercept, r^2)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] != 2:
        raise DegenerateFitError("need at least two (x, y) points")
    if not np.all(np.isfinite(pts)):
        raise DegenerateFitError("non-finite point (zero or negative error?)")
    x, y = pts[:, 0], pts[:, 1]
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0:
        raise DegenerateFitError("all x values coincide")
    slope = np.sum((x - xm) * (y - ym)) / sxx
    intercept = ym - slope * xm
    ss_res = np.sum((y - (slope * x + intercept)) ** 2)
    ss_tot = np.sum((y - ym) ** 2)
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), float(r2)


def fit_loglog(eps, errors):
    errors = np.asarray(errors, dtype=float)
    if np.any(errors <= 0):
        raise DegenerateFitError("zero or negative error value")
    return SlopeFit(*fit_slope(np.column_stack([np.log(eps), np.log(errors)])))


def run_eps(model, eps, phases, cfg: SweepConfig):
    """All cells for one eps: a single vectorised integration plus predictions."""
    geom = mdl.find_resonance(model, cfg.window)
    I_num, _, phi_num = integrate_batch(model, eps, cfg.I0, phases, cfg.window[0],
                                        cfg.window[1], (geom.tau_star, geom.tau_plus),
                                        cfg.step)
    cells = []
    for j, phi0 in enumerate(phases):
        try:
            inputs = PredictionInputs(model, eps, cfg.I0, float(phi0), geom)
            rep = predict_corollary1(inputs)
            r_I, r_phi = theorem1_residuals(inputs, I_num[1, j], phi_num[1, j],
                                            I_num[0, j], phi_num[0, j])
        except ResonanceError as exc:
            raise SweepError(eps, float(phi0), exc, partial=cells) from exc
        cells.append(CellRecord(
            eps=eps, phi_minus=float(phi0),
            I_plus_num=float(I_num[1, j]), phi_plus_num=float(phi_num[1, j]),
            I_plus_theor=rep.I_plus, phi_plus_theor=rep.phi_plus,
            I_plus_classic=rep.I_plus_classical,
            I_star_num=float(I_num[0, j]), phi_star_num=float(phi_num[0, j]),
            I_star_est=rep.I_star_estimate, phi_star_est=rep.phi_star_estimate,
            r1_I=r_I, r1_phi=r_phi,
        ))
    return cells


def _run_eps_job(args):
    model, eps, phases, cfg = args
    try:
        return run_eps(model, eps, phases, cfg)
    except SweepError as exc:
        return exc
    except ResonanceError as exc:
        return SweepError(eps, None, exc)


def run_sweep(cfg: SweepConfig):
    model = cfg.resolve_model()
    phases = cfg.phases
    jobs = [(model, eps, phases, cfg) for eps in cfg.eps_values]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_eps_job, jobs))
    else:
        results = [_run_eps_job(job) for job in jobs]

    table = ConvergenceTable(cfg.eps_values)
    for res in results:  # eps order is fixed by the job list
        if isinstance(res, SweepError):
            res.partial = table
            raise res
        table.cells.extend(res)
        errs = [c.errors for c in res]
        row = {"eps": res[0].eps}
        row.update({name: max(e[name] for e in errs) for name in ERROR_COLUMNS})
        table.rows.append(row)
    _fit_table(table)
    return table


def _fit_table(table):
    eps = table.column("eps")
    table.degenerate = all(row[n] == 0 for row in table.rows for n in ERROR_COLUMNS)
    if table.degenerate or len(eps) < 2:
        table.fits = {name: None for name in ERROR_COLUMNS}
        return
    for name in ERROR_COLUMNS:
        try:
            table.fits[name] = fit_loglog(eps, table.column(name))
        except DegenerateFitError:
            table.fits[name] = None
