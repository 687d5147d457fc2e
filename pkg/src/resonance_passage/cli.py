"""Command-line front end: predict | simulate | sweep | verify | print-config."""
from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import model as mdl
from .config import RunConfig, build_model
from .errors import ConfigurationError, ResonanceError, SweepError
from .odesim import SimConfig, integrate, write_trajectory_csv
from .predictor import PredictionInputs, predict_corollary1

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

log = logging.getLogger("resonance_passage")


def _parser():
    p = argparse.ArgumentParser(prog="resonance-passage",
                                description="Passage through an isolated resonance: "
                                            "prediction, reference integration and convergence sweeps.")
    p.add_argument("command", choices=["predict", "simulate", "sweep", "verify", "print-config"])
    p.add_argument("--config", metavar="PATH", help="JSON run configuration")
    p.add_argument("--eps", type=float, help="small parameter (predict/simulate)")
    p.add_argument("--phi0", type=float, help="initial phase at tau- (predict/simulate)")
    p.add_argument("--fast", action="store_true", default=None,
                   help="reduced grid: 8 phases x eps in {0.02, 0.01, 0.005, 0.0025}")
    p.add_argument("--out", metavar="DIR", help="output directory")
    p.add_argument("--threads", type=int, help="worker processes for sweep")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def load_config(args):
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    for name in ("eps", "phi0", "fast", "out", "threads"):
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    return cfg.validate()


def _write_row(path, row):
    with open(path, "w") as fh:
        fh.write(",".join(row) + "\n")
        fh.write(",".join(format(float(v), ".17g") for v in row.values()) + "\n")


def cmd_predict(cfg):
    m = build_model(cfg.model)
    inputs = PredictionInputs.build(m, float(cfg.eps), float(cfg.I0), float(cfg.phi0), cfg.window)
    report = predict_corollary1(inputs)
    print(report.pretty())
    os.makedirs(cfg.out, exist_ok=True)
    _write_row(os.path.join(cfg.out, "predict.csv"), report.as_row())
    return EXIT_OK


def cmd_simulate(cfg):
    m = build_model(cfg.model)
    geom = mdl.find_resonance(m, cfg.window)
    taus = {geom.tau_minus, geom.tau_star, geom.tau_plus}
    if cfg.dense > 0:
        taus.update(np.linspace(geom.tau_minus, geom.tau_plus, int(cfg.dense) + 2).tolist())
    sim = SimConfig(eps=float(cfg.eps), I0=float(cfg.I0), phi0=float(cfg.phi0),
                    tau_start=geom.tau_minus, tau_end=geom.tau_plus,
                    sample_taus=tuple(sorted(taus)), h=cfg.step)
    samples = integrate(m, sim)
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, "trajectory.csv")
    write_trajectory_csv(path, samples)
    for s in samples:
        print(f"tau={s.tau:.17g} I={s.I:.17g} chi={s.chi:.17g} phi={s.phi:.17g}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_sweep(cfg):
    from .experiment import run_sweep

    sweep = cfg.sweep_config()
    try:
        table = run_sweep(sweep)
    except SweepError as exc:
        if exc.partial is not None and exc.partial.rows:
            exc.partial.write(os.path.join(cfg.out, "partial"))
        raise
    table.write(cfg.out)
    for row in table.rows:
        print(", ".join(f"{k}={v:.6g}" for k, v in row.items()))
    print(table.fit_report())
    return EXIT_OK


def cmd_verify(cfg):
    from .verify import format_report, run_all

    checks = run_all(include_simulation=not cfg.fast)
    print(format_report(checks))
    failed = [c.name for c in checks if not c.passed]
    if failed:
        print("FAILED: " + ", ".join(failed))
        return EXIT_FAIL
    return EXIT_OK


COMMANDS = {
    "predict": cmd_predict,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "print-config": lambda cfg: print(cfg.to_json()) or EXIT_OK,
}


def main(argv=None):
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        cfg = load_config(args)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](cfg)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResonanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
