"""Full convergence sweep on the worked example (48 phases x 11 eps).

Writes cells.csv, errors.csv, fit.txt and one log-log SVG per error column.
Takes several minutes per core; pass --workers to spread eps values over processes.
"""
import argparse
import time

from resonance_passage.experiment import SweepConfig, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/full")
    ap.add_argument("--phases", type=int, default=48)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    start = time.perf_counter()
    table = run_sweep(SweepConfig(n_phases=args.phases, workers=args.workers))
    table.write(args.out)
    print("eps        E_I        E_phi      E_I_classic")
    for row in table.rows:
        print(f"{row['eps']:<10g} {row['E_I']:.3e}  {row['E_phi']:.3e}  {row['E_I_classic']:.3e}")
    print(table.fit_report())
    print(f"{time.perf_counter() - start:.0f}s, results in {args.out}")


if __name__ == "__main__":
    main()
