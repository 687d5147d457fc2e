"""Reduced grid (8 phases, eps = 0.02 ... 0.0025): a quick look at the slopes."""
import argparse
import time

from resonance_passage.experiment import SweepConfig, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/fast")
    args = ap.parse_args()
    start = time.perf_counter()
    table = run_sweep(SweepConfig.fast())
    table.write(args.out)
    print(table.fit_report())
    print(f"{time.perf_counter() - start:.0f}s")


if __name__ == "__main__":
    main()
