"""Error ratios under eps-halving for every error column.

O(eps) quantities should show ratios near 2, O(eps^(3/2)) ones near 2.83.
"""
import argparse

from resonance_passage.experiment import ERROR_COLUMNS, FAST_EPS, SweepConfig, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--phases", type=int, default=48)
    ap.add_argument("--eps", type=float, nargs="+", default=list(FAST_EPS))
    args = ap.parse_args()
    table = run_sweep(SweepConfig(n_phases=args.phases, eps_values=tuple(args.eps)))
    eps = table.column("eps")
    print("column        " + "  ".join(f"{a:g}->{b:g}" for a, b in zip(eps, eps[1:])))
    for name in ERROR_COLUMNS:
        print(f"{name:<13} " + "  ".join(f"{r:>10.3f}" for r in table.ratios(name)))


if __name__ == "__main__":
    main()
