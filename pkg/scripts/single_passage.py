"""One trajectory through the resonance next to the explicit prediction."""
import argparse

from resonance_passage import model as mdl
from resonance_passage.odesim import integrate_batch
from resonance_passage.predictor import PredictionInputs, predict_corollary1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, default=0.01)
    ap.add_argument("--phi0", type=float, default=0.0)
    args = ap.parse_args()

    m = mdl.paper_example_model()
    rep = predict_corollary1(PredictionInputs.build(m, args.eps, 1.0, args.phi0, mdl.PAPER_WINDOW))
    I, _, phi = integrate_batch(m, args.eps, 1.0, args.phi0, 0.0, 2.0, (1.0, 2.0))
    print(f"{'':12}{'numeric':>22}{'predicted':>22}{'difference':>14}")
    for label, num, pred in (("I*", I[0, 0], rep.I_star_estimate),
                             ("phi*", phi[0, 0], rep.phi_star_estimate),
                             ("I+", I[1, 0], rep.I_plus),
                             ("phi+", phi[1, 0], rep.phi_plus),
                             ("I+ classic", I[1, 0], rep.I_plus_classical)):
        print(f"{label:<12}{num:>22.15f}{pred:>22.15f}{num - pred:>14.3e}")


if __name__ == "__main__":
    main()
