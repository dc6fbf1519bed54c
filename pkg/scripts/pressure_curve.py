"""Tabulate P, mu_beta(phi), h and the W1 distance to the zero-temperature limit along beta = 2^n."""
import argparse

from zerotemp import classify, zero_temperature_measure
from zerotemp.experiments import intro_fixture
from zerotemp.measures import ErgodicComponents
from zerotemp.thermo import anneal


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alphas", default="1,9/10")
    ap.add_argument("--max-exp", type=int, default=8)
    ap.add_argument("--precision", type=int, default=24)
    args = ap.parse_args()
    phi = intro_fixture(*args.alphas.split(",")).phi
    limit = zero_temperature_measure(classify(phi))
    if isinstance(limit, ErgodicComponents):
        limit = None
    steps = anneal(phi, [2 ** n for n in range(args.max_exp + 1)], args.precision, limit)
    print(f"{'beta':>6} {'P':>12} {'integral':>12} {'entropy':>12} {'W1 <=':>10}")
    for s in steps:
        w1 = "-" if s.w1 is None else f"{float(s.w1.hi):.6f}"
        print(f"{str(s.beta):>6} {float(s.P.mid):>12.8f} {float(s.integral.mid):>12.8f} "
              f"{float(s.entropy.mid):>12.8f} {w1:>10}")


if __name__ == "__main__":
    main()
