"""Locate the threshold at which raising phi along a nearby cycle unlocks the maximizing orbit."""
import argparse
from fractions import Fraction

from zerotemp.errors import TooLarge
from zerotemp.experiments import boundary_t0, intro_fixture, symbolic_t0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alphas", default="1,9/10")
    ap.add_argument("--y", default="1", help="word appended after m copies of the orbit segment")
    ap.add_argument("--m", type=int, nargs="+", default=[2, 3, 4, 6])
    ap.add_argument("--eps", type=Fraction, default=Fraction(1, 2))
    ap.add_argument("--tol", type=Fraction, default=Fraction(1, 10 ** 6))
    args = ap.parse_args()
    phi = intro_fixture(*args.alphas.split(",")).phi
    y = phi.sft.parse(args.y)
    for m in args.m:
        r = boundary_t0(phi, y, m, args.eps, args.tol)
        try:
            t0 = symbolic_t0(phi, y, m)
        except TooLarge:
            t0 = "(too many cycles to enumerate)"
        print(f"m={m}: t0 in [{float(r.interval.lo):.9f}, {float(r.interval.hi):.9f}]  symbolic={t0}  "
              f"below={r.below.tag.replace('k', str(r.below.k))}{[o.label() for o in r.below.orbits]}  "
              f"above={r.above.tag.replace('k', str(r.above.k))}{[o.label() for o in r.above.orbits]}  probes={r.probes}")


if __name__ == "__main__":
    main()
