"""Classify the two-parameter family on the full 2-shift and report ground-state entropies.

    python scripts/golden_mean_residual.py --grid 1,1 1,9/10 9/10,1 1/2,1/2
"""
import argparse
import time

from zerotemp import classify, residual_entropy_zero_temp
from zerotemp.experiments import intro_fixture
from zerotemp.thermo import residual_entropy_upper


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", nargs="+", default=["1,1", "1,9/10", "9/10,1"])
    ap.add_argument("--steps", type=int, default=10, help="upper-bound steps (0 to skip)")
    args = ap.parse_args()
    print(f"{'alpha1,alpha2':>14} {'tag':>6} {'radius':>8} {'entropy':>14} {'upper':>10} {'sec':>6}")
    for pair in args.grid:
        a1, a2 = pair.split(",")
        phi = intro_fixture(a1, a2).phi
        t = time.perf_counter()
        c = classify(phi)
        ent = residual_entropy_zero_temp(c, 40)
        upper = residual_entropy_upper(phi, args.steps)[-1].bound if args.steps else None
        radius = "-" if c.certificate_radius is None else str(c.certificate_radius)
        print(f"{pair:>14} {c.tag.replace('k', str(c.k)):>6} {radius:>8} {float(ent.mid):>14.10f} "
              f"{'-' if upper is None else f'{float(upper):.6f}':>10} {time.perf_counter() - t:>6.2f}")


if __name__ == "__main__":
    main()
