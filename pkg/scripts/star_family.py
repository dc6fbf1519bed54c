"""Small perturbations of a locked potential on the star shift that unlock positive entropy."""
import argparse

from zerotemp import classify, residual_entropy_zero_temp
from zerotemp.experiments import star_fixture, star_orbits
from zerotemp.potential import integral_on_orbit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=4)
    args = ap.parse_args()
    base, _ = star_fixture(1)
    c = classify(base.phi)
    print(f"base: {c.tag.replace('k', str(c.k))} b={c.b} orbits={[o.label() for o in c.orbits]}")
    print(f"{'n':>3} {'tag':>6} {'||phi-phi_n||':>14} {'mean on z_i':>12} {'entropy':>12}")
    for n in range(1, args.max_n + 1):
        _, pert = star_fixture(n)
        c = classify(pert.phi)
        means = {integral_on_orbit(pert.phi, z) for z in star_orbits(n)}
        ent = residual_entropy_zero_temp(c, 30)
        print(f"{n:>3} {c.tag.replace('k', str(c.k)):>6} {str(pert.phi.sup_distance(base.phi)):>14} "
              f"{','.join(map(str, sorted(means))):>12} {float(ent.mid):>12.8f}")


if __name__ == "__main__":
    main()
