"""Named fixtures: the Golden-mean family, the star family, and cycle perturbations."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .ergodic import O_K, V_K, Classification, classify, max_orbit_set, WeightedBlockGraph
from .errors import NotAdmissible, PerturbationTooSmall
from .intervals import Interval, as_fraction
from .potential import LocallyConstantPotential, integral_on_orbit, matrix_potential
from .sft import PeriodicOrbit, Sft, Word, orbit_of

STAR = ((0, 1, 1, 1), (1, 0, 0, 0), (1, 0, 0, 0), (1, 0, 0, 0))


@dataclass(frozen=True, eq=False)
class Fixture:
    sft: Sft
    phi: LocallyConstantPotential
    label: str
    expected: dict = field(default_factory=dict)


def intro_fixture(alpha1, alpha2) -> Fixture:
    """Full 2-shift with phi = alpha1 on C(00), alpha2 on C(01) and C(10), 0 on C(11)."""
    a1, a2 = as_fraction(alpha1), as_fraction(alpha2)
    sft = Sft.full_shift(2)
    phi = matrix_potential(sft, [[a1, a2], [a2, 0]])
    expected = {"tag": V_K} if a1 == a2 and a1 > 0 else {}
    return Fixture(sft, phi, f"intro:{a1},{a2}", expected)


def star_sft() -> Sft:
    return Sft(4, STAR)


def star_fixture(n: int) -> tuple[Fixture, Fixture]:
    """Star shift, base phi in LC_2 and its perturbation phi_n in LC_{2n+2}.

    phi_n = 2 + 2/n on (2n+2)-cylinders that start with 01 or 10 and contain exactly
    one symbol from {2, 3}; otherwise phi_n = phi.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    sft = star_sft()
    table = [[0, 2, 1, 1], [2, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0]]
    phi = matrix_potential(sft, table)
    bump = 2 + Fraction(2, n)

    def value(w: Word):
        if w[:2] in ((0, 1), (1, 0)) and w.count(2) + w.count(3) == 1:
            return bump
        return phi.value(w)

    phi_n = LocallyConstantPotential.from_function(sft, 2 * n + 2, value)
    base = Fixture(sft, phi, "star", {"tag": O_K, "b": Fraction(2)})
    perturbed = Fixture(sft, phi_n, f"star:{n}", {"tag": V_K, "k": 2 * n + 2})
    return base, perturbed


def star_orbits(n: int) -> tuple[PeriodicOrbit, PeriodicOrbit, PeriodicOrbit]:
    """z_1 = O((01)^n 02), z_2 = O((01)^n 03), z_3 = O((01)^n 02 (01)^n 03)."""
    sft = star_sft()
    head = (0, 1) * n
    return (orbit_of(sft, head + (0, 2)), orbit_of(sft, head + (0, 3)),
            orbit_of(sft, head + (0, 2) + head + (0, 3)))


@dataclass(frozen=True, eq=False)
class PerturbationSetup:
    x: PeriodicOrbit
    z: PeriodicOrbit
    ell: int  # smallest length at which z is elementary
    length: int  # cylinder length of the perturbed potential, max(ell, k)
    bumped: frozenset


def perturbation_setup(phi: LocallyConstantPotential, y, m: int, x: PeriodicOrbit | None = None) -> PerturbationSetup:
    if m < 2:
        raise ValueError("m must be >= 2")
    y = tuple(y)
    if x is None:
        c = classify(phi)
        if c.tag != O_K:
            raise ValueError(f"potential is {c.tag}, not uniquely maximized")
        x = c.orbits[0]
    tau = x.segment
    if not any(a != b for a, b in zip(tau, y)):
        raise ValueError("y must differ from the generating segment of x in some coordinate")
    seg = tau * m + y
    if not phi.sft.admissible(seg) or not phi.sft.allowed(seg[-1], seg[0]):
        raise NotAdmissible("tau_x^m y does not close up to a periodic orbit")
    z = PeriodicOrbit(phi.sft, seg)
    lx, n = len(tau), len(seg)
    ell = next((j for j in range((m - 1) * lx + 1, n + 1) if z.is_elementary(j)), None)
    if ell is None:
        raise ValueError("z is not elementary at any admissible length")
    length = max(ell, phi.k)
    bumped = z.support(length) - x.support(length)
    return PerturbationSetup(x, z, ell, length, frozenset(bumped))


def cycle_perturbation(phi: LocallyConstantPotential, y, m: int, eps, setup: PerturbationSetup | None = None
                       ) -> LocallyConstantPotential:
    """phi raised by eps exactly on the cylinders visited by z_m but not by x."""
    eps = as_fraction(eps)
    s = setup or perturbation_setup(phi, y, m)
    base = phi.refine(s.length)
    return LocallyConstantPotential.from_function(
        phi.sft, s.length, lambda w: base.values[w] + eps if w in s.bumped else base.values[w])


@dataclass(frozen=True, eq=False)
class BoundaryResult:
    interval: Interval
    exact: Fraction | None  # set when a probe landed on the tie itself
    below: Classification
    above: Classification
    probes: int


def _x_status(phi, setup, t) -> tuple[Classification, bool, bool]:
    """(classification, x uniquely maximizing, x among the maximizers)."""
    pt = cycle_perturbation(phi, None, 0, t, setup)
    c = classify(pt)
    x = setup.x
    unique = c.tag == O_K and c.orbits[0] == x
    if unique:
        return c, True, True
    members = c.orbits if c.tag != V_K else max_orbit_set(WeightedBlockGraph.from_potential(pt), with_gap=False).orbits
    return c, False, x in members


def boundary_t0(phi: LocallyConstantPotential, y, m: int, eps, tol) -> BoundaryResult:
    """Bracket t0 = sup{t : x maximizes phi_{t, ell}} by bisection on exactly classified probes.

    x's integral does not move with t while every other orbit's integral is
    nondecreasing, so membership of x is monotone in t.  A probe at which x ties
    with another orbit is t0 itself.
    """
    eps, tol = as_fraction(eps), as_fraction(tol)
    setup = perturbation_setup(phi, y, m)
    lo, hi = Fraction(0), eps
    c_lo, unique, _ = _x_status(phi, setup, lo)
    if not unique:
        raise ValueError("x must be the unique maximizer of phi")
    c_hi, _, member = _x_status(phi, setup, hi)
    if member:
        raise PerturbationTooSmall(f"x still maximizes after raising by {eps}")
    probes = 2
    while hi - lo > tol:
        mid = (lo + hi) / 2
        c, unique, member = _x_status(phi, setup, mid)
        probes += 1
        if unique:
            lo, c_lo = mid, c
        elif member:
            a, b = mid - tol / 2, mid + tol / 2
            c_a, _, _ = _x_status(phi, setup, a)
            c_b, _, _ = _x_status(phi, setup, b)
            return BoundaryResult(Interval(a, b), mid, c_a, c_b, probes + 2)
        else:
            hi, c_hi = mid, c
    return BoundaryResult(Interval(lo, hi), None, c_lo, c_hi, probes)


def symbolic_t0(phi: LocallyConstantPotential, y, m: int) -> Fraction:
    """t0 from the linear cycle means t -> a + s t, over all elementary orbits of the perturbed graph."""
    from .ergodic import enumerate_elementary_cycles

    setup = perturbation_setup(phi, y, m)
    base = cycle_perturbation(phi, None, 0, 0, setup)
    slope = LocallyConstantPotential.from_function(
        phi.sft, setup.length, lambda w: Fraction(int(w in setup.bumped)))
    target = integral_on_orbit(base, setup.x)
    best = None
    for o in enumerate_elementary_cycles(WeightedBlockGraph.from_potential(base)):
        s = integral_on_orbit(slope, o)
        if s > 0:
            t = (target - integral_on_orbit(base, o)) / s
            best = t if best is None else min(best, t)
    return best
