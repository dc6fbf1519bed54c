from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from zerotemp.ergodic import O_K, V_K, classify, residual_entropy_zero_temp
from zerotemp.errors import NotAdmissible, PerturbationTooSmall
from zerotemp.experiments import (
    boundary_t0,
    cycle_perturbation,
    intro_fixture,
    perturbation_setup,
    star_fixture,
    star_orbits,
    symbolic_t0,
)
from zerotemp.potential import integral_on_orbit
from zerotemp.sft import orbit_of

GM = intro_fixture(1, Fraction(9, 10)).phi


def test_intro_fixture_values():
    phi = intro_fixture(2, 3).phi
    assert phi.k == 2
    assert [phi.value(w) for w in ((0, 0), (0, 1), (1, 0), (1, 1))] == [2, 3, 3, 0]


def test_star_base():
    base, _ = star_fixture(1)
    c = classify(base.phi)
    assert c.tag == O_K and c.b == 2 and c.orbits[0] == orbit_of(base.sft, (0, 1))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_star_perturbation_structure(n):
    base, pert = star_fixture(n)
    assert pert.phi.k == 2 * n + 2
    assert pert.phi.sup_distance(base.phi) == Fraction(2, n)
    z1, z2, z3 = star_orbits(n)
    means = {integral_on_orbit(pert.phi, z) for z in (z1, z2, z3)}
    assert means == {2 + Fraction(1, n + 1)}
    c = classify(pert.phi)
    assert c.tag == V_K and c.k == 2 * n + 2 and c.b == 2 + Fraction(1, n + 1)
    # z3 threads z1 and z2 together, which is what rules out a union of disjoint cycles
    assert z3.support(c.k) == z1.support(c.k) | z2.support(c.k)


def test_star_residual_entropy_decreases():
    vals = [residual_entropy_zero_temp(classify(star_fixture(n)[1].phi), 30) for n in (1, 2, 3)]
    assert all(a.lo > b.hi for a, b in zip(vals, vals[1:]))


def test_star_rejects_bad_n():
    with pytest.raises(ValueError):
        star_fixture(0)


def test_perturbation_setup_on_intro():
    s = perturbation_setup(GM, (1,), 4)
    assert s.x == orbit_of(GM.sft, (0,))
    assert s.z.segment == (0, 0, 0, 0, 1)
    assert s.length >= GM.k and s.z.is_elementary(s.ell)
    assert s.bumped and not (s.bumped & s.x.support(s.length))


def test_perturbation_setup_errors():
    with pytest.raises(ValueError):
        perturbation_setup(GM, (0,), 3)  # y equals the segment of x
    with pytest.raises(ValueError):
        perturbation_setup(GM, (1,), 1)
    with pytest.raises(ValueError):
        perturbation_setup(intro_fixture(1, 1).phi, (1,), 3)


def test_perturbation_needs_admissible_loop():
    from zerotemp.sft import Sft
    from zerotemp.potential import LocallyConstantPotential

    gm = Sft.golden_mean()
    phi = LocallyConstantPotential(gm, 1, {(0,): 1, (1,): 0})
    with pytest.raises(NotAdmissible):
        perturbation_setup(phi, (1, 1), 2)


@given(st.fractions(min_value=0, max_value=2, max_denominator=50))
def test_cycle_perturbation_properties(eps):
    s = perturbation_setup(GM, (1,), 4)
    pt = cycle_perturbation(GM, (1,), 4, eps, s)
    assert integral_on_orbit(pt, s.x) == integral_on_orbit(GM, s.x)
    assert pt.sup_distance(GM) == eps
    base = GM.refine(s.length)
    assert all(pt.values[w] == base.values[w] for w in base.values if w not in s.bumped)
    assert integral_on_orbit(pt, s.z) >= integral_on_orbit(GM, s.z)


def test_boundary_t0_matches_symbolic():
    r = boundary_t0(GM, (1,), 4, Fraction(1, 5), Fraction(1, 10 ** 6))
    t0 = symbolic_t0(GM, (1,), 4)
    assert t0 == Fraction(1, 20)
    assert r.interval.width <= Fraction(1, 10 ** 6) and r.interval.contains(t0)
    assert r.below.tag == O_K and r.below.orbits[0] == orbit_of(GM.sft, (0,))
    assert orbit_of(GM.sft, (0,)) not in r.above.orbits


def test_boundary_t0_without_exact_hit():
    # m = 3 gives a t0 whose dyadic bisection never lands on it
    t0 = symbolic_t0(GM, (1,), 3)
    r = boundary_t0(GM, (1,), 3, Fraction(1, 3), Fraction(1, 10 ** 6))
    assert r.interval.contains(t0) and r.interval.width <= Fraction(1, 10 ** 6)
    if r.exact is not None:
        assert r.exact == t0


def test_boundary_t0_too_small():
    with pytest.raises(PerturbationTooSmall):
        boundary_t0(GM, (1,), 4, Fraction(1, 100), Fraction(1, 10 ** 3))
