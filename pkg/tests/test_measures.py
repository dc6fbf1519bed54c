import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from zerotemp.errors import DomainMismatch, WeightsUnknown, WrongVariant
from zerotemp.measures import (
    ErgodicComponents,
    MarkovMeasure,
    PeriodicOrbitMeasure,
    cylinder_marginals,
    markov_entropy,
    measure_integral,
    parry_measure,
    periodic_as_markov,
    quotient_cost,
    w1_distance,
)
from zerotemp.potential import LocallyConstantPotential
from zerotemp.sft import Sft, orbit_of

S2 = Sft.full_shift(2)
GM = Sft.golden_mean()
HALF = Fraction(1, 2)
BERNOULLI = MarkovMeasure(S2, 1, ((0,), (1,)), (HALF, HALF), ((HALF, HALF), (HALF, HALF)))
GOLDEN = (1 + math.sqrt(5)) / 2


def delta(sft, tau):
    return PeriodicOrbitMeasure(orbit_of(sft, tau))


def lp_w1(mu, nu, depth):
    """Transport LP on depth-m marginals with the quotient cost (independent oracle)."""
    a, b = cylinder_marginals(mu, depth), cylinder_marginals(nu, depth)
    src, dst = sorted(a), sorted(b)
    theta = mu.sft.theta
    cost = np.array([[float(quotient_cost(theta, u, v)) for v in dst] for u in src]).ravel()
    n, m = len(src), len(dst)
    eq = []
    rhs = []
    for i in range(n):
        row = np.zeros(n * m)
        row[i * m:(i + 1) * m] = 1
        eq.append(row)
        rhs.append(float(a[src[i]]))
    for j in range(m):
        row = np.zeros(n * m)
        row[j::m] = 1
        eq.append(row)
        rhs.append(float(b[dst[j]]))
    res = linprog(cost, A_eq=np.array(eq), b_eq=np.array(rhs), bounds=(0, None), method="highs")
    return res.fun


def gm_parry():
    return parry_measure(GM, 1, ((0,), (1,)), [[1, 1], [1, 0]])


def test_periodic_marginals_and_integrals():
    phi = LocallyConstantPotential.from_function(S2, 2, lambda w: {(0, 0): 1, (1, 1): 0}.get(w, Fraction(9, 10)))
    assert measure_integral(delta(S2, (0,)), phi) == 1
    assert cylinder_marginals(delta(S2, (0, 1)), 2) == {(0, 1): HALF, (1, 0): HALF}


def test_bernoulli_integral_and_entropy():
    phi = LocallyConstantPotential(S2, 1, {(0,): 1, (1,): 0})
    assert measure_integral(BERNOULLI, phi) == HALF
    assert markov_entropy(BERNOULLI).contains(math.log(2))


def test_parry_measure_of_golden_mean():
    mu = gm_parry()
    pi0 = GOLDEN ** 2 / (1 + GOLDEN ** 2)  # l_u r_u with l = r = (golden, 1)
    assert abs(float(mu.pi[0]) - pi0) < 1e-15
    assert abs(float(mu.p[0][1]) - 1 / GOLDEN ** 2) < 1e-15 and mu.p[1][0] == 1
    assert mu.stationarity_defect < Fraction(1, 10 ** 15)
    h = markov_entropy(mu)
    assert abs(float(h.mid) - math.log(GOLDEN)) < 1e-15
    # phi' = (1, 1, 0) on the 2-blocks 00, 01, 10
    phi = LocallyConstantPotential.from_function(GM, 2, lambda w: 0 if w == (1, 0) else 1)
    assert abs(float(measure_integral(mu, phi)) - pi0) < 1e-15


def test_periodic_measure_as_markov_has_zero_entropy():
    mu = periodic_as_markov(orbit_of(S2, (0, 0, 1)), 2)
    assert markov_entropy(mu).hi == 0
    assert cylinder_marginals(mu, 4) == cylinder_marginals(delta(S2, (0, 0, 1)), 4)


def test_variant_errors():
    comps = ErgodicComponents((delta(S2, (0,)), delta(S2, (1,))))
    phi = LocallyConstantPotential.constant(S2, 1)
    with pytest.raises(WeightsUnknown):
        measure_integral(comps, phi)
    with pytest.raises(WeightsUnknown):
        w1_distance(comps, BERNOULLI)
    with pytest.raises(WrongVariant):
        markov_entropy(delta(S2, (0,)))
    with pytest.raises(DomainMismatch):
        measure_integral(delta(GM, (0,)), phi)


def test_markov_validation():
    with pytest.raises(ValueError):
        MarkovMeasure(S2, 1, ((0,), (1,)), (HALF, HALF), ((HALF, HALF), (1, 1)))


def test_w1_point_masses():
    w = w1_distance(delta(S2, (0,)), delta(S2, (1,)), 8)
    assert w.contains(HALF) and w.width == Fraction(1, 256)
    same = w1_distance(BERNOULLI, BERNOULLI, 8)
    assert same.lo == 0 and same.contains(0)


MEASURES = [delta(S2, (0,)), delta(S2, (1,)), delta(S2, (0, 1)), delta(S2, (0, 0, 1)), BERNOULLI,
            MarkovMeasure(S2, 1, ((0,), (1,)), (Fraction(2, 3), Fraction(1, 3)),
                          ((Fraction(3, 4), Fraction(1, 4)), (HALF, HALF)))]


@pytest.mark.parametrize("i", range(len(MEASURES)))
@pytest.mark.parametrize("j", range(len(MEASURES)))
def test_tree_formula_matches_transport_lp(i, j):
    w = w1_distance(MEASURES[i], MEASURES[j], 5)
    assert abs(float(w.lo) - lp_w1(MEASURES[i], MEASURES[j], 5)) < 1e-9


@given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5), st.integers(3, 8))
def test_metric_axioms(i, j, l, depth):
    a, b, c = MEASURES[i], MEASURES[j], MEASURES[l]
    slack = S2.theta ** depth
    assert w1_distance(a, b, depth) == w1_distance(b, a, depth)
    assert w1_distance(a, c, depth).lo <= w1_distance(a, b, depth).hi + w1_distance(b, c, depth).hi + 3 * slack


def test_w1_theta_dependence():
    s = Sft.full_shift(2, theta=Fraction(1, 3))
    assert w1_distance(delta(s, (0,)), delta(s, (1,)), 6).contains(Fraction(1, 3))
    assert w1_distance(delta(s, (0, 0, 1)), delta(s, (0, 0, 0)), 6).lo > 0
