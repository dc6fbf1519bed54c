import math
import random
from fractions import Fraction

import networkx as nx
import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import random_irreducible_sft, random_potential
from zerotemp.ergodic import (
    O_K,
    U_K,
    UNDETERMINED,
    V_K,
    WeightedBlockGraph,
    classify,
    critical_graph,
    enumerate_elementary_cycles,
    extreme_means,
    max_cycle_mean,
    max_orbit_set,
    residual_entropy_zero_temp,
    simple_cycles,
    strongly_connected_components,
    zero_temperature_measure,
)
from zerotemp.errors import ExactnessRequired, NotResolved, NotTransitive
from zerotemp.experiments import intro_fixture, star_fixture
from zerotemp.measures import ErgodicComponents, MarkovMeasure, PeriodicOrbitMeasure
from zerotemp.potential import LocallyConstantPotential, integral_on_orbit, matrix_potential
from zerotemp.sft import Sft, orbit_of, topological_entropy

S2 = Sft.full_shift(2)
STAR = Sft(4, ((0, 1, 1, 1), (1, 0, 0, 0), (1, 0, 0, 0), (1, 0, 0, 0)))
SYMMETRIC = matrix_potential(S2, [[1, 0], [0, 1]])


def graph(phi):
    return WeightedBlockGraph.from_potential(phi)


def oracle_means(phi):
    return {o: integral_on_orbit(phi, o) for o in enumerate_elementary_cycles(graph(phi))}


def oracle_classify(phi):
    """Tag and maximizing set straight from the definition, by enumeration."""
    means = oracle_means(phi)
    b = max(means.values())
    top = [o for o, m in means.items() if m == b]
    others = [m for m in means.values() if m != b]
    supports = [o.support(phi.k) for o in top]
    overlap = any(supports[i] & supports[j] for i in range(len(top)) for j in range(i))
    tag = O_K if len(top) == 1 else V_K if overlap else U_K
    return tag, set(top), (b - max(others)) if others else None


def labels(c):
    return {o.label() for o in c.orbits}


def test_enumeration_examples():
    gm = LocallyConstantPotential.constant(Sft.golden_mean(), 0, k=2)
    assert {o.label() for o in enumerate_elementary_cycles(graph(gm))} == {"0", "01", "001"}
    assert len(enumerate_elementary_cycles(graph(LocallyConstantPotential.constant(S2, 0)))) == 3
    assert {o.label() for o in enumerate_elementary_cycles(graph(LocallyConstantPotential.constant(STAR, 0)))} == {
        "01", "02", "03"}


def test_extreme_means_examples():
    assert extreme_means(graph(intro_fixture(1, 1).phi)) == (0, 1)
    assert extreme_means(graph(LocallyConstantPotential.constant(S2, Fraction(3, 7), k=2))) == (
        Fraction(3, 7), Fraction(3, 7))
    base, _ = star_fixture(1)
    assert extreme_means(graph(base.phi))[1] == 2


@given(st.integers(0, 10 ** 6))
def test_karp_matches_enumeration(seed):
    rng = random.Random(seed)
    sft = random_irreducible_sft(rng, 3)
    phi = random_potential(rng, sft, rng.randint(1, 2))
    means = oracle_means(phi).values()
    assert extreme_means(graph(phi)) == (min(means), max(means))


def test_karp_handles_acyclic_and_deleted_arcs():
    assert max_cycle_mean([[1], []], [Fraction(1), Fraction(2)]) is None
    assert max_cycle_mean([[0, 1], [0]], [Fraction(5), Fraction(1)], {(0, 0)}) == 3


def test_own_cycle_search_matches_networkx():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randint(1, 6)
        succ = [[v for v in range(n) if rng.random() < 0.4] for _ in range(n)]
        ours = {frozenset(c) for c in simple_cycles(succ)}
        ours_len = len(simple_cycles(succ))
        g = nx.DiGraph([(u, v) for u in range(n) for v in succ[u]])
        g.add_nodes_from(range(n))
        theirs = list(nx.simple_cycles(g))
        assert ours_len == len(theirs)
        comps = {frozenset(c) for c in strongly_connected_components(n, succ)}
        assert comps == {frozenset(c) for c in nx.strongly_connected_components(g)}


@pytest.mark.parametrize("phi, members", [
    (intro_fixture(1, Fraction(9, 10)).phi, {"0"}),
    (intro_fixture(1, 1).phi, {"0", "01", "001"}),
    (SYMMETRIC, {"0", "1"}),
])
def test_max_orbit_set_examples(phi, members):
    ms = max_orbit_set(graph(phi))
    assert set(ms.labels()) == members and not ms.superset


def test_intro_classification_and_certificate():
    c = classify(intro_fixture(1, Fraction(9, 10)).phi)
    assert c.tag == O_K and labels(c) == {"0"}
    assert c.witness.gap == Fraction(1, 15) and c.certificate_radius == Fraction(1, 30)
    assert classify(intro_fixture(1, 1).phi).tag == V_K
    c = classify(intro_fixture(Fraction(9, 10), 1).phi)
    assert c.tag == O_K and labels(c) == {"01"}
    c = classify(SYMMETRIC)
    assert c.tag == U_K and labels(c) == {"0", "1"}


@given(st.integers(0, 10 ** 6))
def test_classification_matches_definition(seed):
    rng = random.Random(seed)
    sft = random_irreducible_sft(rng, 3)
    # small value range makes ties (U_k, V_k) common
    phi = random_potential(rng, sft, rng.randint(1, 2), den=1, span=2)
    tag, top, gap = oracle_classify(phi)
    c = classify(phi)
    assert c.tag == tag and set(c.orbits) == top
    if tag in (O_K, U_K):
        assert c.witness.gap == gap


def _perturb(phi, radius, rng):
    scale = 10 ** 6
    return phi.map(lambda v: v + radius * Fraction(rng.randint(-scale + 1, scale - 1), scale))


@pytest.mark.parametrize("phi", [intro_fixture(1, Fraction(9, 10)).phi, star_fixture(1)[0].phi, SYMMETRIC])
def test_certificate_radius_is_sound(phi):
    rng = random.Random(11)
    c = classify(phi)
    for _ in range(100):
        d = classify(_perturb(phi, c.certificate_radius, rng))
        # maximizers of the perturbation are always among the certified witnesses
        assert set(d.orbits) <= set(c.orbits)
        if c.tag == O_K:
            assert d.tag == O_K and d.orbits == c.orbits
        else:
            assert d.tag in (O_K, U_K)


@pytest.mark.parametrize("alpha", [Fraction(1, 2), 2, 7])
@pytest.mark.parametrize("const", [-1, 3])
def test_affine_invariance(alpha, const):
    for phi in (intro_fixture(1, Fraction(9, 10)).phi, intro_fixture(1, 1).phi, SYMMETRIC):
        c, d = classify(phi), classify(phi.scale(alpha) + const)
        assert c.tag == d.tag and set(c.orbits) == set(d.orbits)


def test_reducible_shift_rejected():
    red = Sft(2, ((1, 1), (0, 1)))
    with pytest.raises(NotTransitive):
        classify(LocallyConstantPotential.constant(red, 0))


def test_critical_graph_examples():
    crit = critical_graph(graph(intro_fixture(1, 1).phi))
    cyl = crit.graph.recoding.cylinders
    assert {(cyl[u], cyl[v]) for u, v in crit.arcs} == {
        ((0, 0), (0, 0)), ((0, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 0), (0, 0)), ((1, 0), (0, 1))}
    g = graph(LocallyConstantPotential.constant(S2, 1, k=2))
    assert crit_all(g)
    with pytest.raises(ExactnessRequired):
        critical_graph(graph(intro_fixture(1, 1).phi.with_precision(8)))


def crit_all(g):
    return critical_graph(g).arcs == frozenset(g.arcs())


@given(st.integers(0, 10 ** 6))
def test_critical_graph_is_union_of_maximal_cycles(seed):
    rng = random.Random(seed)
    sft = random_irreducible_sft(rng, 3)
    phi = random_potential(rng, sft, rng.randint(1, 2), den=1, span=2)
    g = graph(phi)
    b = extreme_means(g)[1]
    arcs = set()
    for cyc in simple_cycles(g.succ):
        if g.cycle_mean(cyc) == b:
            arcs |= {(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))}
    crit = critical_graph(g)
    assert crit.arcs == arcs
    for u in crit.nodes:
        assert crit.succ[u] and any(u in crit.succ[v] for v in crit.nodes)


def oracle_residual_entropy(phi):
    """log of the largest root of the char. polynomial of the maximal-cycle arc graph."""
    g = graph(phi)
    b = extreme_means(g)[1]
    arcs = set()
    for cyc in simple_cycles(g.succ):
        if g.cycle_mean(cyc) == b:
            arcs |= {(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))}
    nodes = sorted({u for a in arcs for u in a})
    pos = {u: i for i, u in enumerate(nodes)}
    mat = sympy.zeros(len(nodes), len(nodes))
    for u, v in arcs:
        mat[pos[u], pos[v]] = 1
    lam = sympy.symbols("lam")
    roots = sympy.real_roots(sympy.Poly(mat.charpoly(lam).as_expr(), lam))
    return math.log(max(float(r) for r in roots))


@pytest.mark.parametrize("phi", [intro_fixture(1, 1).phi, star_fixture(1)[1].phi])
def test_residual_entropy_matches_oracle(phi):
    c = classify(phi)
    ent = residual_entropy_zero_temp(c, 40)
    assert ent.width <= Fraction(1, 2 ** 40)
    assert ent.widen(Fraction(1, 10 ** 12)).contains(oracle_residual_entropy(phi))
    assert ent.hi <= topological_entropy(phi.sft, 40).hi


def test_residual_entropy_zero_on_periodic_classes():
    assert residual_entropy_zero_temp(classify(intro_fixture(1, Fraction(9, 10)).phi)).hi == 0
    assert residual_entropy_zero_temp(classify(SYMMETRIC)).hi == 0


def test_zero_temperature_measures():
    mu = zero_temperature_measure(classify(intro_fixture(1, Fraction(9, 10)).phi))
    assert isinstance(mu, PeriodicOrbitMeasure) and mu.orbit == orbit_of(S2, (0,))
    mu = zero_temperature_measure(classify(intro_fixture(1, 1).phi))
    assert isinstance(mu, MarkovMeasure) and set(mu.nodes) == {(0, 0), (0, 1), (1, 0)}
    mu = zero_temperature_measure(classify(SYMMETRIC))
    assert isinstance(mu, ErgodicComponents)
    assert {m.orbit.label() for m in mu.components} == {"0", "1"}


def test_non_transitive_critical_graph_reports_maximal_pieces():
    # two golden-mean regions with no common symbol: {00,01,10} and {22,23,32}
    s4 = Sft.full_shift(4)
    top = {(0, 0), (0, 1), (1, 0), (2, 2), (2, 3), (3, 2)}
    phi = LocallyConstantPotential.from_function(s4, 2, lambda w: 1 if w in top else 0)
    c = classify(phi)
    assert c.tag == V_K and not c.critical.transitive
    mu = zero_temperature_measure(c)
    assert isinstance(mu, ErgodicComponents) and len(mu.components) == 2


def test_interval_mode_semantics():
    c = classify(intro_fixture(1, Fraction(9, 10)).phi, precision=12)
    assert c.tag == O_K and c.certificate_radius <= Fraction(1, 30)
    tie = classify(intro_fixture(1, 1).phi, precision=12)
    assert tie.tag == UNDETERMINED and tie.candidates == {O_K, U_K, V_K}
    assert classify(SYMMETRIC, precision=12).candidates == {O_K, U_K}
    with pytest.raises(NotResolved):
        residual_entropy_zero_temp(tie)
    with pytest.raises(NotResolved):
        zero_temperature_measure(tie)


@given(st.integers(2, 14))
def test_interval_superset_shrinks_with_precision(n):
    for phi in (intro_fixture(1, Fraction(9, 10)).phi, intro_fixture(1, 1).phi):
        coarse = max_orbit_set(graph(phi), n)
        fine = max_orbit_set(graph(phi), n + 4)
        assert coarse.superset and set(fine.orbits) <= set(coarse.orbits)
        assert set(max_orbit_set(graph(phi)).orbits) <= set(fine.orbits)
