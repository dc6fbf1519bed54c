"""Ergodic optimization of locally constant potentials on the k-block graph.

Nodes of the block graph are the nonempty k-cylinders; the arc u -> v carries the
weight of the source cylinder u, so the mean weight of a cycle is the integral of
the potential over the corresponding periodic orbit.  The maximal integral b is
the maximum cycle mean (Karp).  Arcs lying on maximal cycles are extracted by
reweighting with -b and keeping the tight arcs of a longest-path potential.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainMismatch, ExactnessRequired, NotResolved, TooLarge
from .intervals import Interval, Scalar, as_interval, lower, upper
from .measures import ErgodicComponents, PeriodicOrbitMeasure, parry_measure
from .perron import log_perron_enclosure
from .potential import LocallyConstantPotential
from .sft import BlockRecoding, PeriodicOrbit, Sft, higher_block_recode, require_irreducible

CYCLE_LIMIT = 100_000
COMBO_LIMIT = 4096

O_K, U_K, V_K, UNDETERMINED = "O_k", "U_k", "V_k", "undetermined"


@dataclass(frozen=True, eq=False)
class WeightedBlockGraph:
    phi: LocallyConstantPotential
    recoding: BlockRecoding
    succ: tuple[tuple[int, ...], ...]
    weights: tuple[Scalar, ...]

    @classmethod
    def from_potential(cls, phi: LocallyConstantPotential) -> "WeightedBlockGraph":
        rec = higher_block_recode(phi.sft, phi.k)
        succ = tuple(tuple(rec.recoded.successors(i)) for i in range(rec.recoded.d))
        weights = tuple(phi.values[w] for w in rec.cylinders)
        return cls(phi, rec, succ, weights)

    @property
    def n(self) -> int:
        return len(self.succ)

    @property
    def k(self) -> int:
        return self.recoding.k

    @property
    def exact(self) -> bool:
        return self.phi.exact

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.succ[u]]

    def lower_weights(self) -> list[Fraction]:
        return [lower(w) for w in self.weights]

    def upper_weights(self) -> list[Fraction]:
        return [upper(w) for w in self.weights]

    def exact_weights(self) -> list[Fraction]:
        if not self.exact:
            raise ExactnessRequired("graph carries interval weights")
        return list(self.weights)

    def orbit(self, cycle: Sequence[int]) -> PeriodicOrbit:
        return self.recoding.unmap_cycle(cycle)

    def cycle_mean(self, cycle: Sequence[int]) -> Scalar:
        return sum((self.weights[u] for u in cycle), Fraction(0)) / len(cycle)

    def at_precision(self, precision: int | None) -> "WeightedBlockGraph":
        if precision is None:
            return self
        phi = self.phi.with_precision(precision)
        return WeightedBlockGraph(phi, self.recoding, self.succ, tuple(phi.values[w] for w in self.recoding.cylinders))


# ---------------------------------------------------------------- graph kernels

def max_cycle_mean(succ: Sequence[Sequence[int]], weight: Sequence[Fraction],
                   banned: Iterable[tuple[int, int]] = ()) -> Fraction | None:
    """Karp's maximum cycle mean with a virtual source; None if the graph is acyclic."""
    n = len(succ)
    banned = set(banned)
    arcs = [(u, v) for u in range(n) for v in succ[u] if (u, v) not in banned]
    levels: list[list[Fraction | None]] = [[Fraction(0)] * n]
    for _ in range(n):
        prev = levels[-1]
        cur: list[Fraction | None] = [None] * n
        for u, v in arcs:
            pu = prev[u]
            if pu is None:
                continue
            cand = pu + weight[u]
            if cur[v] is None or cand > cur[v]:
                cur[v] = cand
        levels.append(cur)
    last = levels[n]
    best = None
    for v in range(n):
        if last[v] is None:
            continue
        worst = None
        for t in range(n):
            dt = levels[t][v]
            if dt is None:
                continue
            q = (last[v] - dt) / (n - t)
            if worst is None or q < worst:
                worst = q
        if best is None or worst > best:
            best = worst
    return best


def min_cycle_mean(succ, weight, banned=()) -> Fraction | None:
    m = max_cycle_mean(succ, [-w for w in weight], banned)
    return None if m is None else -m


def strongly_connected_components(n: int, succ: Sequence[Sequence[int]]) -> list[list[int]]:
    """Tarjan, iterative; components returned with sorted node lists."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(n):
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


def simple_cycles(succ: Sequence[Sequence[int]], nodes: Iterable[int] | None = None,
                  limit: int = CYCLE_LIMIT) -> list[tuple[int, ...]]:
    """Simple cycles, each rooted at its smallest node; raises TooLarge past ``limit``."""
    allowed = set(range(len(succ))) if nodes is None else set(nodes)
    out: list[tuple[int, ...]] = []
    for s in sorted(allowed):
        path = [s]
        on_path = {s}
        stack = [iter(v for v in succ[s] if v in allowed and v >= s)]
        while stack:
            for v in stack[-1]:
                if v == s:
                    out.append(tuple(path))
                    if len(out) > limit:
                        raise TooLarge(f"more than {limit} simple cycles")
                elif v not in on_path:
                    path.append(v)
                    on_path.add(v)
                    stack.append(iter(w for w in succ[v] if w in allowed and w >= s))
                    break
            else:
                stack.pop()
                on_path.discard(path.pop())
    return out


def enumerate_elementary_cycles(g: WeightedBlockGraph, limit: int = CYCLE_LIMIT) -> list[PeriodicOrbit]:
    """All k-elementary periodic orbits, by independent simple-cycle search (test oracle)."""
    import networkx as nx

    dg = nx.DiGraph()
    dg.add_nodes_from(range(g.n))
    dg.add_edges_from(g.arcs())
    orbits = []
    for i, cyc in enumerate(nx.simple_cycles(dg)):
        if i >= limit:
            raise TooLarge(f"more than {limit} elementary cycles")
        orbits.append(g.orbit(cyc))
    return sorted(orbits, key=lambda o: (o.period, o.canonical))


def _cycle_arcs(cycle: Sequence[int]) -> list[tuple[int, int]]:
    return [(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]


def _tight_components(succ, weight: Sequence[Fraction], b: Fraction):
    n = len(succ)
    p = [Fraction(0)] * n
    for _ in range(n + 1):
        changed = False
        for u in range(n):
            base = p[u] + weight[u] - b
            for v in succ[u]:
                if base > p[v]:
                    p[v] = base
                    changed = True
        if not changed:
            break
    else:  # a positive cycle would mean b is not the maximum
        raise ValueError("b is below the maximum cycle mean")
    tight = [tuple(v for v in succ[u] if p[u] + weight[u] - b == p[v]) for u in range(n)]
    comps = []
    for comp in strongly_connected_components(n, tight):
        cs = set(comp)
        if len(comp) > 1 or comp[0] in tight[comp[0]]:
            comps.append((comp, {u: tuple(v for v in tight[u] if v in cs) for u in comp}))
    return comps


# ---------------------------------------------------------------- results

@dataclass(frozen=True, eq=False)
class CriticalGraph:
    """Union of the maximal-mean cycles of a block graph (the support arena of maximizing measures)."""

    graph: WeightedBlockGraph
    b: Fraction
    components: tuple[tuple[int, ...], ...]
    succ: dict  # node -> tuple of critical successors

    @property
    def nodes(self) -> list[int]:
        return sorted(self.succ)

    @property
    def arcs(self) -> frozenset[tuple[int, int]]:
        return frozenset((u, v) for u, vs in self.succ.items() for v in vs)

    def cycles(self, limit: int = CYCLE_LIMIT) -> list[tuple[int, ...]]:
        full = [self.succ.get(u, ()) for u in range(self.graph.n)]
        return simple_cycles(full, self.succ.keys(), limit)

    def is_union_of_cycles(self) -> bool:
        return all(len(vs) == 1 for vs in self.succ.values())

    @property
    def transitive(self) -> bool:
        return len(self.components) == 1

    def adjacency(self, component: Sequence[int]) -> list[list[int]]:
        pos = {u: i for i, u in enumerate(component)}
        mat = [[0] * len(component) for _ in component]
        for u in component:
            for v in self.succ[u]:
                mat[pos[u]][pos[v]] = 1
        return mat

    def component_words(self, component: Sequence[int]):
        return [self.graph.recoding.cylinders[u] for u in component]


def critical_graph(g: WeightedBlockGraph, b: Fraction | None = None) -> CriticalGraph:
    if not g.exact:
        raise ExactnessRequired("the critical graph needs exact weights")
    w = g.exact_weights()
    if b is None:
        b = max_cycle_mean(g.succ, w)
    comps = _tight_components(g.succ, w, b)
    succ = {}
    for _, s in comps:
        succ.update(s)
    return CriticalGraph(g, b, tuple(tuple(c) for c, _ in comps), succ)


def extreme_means(g: WeightedBlockGraph, precision: int | None = None) -> tuple[Scalar, Scalar]:
    """(a, b): minimum and maximum cycle means; enclosures when weights are intervals."""
    g = g.at_precision(precision)
    if g.exact:
        w = g.exact_weights()
        return min_cycle_mean(g.succ, w), max_cycle_mean(g.succ, w)
    lo, hi = g.lower_weights(), g.upper_weights()
    # both extremes are monotone in every weight
    a = Interval(min_cycle_mean(g.succ, lo), min_cycle_mean(g.succ, hi))
    b = Interval(max_cycle_mean(g.succ, lo), max_cycle_mean(g.succ, hi))
    return a, b


@dataclass(frozen=True, eq=False)
class MaxOrbitSet:
    orbits: tuple[PeriodicOrbit, ...]
    cycles: tuple[tuple[int, ...], ...]
    value: Scalar
    gap: Scalar | None  # None: no competing elementary orbit, or not computed
    superset: bool = False

    def labels(self) -> list[str]:
        return [o.label() for o in self.orbits]


def _best_excluded(g: WeightedBlockGraph, weight, members: Sequence[tuple[int, ...]]) -> Fraction | None:
    """Largest mean of a simple cycle that is none of ``members``.

    Such a cycle misses at least one arc of every member, so it survives in some
    graph with one arc deleted from each member.
    """
    choices = [_cycle_arcs(c) for c in members]
    count = 1
    for c in choices:
        count *= len(c)
    if count > COMBO_LIMIT:
        raise TooLarge(f"{count} arc-deletion combinations")
    best = None
    seen = set()
    for combo in itertools.product(*choices):
        key = frozenset(combo)
        if key in seen:
            continue
        seen.add(key)
        m = max_cycle_mean(g.succ, weight, key)
        if m is not None and (best is None or m > best):
            best = m
    return best


def _sorted_cycles(g, cycles):
    pairs = sorted(((g.orbit(c), c) for c in cycles), key=lambda oc: (oc[0].period, oc[0].canonical))
    return tuple(o for o, _ in pairs), tuple(c for _, c in pairs)


def max_orbit_set(g: WeightedBlockGraph, precision: int | None = None, *, with_gap: bool = True,
                  limit: int = CYCLE_LIMIT) -> MaxOrbitSet:
    """Maximizing elementary orbits.

    Exact weights give exactly the maximizing set (and the gap to the best excluded
    orbit when ``with_gap``).  Interval weights give every orbit whose mean could
    still reach the maximum, flagged as a superset.
    """
    g = g.at_precision(precision)
    if g.exact:
        crit = critical_graph(g)
        orbits, cycles = _sorted_cycles(g, crit.cycles(limit))
        gap = None
        if with_gap:
            best = _best_excluded(g, g.exact_weights(), cycles)
            gap = None if best is None else crit.b - best
        return MaxOrbitSet(orbits, cycles, crit.b, gap)
    _, b = extreme_means(g)
    means = [(c, as_interval(g.cycle_mean(c))) for c in simple_cycles(g.succ, limit=limit)]
    keep = [c for c, m in means if m.hi >= b.lo]
    rest = [m.hi for c, m in means if m.hi < b.lo]
    orbits, cycles = _sorted_cycles(g, keep)
    gap = (b.lo - max(rest)) if rest else None
    return MaxOrbitSet(orbits, cycles, b, gap, superset=True)


@dataclass(frozen=True, eq=False)
class Classification:
    """Tag with its witness set.

    ``certificate_radius`` is a sup-norm radius: every potential that close is still
    maximized only by witness orbits, so O_k keeps its tag and orbit while U_k stays in
    {O_k, U_k} (exact ties may break).  None means no competing orbit exists at all.
    """

    tag: str
    k: int
    witness: MaxOrbitSet
    certificate_radius: Fraction | None
    phi: LocallyConstantPotential
    graph: WeightedBlockGraph
    critical: CriticalGraph | None = None
    precision: int | None = None
    candidates: frozenset = frozenset()

    @property
    def resolved(self) -> bool:
        return self.tag != UNDETERMINED

    @property
    def orbits(self) -> tuple[PeriodicOrbit, ...]:
        return self.witness.orbits

    @property
    def b(self) -> Scalar:
        return self.witness.value

    def __repr__(self):
        extra = f", precision={self.precision}" if self.precision is not None else ""
        return f"Classification({self.tag}, k={self.k}, orbits={list(self.orbits)}{extra})"


def _pairwise_disjoint(supports: Sequence[frozenset]) -> bool:
    seen: set = set()
    for s in supports:
        if seen & s:
            return False
        seen |= s
    return True


def classify(phi: LocallyConstantPotential, sft: Sft | None = None, precision: int | None = None) -> Classification:
    """O_k / U_k / V_k tag of phi at its own cylinder length k.

    With interval values (or a ``precision``), only an O_k answer can be certified;
    anything that would need an exact tie comes back undetermined.
    """
    if sft is not None and sft != phi.sft:
        raise DomainMismatch("potential is defined on a different shift")
    require_irreducible(phi.sft)
    g = WeightedBlockGraph.from_potential(phi).at_precision(precision)
    if g.exact:
        return _classify_exact(g)
    return _classify_interval(g, precision)


def _classify_exact(g: WeightedBlockGraph) -> Classification:
    crit = critical_graph(g)
    if not crit.is_union_of_cycles():
        orbits, cycles = _sorted_cycles(g, crit.cycles())
        return Classification(V_K, g.k, MaxOrbitSet(orbits, cycles, crit.b, None), Fraction(0),
                              g.phi, g, crit)
    # each critical component is one cycle: O_k or U_k with disjoint supports
    cycles = []
    for comp in crit.components:
        start = comp[0]
        cyc, u = [start], crit.succ[start][0]
        while u != start:
            cyc.append(u)
            u = crit.succ[u][0]
        cycles.append(tuple(cyc))
    orbits, cycles = _sorted_cycles(g, cycles)
    best = _best_excluded(g, g.exact_weights(), cycles)
    gap = None if best is None else crit.b - best
    tag = O_K if len(cycles) == 1 else U_K
    return Classification(tag, g.k, MaxOrbitSet(orbits, cycles, crit.b, gap),
                          None if gap is None else gap / 2, g.phi, g, crit)


def _classify_interval(g: WeightedBlockGraph, precision: int | None) -> Classification:
    lo, hi = g.lower_weights(), g.upper_weights()
    b = Interval(max_cycle_mean(g.succ, lo), max_cycle_mean(g.succ, hi))
    lo_crit = _tight_components(g.succ, lo, b.lo)
    comp, csucc = lo_crit[0]
    cyc, u = [comp[0]], csucc[comp[0]][0]
    while u not in cyc:
        cyc.append(u)
        u = csucc[u][0]
    cyc = tuple(cyc[cyc.index(u):])
    mean_lo = sum(lo[v] for v in cyc) / len(cyc)
    rival = max((m for e in _cycle_arcs(cyc) if (m := max_cycle_mean(g.succ, hi, {e})) is not None), default=None)
    if rival is None or rival < mean_lo:
        gap = None if rival is None else mean_lo - rival
        ms = MaxOrbitSet((g.orbit(cyc),), (cyc,), b, gap)
        return Classification(O_K, g.k, ms, None if gap is None else gap / 2, g.phi, g,
                              precision=precision)
    try:
        ms = max_orbit_set(g, with_gap=False)
        disjoint = _pairwise_disjoint([o.support(g.k) for o in ms.orbits])
        cands = frozenset({O_K, U_K} if disjoint else {O_K, U_K, V_K})
    except TooLarge:
        ms = MaxOrbitSet((), (), b, None, superset=True)
        cands = frozenset({O_K, U_K, V_K})
    return Classification(UNDETERMINED, g.k, ms, Fraction(0), g.phi, g, precision=precision,
                          candidates=cands)


def _component_entropies(crit: CriticalGraph, precision: int) -> list[Interval]:
    return [log_perron_enclosure(crit.adjacency(c), precision) for c in crit.components]


def zero_temperature_measure(c: Classification):
    """Limit of equilibrium states as beta -> infinity, as far as it is determined."""
    if not c.resolved:
        raise NotResolved(f"classification undetermined at precision {c.precision}")
    if c.tag == O_K:
        return PeriodicOrbitMeasure(c.orbits[0])
    if c.tag == U_K:
        return ErgodicComponents(tuple(PeriodicOrbitMeasure(o) for o in c.orbits))
    crit = c.critical
    if crit is None:
        raise ExactnessRequired("V_k measure needs the exact critical graph")
    base = c.phi.sft
    if crit.transitive:
        comp = crit.components[0]
        return parry_measure(base, c.k, crit.component_words(comp), crit.adjacency(comp))
    ent = _component_entropies(crit, 40)
    top = max(e.lo for e in ent)
    # entropy ties cannot be refuted by enclosures, so every piece that may be maximal stays
    parts = []
    for comp, e in zip(crit.components, ent):
        if e.hi < top:
            continue
        if all(len(crit.succ[u]) == 1 for u in comp):
            cyc, u = [comp[0]], crit.succ[comp[0]][0]
            while u != comp[0]:
                cyc.append(u)
                u = crit.succ[u][0]
            parts.append(PeriodicOrbitMeasure(c.graph.orbit(cyc)))
        else:
            parts.append(parry_measure(base, c.k, crit.component_words(comp), crit.adjacency(comp)))
    return ErgodicComponents(tuple(parts))


def residual_entropy_zero_temp(c: Classification, precision: int = 30) -> Interval:
    """Entropy of ground states: 0 on O_k/U_k, log Perron root of the critical graph on V_k."""
    if not c.resolved:
        raise NotResolved(f"classification undetermined at precision {c.precision}")
    if c.tag in (O_K, U_K):
        return Interval.point(0)
    if c.critical is None:
        raise ExactnessRequired("V_k entropy needs the exact critical graph")
    ent = _component_entropies(c.critical, precision)
    return Interval(max(e.lo for e in ent), max(e.hi for e in ent))
