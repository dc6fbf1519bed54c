"""Invariant measures: periodic-orbit measures, finite Markov measures and component lists.

Distances use the ultrametric d(x, y) = theta ** (1 + length of common prefix).
On cylinder marginals of depth m the optimal transport cost has a closed form
on the prefix tree, and the true W1 lies within theta ** m of it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from mpmath import iv, mp

from .errors import DomainMismatch, WeightsUnknown, WrongVariant
from .intervals import Interval, Scalar, as_interval, iv_precision, mpf_to_fraction
from .perron import perron_data
from .potential import LocallyConstantPotential, integral_on_orbit
from .sft import PeriodicOrbit, Sft, Word

DEFAULT_DEPTH = 8


@dataclass(frozen=True)
class PeriodicOrbitMeasure:
    orbit: PeriodicOrbit

    @property
    def sft(self) -> Sft:
        return self.orbit.sft

    def __repr__(self):
        return f"delta[{self.orbit!r}]"


@dataclass(frozen=True, eq=False)
class MarkovMeasure:
    """Stationary Markov chain on admissible L-blocks, read as a shift-invariant measure.

    ``pi`` and ``p`` are exact rationals; rows of ``p`` sum to exactly 1.  When the chain
    approximates a measure defined through Perron data, ``stationarity_defect`` records
    max_v |(pi p)_v - pi_v| and ``variational_defect`` (if set) the distance of
    h + beta * integral from the pressure enclosure.
    """

    sft: Sft
    block: int
    nodes: tuple[Word, ...]
    pi: tuple[Fraction, ...]
    p: tuple[tuple[Fraction, ...], ...]
    beta: Fraction | None = None
    stationarity_defect: Fraction = Fraction(0)
    variational_defect: Fraction | None = None
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(self.pi) != len(self.nodes) or len(self.p) != len(self.nodes):
            raise ValueError("pi and p must be indexed by nodes")
        if any(len(w) != self.block or not self.sft.admissible(w) for w in self.nodes):
            raise ValueError("nodes must be admissible words of the block length")
        if sum(self.pi) != 1 or any(x < 0 for x in self.pi):
            raise ValueError("pi must be a probability vector")
        for i, row in enumerate(self.p):
            if any(x < 0 for x in row) or sum(row) != 1:
                raise ValueError(f"row {i} of p is not stochastic")
            for j, x in enumerate(row):
                if x and self.nodes[i][1:] != self.nodes[j][:-1]:
                    raise ValueError("p has mass on a non-overlapping pair of blocks")
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(self.nodes)})

    def index(self, word: Word) -> int:
        return self._index[word]

    def __repr__(self):
        return f"MarkovMeasure(block={self.block}, nodes={len(self.nodes)}, beta={self.beta})"


@dataclass(frozen=True)
class ErgodicComponents:
    """Candidate ergodic components of a measure whose weights are not determined."""

    components: tuple

    def __post_init__(self):
        if not self.components:
            raise ValueError("components list must be nonempty")

    @property
    def sft(self) -> Sft:
        return self.components[0].sft


InvariantMeasure = Union[PeriodicOrbitMeasure, MarkovMeasure, ErgodicComponents]


def stationarity_defect(pi, p) -> Fraction:
    n = len(pi)
    return max(abs(sum(pi[u] * p[u][v] for u in range(n)) - pi[v]) for v in range(n))


def _mp_fraction(x, bits: int) -> Fraction:
    with mp.workprec(bits):
        return mpf_to_fraction((+mp.mpf(x))._mpf_)


def markov_from_perron(sft: Sft, block: int, nodes: Sequence[Word], matrix, rel_bits: int = 60,
                       beta=None) -> tuple[MarkovMeasure, Interval]:
    """Chain p(u,v) = B_uv r_v / sum_w B_uw r_w with pi proportional to l_u r_u.

    Returns the measure and the certified Perron root of ``matrix``.
    """
    data = perron_data(matrix, rel_bits, left=True)
    n = len(nodes)
    with mp.workprec(data.bits):
        r = data.right
        lft = data.left
        mids = [[as_interval(a).mid for a in row] for row in matrix]
        keep = rel_bits + 16  # mantissa bits kept per entry; rows are renormalised exactly
        raw_pi = [_mp_fraction(lft[u] * r[u], keep) for u in range(n)]
        rows = []
        for u in range(n):
            raw = [_mp_fraction(mp.mpf(x.numerator) / x.denominator * r[v], keep) if x else Fraction(0)
                   for v, x in enumerate(mids[u])]
            s = sum(raw)
            rows.append(tuple(x / s for x in raw))
    total = sum(raw_pi)
    pi = tuple(x / total for x in raw_pi)
    mu = MarkovMeasure(sft, block, tuple(nodes), pi, tuple(rows),
                       beta=None if beta is None else Fraction(beta),
                       stationarity_defect=stationarity_defect(pi, rows))
    return mu, data.root


def parry_measure(sft: Sft, block: int, nodes: Sequence[Word], adjacency) -> MarkovMeasure:
    """Maximal-entropy Markov measure of the 0/1 graph on ``nodes``."""
    mu, _ = markov_from_perron(sft, block, nodes, adjacency)
    return mu


def periodic_as_markov(orbit: PeriodicOrbit, block: int) -> MarkovMeasure:
    """The orbit measure written as a deterministic chain (block must make the orbit elementary)."""
    nodes = orbit.windows(block)
    if len(set(nodes)) != len(nodes):
        raise ValueError("orbit is not elementary at this block length")
    n = len(nodes)
    p = tuple(tuple(Fraction(int(v == (u + 1) % n)) for v in range(n)) for u in range(n))
    return MarkovMeasure(orbit.sft, block, tuple(nodes), tuple(Fraction(1, n) for _ in nodes), p)


def cylinder_marginals(mu: InvariantMeasure, m: int) -> dict[Word, Fraction]:
    """mu[w] for words of length m with positive mass."""
    if m < 1:
        raise ValueError("depth must be >= 1")
    if isinstance(mu, ErgodicComponents):
        raise WeightsUnknown("component weights are not determined")
    if isinstance(mu, PeriodicOrbitMeasure):
        out: dict[Word, Fraction] = {}
        n = mu.orbit.period
        for w in mu.orbit.windows(m):
            out[w] = out.get(w, Fraction(0)) + Fraction(1, n)
        return out
    if isinstance(mu, MarkovMeasure):
        L = mu.block
        if m <= L:
            out = {}
            for w, x in zip(mu.nodes, mu.pi):
                if x:
                    out[w[:m]] = out.get(w[:m], Fraction(0)) + x
            return out
        cur = {w: x for w, x in zip(mu.nodes, mu.pi) if x}
        for _ in range(m - L):
            nxt: dict[Word, Fraction] = {}
            for w, x in cur.items():
                u = mu.index(w[-L:])
                for v, q in enumerate(mu.p[u]):
                    if q:
                        nxt[w + mu.nodes[v][-1:]] = x * q
            cur = nxt
        return cur
    raise WrongVariant(f"not a measure: {type(mu).__name__}")


def measure_integral(mu: InvariantMeasure, phi: LocallyConstantPotential) -> Scalar:
    if isinstance(mu, ErgodicComponents):
        raise WeightsUnknown("cannot integrate against components without weights")
    if mu.sft != phi.sft:
        raise DomainMismatch("measure and potential live on different shifts")
    if isinstance(mu, PeriodicOrbitMeasure):
        return integral_on_orbit(phi, mu.orbit)
    marg = cylinder_marginals(mu, phi.k)
    return sum((x * phi.value(w) for w, x in marg.items()), Fraction(0))


def markov_entropy(mu: InvariantMeasure, bits: int = 80) -> Interval:
    """-sum_u pi_u sum_v p(u,v) log p(u,v), certified for the stored chain."""
    if not isinstance(mu, MarkovMeasure):
        raise WrongVariant("entropy is only computed for Markov measures")
    with iv_precision(bits):
        total = iv.mpf(0)
        for u, row in enumerate(mu.p):
            if not mu.pi[u]:
                continue
            s = iv.mpf(0)
            for q in row:
                if q and q != 1:
                    qi = as_interval(q).to_iv()
                    s -= qi * iv.log(qi)
            total += as_interval(mu.pi[u]).to_iv() * s
        out = Interval.from_iv(total)
    return Interval(max(out.lo, Fraction(0)), max(out.hi, Fraction(0)))


def _common_prefix(a: Word, b: Word) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def quotient_cost(theta: Fraction, a: Word, b: Word) -> Fraction:
    """Distance between the m-cylinders of a and b in the depth-m quotient metric."""
    if a == b:
        return Fraction(0)
    return theta ** (_common_prefix(a, b) + 1)


def w1_distance(mu1: InvariantMeasure, mu2: InvariantMeasure, depth: int = DEFAULT_DEPTH) -> Interval:
    """Enclosure [W_q, W_q + theta**depth] of the Wasserstein-Kantorovich distance.

    W_q is the exact transport cost between depth-m marginals under the quotient
    ultrametric, computed on the prefix tree: each prefix p of length j carries an
    edge of length ell_j and contributes ell_j * |mu1(p) - mu2(p)|.
    """
    if isinstance(mu1, ErgodicComponents) or isinstance(mu2, ErgodicComponents):
        raise WeightsUnknown("cannot transport component lists without weights")
    if mu1.sft != mu2.sft:
        raise DomainMismatch("measures live on different shifts")
    theta = mu1.sft.theta
    m1, m2 = cylinder_marginals(mu1, depth), cylinder_marginals(mu2, depth)
    total = Fraction(0)
    for j in range(1, depth + 1):
        edge = theta ** depth / 2 if j == depth else (theta ** j - theta ** (j + 1)) / 2
        a: dict[Word, Fraction] = {}
        for marg, sign in ((m1, 1), (m2, -1)):
            for w, x in marg.items():
                a[w[:j]] = a.get(w[:j], Fraction(0)) + sign * x
        total += edge * sum(abs(x) for x in a.values())
    return Interval(total, total + theta ** depth)
