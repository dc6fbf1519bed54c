"""Pressure, its one-sided derivatives, entropy enclosures and equilibrium Markov measures.

P(beta) is the log of the Perron root of B[u][v] = A'[u][v] * exp(beta * phi'(u))
on the block graph.  Derivatives are bracketed by convexity: the left difference
quotient over a step delta is a lower bound for the left derivative, the right
quotient an upper bound for the right derivative.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NotSeparated
from .intervals import Interval, as_fraction, as_interval, exp, lower, upper
from .measures import MarkovMeasure, markov_entropy, markov_from_perron, measure_integral, w1_distance
from .perron import log_of_root, perron_data
from .potential import LocallyConstantPotential, push_to_lc1, shift_nonneg
from .sft import higher_block_recode, require_irreducible

EXP_GUARD_BITS = 40
SANDWICH_HALVINGS = 80


@dataclass(frozen=True)
class TransferMatrix:
    rows: tuple[tuple[Interval, ...], ...]
    beta: Fraction

    @classmethod
    def build(cls, succ: Sequence[Sequence[int]], values: Sequence[Fraction], beta, bits: int) -> "TransferMatrix":
        beta = as_fraction(beta)
        n = len(succ)
        weights = [exp(as_interval(beta * v), bits) for v in values]
        zero = Interval.point(0)
        rows = []
        for u in range(n):
            row = [zero] * n
            for v in succ[u]:
                row[v] = weights[u]
            rows.append(tuple(row))
        return cls(tuple(rows), beta)


class PressureFunction:
    """beta -> P(beta * phi) with caching and warm-started Perron vectors.

    Interval-valued potentials are handled through their endpoint potentials:
    P is monotone in phi for beta >= 0 (and antitone for beta < 0).
    """

    def __init__(self, phi: LocallyConstantPotential):
        require_irreducible(phi.sft)
        self.phi = phi
        self.recoding = higher_block_recode(phi.sft, phi.k)
        self.phi1 = push_to_lc1(phi, self.recoding)
        rec = self.recoding.recoded
        self.succ = [rec.successors(i) for i in range(rec.d)]
        vals = [self.phi1.values[(i,)] for i in range(rec.d)]
        self._sides = [[lower(v) for v in vals]] if phi.exact else [[lower(v) for v in vals], [upper(v) for v in vals]]
        self._cache: dict = {}
        self._start: dict = {}

    def matrix(self, beta, bits: int, side: int = 0) -> TransferMatrix:
        return TransferMatrix.build(self.succ, self._sides[side], beta, bits)

    def _one(self, beta: Fraction, precision: int, side: int) -> Interval:
        key = (beta, precision, side)
        if key not in self._cache:
            tm = self.matrix(beta, precision + EXP_GUARD_BITS, side)
            data = perron_data(tm.rows, precision + 2, start=self._start.get(side))
            self._start[side] = data.right
            self._cache[key] = log_of_root(data.root, precision)
        return self._cache[key]

    def __call__(self, beta, precision: int = 30) -> Interval:
        beta = as_fraction(beta)
        parts = [self._one(beta, precision, s) for s in range(len(self._sides))]
        return Interval.hull(*parts)

    def equilibrium(self, beta, precision: int = 40) -> MarkovMeasure:
        beta = as_fraction(beta)
        tm = self.matrix(beta, precision + EXP_GUARD_BITS)
        rec = self.recoding
        mu, root = markov_from_perron(self.phi.sft, rec.k, rec.cylinders, tm.rows, precision + 8, beta)
        p = log_of_root(root, precision)
        if len(self._sides) > 1:
            p = Interval.hull(p, self(beta, precision))
        v = markov_entropy(mu) + beta * as_interval(measure_integral(mu, self.phi))
        defect = max(Fraction(0), p.lo - v.hi, v.lo - p.hi)
        return MarkovMeasure(mu.sft, mu.block, mu.nodes, mu.pi, mu.p, beta, mu.stationarity_defect, defect)


def _engine(phi) -> PressureFunction:
    return phi if isinstance(phi, PressureFunction) else PressureFunction(phi)


def pressure(phi, beta, precision: int = 30) -> Interval:
    """Enclosure of P(beta * phi) of width <= 2**-precision."""
    return _engine(phi)(beta, precision)


@dataclass(frozen=True)
class DerivativeEnclosure:
    minus: Interval
    plus: Interval
    separated: bool
    step: Fraction

    @property
    def value(self) -> Interval:
        """Enclosure of the derivative when both sides meet."""
        if not self.separated:
            raise NotSeparated("one-sided derivatives were not separated")
        return Interval.hull(self.minus, self.plus)


def pressure_derivative(phi, beta, precision: int = 30, max_step_bits: int | None = None) -> DerivativeEnclosure:
    """Certified enclosures of the left and right derivatives of P at beta.

    ``separated`` is True when [sup of left quotients, inf of right quotients] has
    width <= 2**-precision, which brackets both one-sided derivatives at once.
    """
    f = _engine(phi)
    beta = as_fraction(beta)
    if max_step_bits is None:
        max_step_bits = precision + 24
    best_left, best_right = None, None
    j = 2
    while True:
        delta = Fraction(1, 2 ** j)
        q = precision + j + 3
        p0 = f(beta, q)
        left = (p0 - f(beta - delta, q)) / delta
        right = (f(beta + delta, q) - p0) / delta
        best_left = left.lo if best_left is None else max(best_left, left.lo)
        best_right = right.hi if best_right is None else min(best_right, right.hi)
        if best_right - best_left <= Fraction(1, 2 ** precision):
            enc = Interval(best_left, best_right)
            return DerivativeEnclosure(enc, enc, True, delta)
        if j >= max_step_bits:
            # best_left <= left derivative <= right derivative <= best_right, not narrow enough
            enc = Interval(best_left, best_right)
            return DerivativeEnclosure(enc, enc, False, delta)
        j += 2 if j < precision // 2 else 1


def entropy_at_beta(phi, beta, precision: int = 30) -> Interval:
    """h(beta) = P(beta) - beta * P'(beta), when the derivative is resolved."""
    f = _engine(phi)
    beta = as_fraction(beta)
    extra = abs(beta).__ceil__().bit_length() + 1
    d = pressure_derivative(f, beta, precision + extra)
    if not d.separated:
        raise NotSeparated(f"pressure derivative at beta={beta} not resolved")
    return f(beta, precision + 1) - beta * d.value


@dataclass(frozen=True)
class PressurePoint:
    beta: Fraction
    P: Interval
    derivative: DerivativeEnclosure
    h: Interval | None


def pressure_point(phi, beta, precision: int = 30) -> PressurePoint:
    f = _engine(phi)
    beta = as_fraction(beta)
    extra = abs(beta).__ceil__().bit_length() + 1
    d = pressure_derivative(f, beta, precision + extra)
    h = f(beta, precision + 1) - beta * d.value if d.separated else None
    return PressurePoint(beta, f(beta, precision), d, h)


@dataclass(frozen=True)
class SandwichResult:
    interval: Interval
    beta1: Fraction
    beta2: Fraction
    reached: bool


def entropy_sandwich(phi, beta1, beta2, precision: int = 20, max_halvings: int = SANDWICH_HALVINGS) -> SandwichResult:
    """Interval [P(b1) - b2 a, P(b2) - b1 a], a the secant slope, containing the entropy
    of an equilibrium state at some beta in (b1, b2).

    The pair is shrunk to [b1, (b1+b2)/2] until the width is <= 2**-precision.
    """
    f = _engine(phi)
    if f.phi.min_value() < 0:
        raise ValueError("sandwich bound needs a nonnegative potential; apply shift_nonneg first")
    b1, b2 = as_fraction(beta1), as_fraction(beta2)
    if not 0 <= b1 < b2:
        raise ValueError("need 0 <= beta1 < beta2")
    target = Fraction(1, 2 ** precision)
    best = None
    for _ in range(max_halvings + 1):
        ratio = b2 / (b2 - b1)
        q = max(precision, 0) + 4 + ratio.__ceil__().bit_length()
        p1, p2 = f(b1, q), f(b2, q)
        slope = (p2 - p1) / (b2 - b1)
        enc = Interval(lower(p1 - b2 * slope), upper(p2 - b1 * slope))
        res = SandwichResult(enc, b1, b2, enc.width <= target)
        if best is None or enc.width < best.interval.width:
            best = res
        if res.reached:
            return res
        b2 = (b1 + b2) / 2
    return best


@dataclass(frozen=True)
class UpperBoundStep:
    n: int
    sandwich: SandwichResult
    u: Fraction  # certified upper bound from this step
    bound: Fraction  # running minimum


def residual_entropy_upper(phi: LocallyConstantPotential, steps: int = 12) -> list[UpperBoundStep]:
    """Nonincreasing certified upper bounds for the residual entropy.

    For beta_n = 2**n the sandwich on [beta_n, beta_{n+1}] encloses h(beta) for
    some beta there, and h(beta) only decreases toward the residual entropy.
    No rate of convergence is implied.
    """
    _, shifted = shift_nonneg(phi)
    f = PressureFunction(shifted)
    out: list[UpperBoundStep] = []
    running = None
    for n in range(steps):
        s = entropy_sandwich(f, 2 ** n, 2 ** (n + 1), n)
        u = max(s.interval.mid + Fraction(1, 2 ** n), s.interval.hi)
        running = u if running is None else min(running, u)
        out.append(UpperBoundStep(n, s, u, running))
    return out


def equilibrium_measure(phi, beta, precision: int = 40) -> MarkovMeasure:
    """Markov measure pi ~ l * r, p(u,v) ~ B[u][v] r_v from the transfer matrix's Perron data."""
    return _engine(phi).equilibrium(beta, precision)


@dataclass(frozen=True)
class AnnealStep:
    beta: Fraction
    P: Interval
    integral: Interval  # mu_beta(phi) = P'(beta)
    entropy: Interval
    w1: Interval | None


def anneal(phi: LocallyConstantPotential, betas: Iterable, precision: int = 24, limit_measure=None,
           depth: int = 8) -> list[AnnealStep]:
    """Integrals and entropies of equilibrium states along a beta schedule.

    When ``limit_measure`` (a zero-temperature measure) is given, each step also
    reports the W1 distance of the equilibrium state to it.
    """
    f = _engine(phi)
    out = []
    for beta in betas:
        pt = pressure_point(f, beta, precision)
        if pt.h is None:
            raise NotSeparated(f"pressure derivative at beta={pt.beta} not resolved")
        w1 = None
        if limit_measure is not None:
            w1 = w1_distance(f.equilibrium(pt.beta), limit_measure, depth)
        out.append(AnnealStep(pt.beta, pt.P, pt.derivative.value, pt.h, w1))
    return out

