"""Locally constant potentials, their approximants, and periodic-orbit integrals."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .errors import DomainMismatch
from .intervals import Interval, Scalar, as_fraction, as_interval, lower, upper
from .sft import BlockRecoding, PeriodicOrbit, Sft, Word, nonempty_cylinders


@dataclass(frozen=True, eq=False)
class LocallyConstantPotential:
    """phi in LC_k(X): one value (Fraction or Interval) per nonempty k-cylinder."""

    sft: Sft
    k: int
    values: Mapping[Word, Scalar]

    def __post_init__(self):
        cyl = nonempty_cylinders(self.sft, self.k)
        vals = {}
        for w in cyl:
            if w not in self.values:
                raise ValueError(f"missing value on cylinder {self.sft.fmt(w)}")
            v = self.values[w]
            vals[w] = v if isinstance(v, Interval) else as_fraction(v)
        extra = set(self.values) - set(vals)
        if extra:
            raise ValueError(f"values given on empty or wrong-length cylinders: {sorted(extra)}")
        object.__setattr__(self, "values", vals)

    def __eq__(self, other):
        if not isinstance(other, LocallyConstantPotential):
            return NotImplemented
        return self.sft == other.sft and self.k == other.k and self.values == other.values

    def __hash__(self):
        return hash((self.sft, self.k, tuple(self.values.items())))

    def __repr__(self):
        body = ", ".join(f"{self.sft.fmt(w)}: {v}" for w, v in self.values.items())
        return f"LC_{self.k}({{{body}}})"

    @classmethod
    def from_function(cls, sft: Sft, k: int, fn: Callable[[Word], Scalar]) -> "LocallyConstantPotential":
        return cls(sft, k, {w: fn(w) for w in nonempty_cylinders(sft, k)})

    @classmethod
    def constant(cls, sft: Sft, c, k: int = 1) -> "LocallyConstantPotential":
        c = as_fraction(c)
        return cls.from_function(sft, k, lambda w: c)

    @property
    def exact(self) -> bool:
        return not any(isinstance(v, Interval) for v in self.values.values())

    @property
    def cylinders(self) -> list[Word]:
        return list(self.values)

    def value(self, word: Word) -> Scalar:
        """Value on any point whose first k symbols are word[:k]."""
        return self.values[tuple(word[: self.k])]

    def interval_values(self) -> dict[Word, Interval]:
        return {w: as_interval(v) for w, v in self.values.items()}

    def map(self, fn: Callable[[Scalar], Scalar]) -> "LocallyConstantPotential":
        return LocallyConstantPotential(self.sft, self.k, {w: fn(v) for w, v in self.values.items()})

    def __add__(self, c):
        return self.map(lambda v: v + c)

    def scale(self, alpha) -> "LocallyConstantPotential":
        alpha = as_fraction(alpha)
        return self.map(lambda v: v * alpha)

    def refine(self, k: int) -> "LocallyConstantPotential":
        """The same function viewed in LC_k for k >= self.k."""
        if k < self.k:
            raise ValueError("can only refine to longer cylinders")
        return LocallyConstantPotential.from_function(self.sft, k, self.value)

    def with_precision(self, precision: int) -> "LocallyConstantPotential":
        """Dyadic enclosures of width <= 2**-precision (what an oracle query returns)."""
        return self.map(lambda v: as_interval(v).round_out(precision + 1))

    def min_value(self) -> Fraction:
        return min(lower(v) for v in self.values.values())

    def max_value(self) -> Fraction:
        return max(upper(v) for v in self.values.values())

    def sup_distance(self, other: "LocallyConstantPotential") -> Fraction:
        """||self - other||_inf for exact potentials."""
        if self.sft != other.sft:
            raise DomainMismatch("potentials live on different shifts")
        k = max(self.k, other.k)
        a, b = self.refine(k), other.refine(k)
        return max(abs(as_fraction(a.values[w]) - as_fraction(b.values[w])) for w in a.values)


def integral_on_orbit(phi: LocallyConstantPotential, orbit: PeriodicOrbit) -> Scalar:
    """mu_x(phi) = (1/n) sum_{i<n} phi(f^i x)."""
    if orbit.sft != phi.sft:
        raise DomainMismatch("orbit and potential live on different shifts")
    total = sum((phi.value(w) for w in orbit.windows(phi.k)), Fraction(0))
    return total / orbit.period


def variation(phi: LocallyConstantPotential, j: int) -> Scalar:
    """var_j(phi): largest oscillation of phi over a nonempty j-cylinder."""
    if not 1 <= j <= phi.k:
        raise ValueError("need 1 <= j <= k")
    groups: dict[Word, list[Scalar]] = {}
    for w, v in phi.values.items():
        groups.setdefault(w[:j], []).append(v)
    if phi.exact:
        return max(max(vs) - min(vs) for vs in groups.values())
    spans = []
    for vs in groups.values():
        hi = max(upper(v) for v in vs) - min(lower(v) for v in vs)
        lo = max(Fraction(0), max(lower(v) for v in vs) - min(upper(v) for v in vs))
        spans.append(Interval(lo, hi))
    return Interval(max(s.lo for s in spans), max(s.hi for s in spans))


@dataclass(frozen=True)
class PotentialApproximant:
    """Oracle n -> (m_n, phi_n) with rational phi_n in LC_{m_n} and ||phi - phi_n|| < 2**-n."""

    query: Callable[[int], tuple[int, LocallyConstantPotential]]

    def __call__(self, n: int) -> tuple[int, LocallyConstantPotential]:
        return self.query(n)

    @classmethod
    def exact(cls, phi: LocallyConstantPotential) -> "PotentialApproximant":
        return cls(lambda n: (phi.k, phi))

    @classmethod
    def noisy_lift(cls, phi: LocallyConstantPotential, extra: int) -> "PotentialApproximant":
        """Lift phi to LC_{k+extra} and wiggle each refined value by less than 2**-(n+1).

        Mimics an oracle that reports far longer cylinders than phi needs.
        """

        def query(n: int):
            m = phi.k + extra
            lifted = phi.refine(m)
            eps = Fraction(1, 2 ** (n + 2))
            vals = {}
            for i, (w, v) in enumerate(lifted.values.items()):
                vals[w] = as_fraction(v) + (eps if i % 3 == 0 else -eps if i % 3 == 1 else 0)
            return m, LocallyConstantPotential(phi.sft, m, vals)

        return cls(query)


def reduce_cylinder_length(approx: PotentialApproximant, n: int) -> tuple[int, LocallyConstantPotential]:
    """Return (ell_n, phi_tilde) with ||phi - phi_tilde|| < 2**-n and ell_n <= j when var_j(phi) = 0.

    Queries the approximant at precision n + 3 so that merging cylinders whose
    oscillation is below 2**-(n+1) stays inside the 2**-n budget.
    """
    query_n = n + 3
    m, phi_n = approx(query_n)
    threshold = Fraction(1, 2 ** (query_n - 2))
    ell = m
    for i in range(1, m + 1):
        var = variation(phi_n, i)
        if upper(var) <= threshold:
            ell = i
            break
    reps: dict[Word, Scalar] = {}
    for w, v in phi_n.values.items():  # lexicographic, so first refining cylinder wins
        reps.setdefault(w[:ell], v)
    return ell, LocallyConstantPotential(phi_n.sft, ell, reps)


def push_to_lc1(phi: LocallyConstantPotential, rec: BlockRecoding) -> LocallyConstantPotential:
    if rec.k != phi.k or rec.base != phi.sft:
        raise DomainMismatch("recoding does not match the potential's shift and cylinder length")
    return LocallyConstantPotential(rec.recoded, 1, {(i,): phi.values[w] for i, w in enumerate(rec.cylinders)})


def shift_nonneg(phi: LocallyConstantPotential) -> tuple[Fraction, LocallyConstantPotential]:
    """(q, phi + q) with q = -min(phi), so the shifted potential is >= 0."""
    q = -phi.min_value()
    return q, phi + q


def matrix_potential(sft: Sft, matrix) -> LocallyConstantPotential:
    """LC_2 potential from a d x d table: value on C(ij) is matrix[i][j]."""
    return LocallyConstantPotential.from_function(sft, 2, lambda w: matrix[w[0]][w[1]])
