"""One-sided subshifts of finite type, words, periodic orbits and block recodings."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NotAdmissible, NotTransitive
from .intervals import Interval, as_fraction

Word = tuple[int, ...]


def format_word(word: Sequence[int], d: int) -> str:
    if d > 10:
        return ".".join(str(s) for s in word)
    return "".join(str(s) for s in word)


def parse_word(text: str, d: int) -> Word:
    text = text.strip()
    if not text:
        return ()
    if d > 10 or "." in text:
        return tuple(int(s) for s in text.split("."))
    return tuple(int(c) for c in text)


@dataclass(frozen=True)
class Sft:
    """Phase space X_A: alphabet {0..d-1}, 0/1 transition matrix, metric base theta."""

    d: int
    transitions: tuple[tuple[int, ...], ...]
    theta: Fraction = Fraction(1, 2)

    def __post_init__(self):
        rows = tuple(tuple(int(a) for a in row) for row in self.transitions)
        object.__setattr__(self, "transitions", rows)
        object.__setattr__(self, "theta", as_fraction(self.theta))
        if self.d < 1 or len(rows) != self.d or any(len(r) != self.d for r in rows):
            raise ValueError("transitions must be a d x d matrix")
        if any(a not in (0, 1) for r in rows for a in r):
            raise ValueError("transitions must be 0/1")
        for i in range(self.d):
            if not any(rows[i]) or not any(rows[j][i] for j in range(self.d)):
                raise ValueError(f"symbol {i} is stranded (empty row or column)")
        if not 0 < self.theta < 1:
            raise ValueError("theta must lie in (0, 1)")

    @classmethod
    def full_shift(cls, d: int, theta=Fraction(1, 2)) -> "Sft":
        return cls(d, tuple((1,) * d for _ in range(d)), theta)

    @classmethod
    def golden_mean(cls, theta=Fraction(1, 2)) -> "Sft":
        return cls(2, ((1, 1), (1, 0)), theta)

    def allowed(self, a: int, b: int) -> bool:
        return self.transitions[a][b] == 1

    def successors(self, a: int) -> list[int]:
        return [b for b in range(self.d) if self.transitions[a][b]]

    def admissible(self, word: Sequence[int]) -> bool:
        if any(not 0 <= s < self.d for s in word):
            return False
        return all(self.transitions[a][b] for a, b in zip(word, word[1:]))

    def fmt(self, word: Sequence[int]) -> str:
        return format_word(word, self.d)

    def parse(self, text: str) -> Word:
        return parse_word(text, self.d)


def is_irreducible(sft: Sft) -> bool:
    """Every symbol reaches every symbol (including itself) in >= 1 steps."""
    for start in range(sft.d):
        seen: set[int] = set()
        stack = sft.successors(start)
        while stack:
            a = stack.pop()
            if a in seen:
                continue
            seen.add(a)
            stack.extend(sft.successors(a))
        if len(seen) != sft.d:
            return False
    return True


def require_irreducible(sft: Sft) -> None:
    if not is_irreducible(sft):
        raise NotTransitive("transition matrix is not irreducible")


def nonempty_cylinders(sft: Sft, k: int) -> list[Word]:
    """Admissible words of length k in lexicographic order (m_c(k) of them)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    words: list[Word] = [(a,) for a in range(sft.d)]
    for _ in range(k - 1):
        words = [w + (b,) for w in words for b in sft.successors(w[-1])]
    return words


def periodic_window(segment: Sequence[int], start: int, length: int) -> Word:
    n = len(segment)
    return tuple(segment[(start + i) % n] for i in range(length))


def _prime_segment(tau: Word) -> Word:
    n = len(tau)
    for p in range(1, n + 1):
        if n % p == 0 and tau == tau[:p] * (n // p):
            return tau[:p]
    return tau


def _min_rotation(tau: Word) -> Word:
    return min(tau[i:] + tau[:i] for i in range(len(tau)))


@dataclass(frozen=True, eq=False)
class PeriodicOrbit:
    """The periodic point O(segment), compared as an orbit (up to rotation)."""

    sft: Sft
    segment: Word
    canonical: Word = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "canonical", _min_rotation(self.segment))

    def __eq__(self, other):
        if not isinstance(other, PeriodicOrbit):
            return NotImplemented
        return self.sft == other.sft and self.canonical == other.canonical

    def __hash__(self):
        return hash((self.sft, self.canonical))

    def __repr__(self):
        return f"O({self.sft.fmt(self.segment)})"

    @property
    def period(self) -> int:
        return len(self.segment)

    def window(self, i: int, k: int) -> Word:
        return periodic_window(self.segment, i, k)

    def windows(self, k: int) -> list[Word]:
        return [self.window(i, k) for i in range(self.period)]

    def support(self, k: int) -> frozenset[Word]:
        """k-cylinder support: the k-cylinders visited along the orbit."""
        return frozenset(self.windows(k))

    def is_elementary(self, k: int) -> bool:
        return len(self.support(k)) == self.period

    def label(self) -> str:
        return self.sft.fmt(self.segment)


def orbit_of(sft: Sft, tau: Iterable[int]) -> PeriodicOrbit:
    """O(tau), reduced to its prime period."""
    tau = tuple(tau)
    if not tau:
        raise ValueError("empty generating segment")
    if not sft.admissible(tau) or not sft.allowed(tau[-1], tau[0]):
        raise NotAdmissible(f"O({sft.fmt(tau)}) is not in X")
    return PeriodicOrbit(sft, _prime_segment(tau))


@dataclass(frozen=True)
class BlockRecoding:
    """Higher-block presentation: symbols of ``recoded`` are the nonempty k-cylinders of ``base``."""

    base: Sft
    k: int
    cylinders: tuple[Word, ...]
    recoded: Sft

    @property
    def index(self) -> dict[Word, int]:
        return {w: i for i, w in enumerate(self.cylinders)}

    def map_orbit(self, orbit: PeriodicOrbit) -> PeriodicOrbit:
        """Image under the conjugacy h: symbols are the k-windows along the orbit."""
        idx = self.index
        return PeriodicOrbit(self.recoded, tuple(idx[w] for w in orbit.windows(self.k)))

    def unmap_cycle(self, nodes: Sequence[int]) -> PeriodicOrbit:
        """Orbit of X whose k-window itinerary is the given cycle of cylinder indices."""
        return PeriodicOrbit(self.base, tuple(self.cylinders[i][0] for i in nodes))


def higher_block_recode(sft: Sft, k: int) -> BlockRecoding:
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return BlockRecoding(sft, 1, tuple((a,) for a in range(sft.d)), sft)
    cyl = nonempty_cylinders(sft, k)
    idx = {w: i for i, w in enumerate(cyl)}
    m = len(cyl)
    rows = [[0] * m for _ in range(m)]
    for i, w in enumerate(cyl):
        for b in sft.successors(w[-1]):
            rows[i][idx[w[1:] + (b,)]] = 1
    return BlockRecoding(sft, k, tuple(cyl), Sft(m, tuple(tuple(r) for r in rows), sft.theta))


def topological_entropy(sft: Sft, precision: int = 30) -> Interval:
    """Enclosure of log(Perron root of the transition matrix), width <= 2**-precision."""
    from .perron import log_perron_enclosure

    require_irreducible(sft)
    return log_perron_enclosure(sft.transitions, precision)

