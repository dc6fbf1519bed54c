"""Certified Perron roots of nonnegative (interval) matrices.

For any nonnegative matrix M and any positive vector v the Collatz-Wielandt
bounds give

    min_i (Mv)_i / v_i  <=  rho(M)  <=  max_i (Mv)_i / v_i.

The approximate Perron vector v only controls how tight the bracket is; the
bracket itself is evaluated in outward-rounded interval arithmetic against the
entrywise lower/upper matrices, so it is valid for every matrix in the box.

v comes from power iteration on M + cI (c > 0 makes an irreducible M
primitive; c is taken near the current root estimate so that eigenvalues of
modulus rho on the circle do not stall the iteration) followed by a few steps
of shifted inverse iteration on small matrices.  Working precision is raised
until the requested width is reached.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from mpmath import iv, mp

from .errors import PrecisionNotReached, Reducible
from .intervals import Interval, as_interval, iv_precision

DENSE_LIMIT = 150
POWER_STEPS = 80
INVERSE_STEPS = 6
MAX_BITS = 8192


@dataclass
class PerronData:
    root: Interval
    right: list  # mpf, positive, max-normalised
    left: list | None
    bits: int


def _structure(matrix) -> list[list[tuple[int, Interval]]]:
    rows = []
    for row in matrix:
        entries = []
        for j, a in enumerate(row):
            a = as_interval(a)
            if a.lo < 0:
                raise ValueError("matrix must be nonnegative")
            if a.hi > 0:
                entries.append((j, a))
        rows.append(entries)
    return rows


def _strongly_connected(rows) -> bool:
    n = len(rows)
    fwd = [[j for j, _ in r] for r in rows]
    bwd: list[list[int]] = [[] for _ in range(n)]
    for i, r in enumerate(fwd):
        for j in r:
            bwd[j].append(i)
    for adj in (fwd, bwd):
        seen = {0}
        stack = [0]
        while stack:
            for j in adj[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        if len(seen) != n:
            return False
    return True


def _transpose(rows, n):
    cols: list[list[tuple[int, Interval]]] = [[] for _ in range(n)]
    for i, r in enumerate(rows):
        for j, a in r:
            cols[j].append((i, a))
    return cols


class _Engine:
    """Per-precision mpmath view of one sparse interval matrix."""

    def __init__(self, rows, bits):
        self.n = len(rows)
        self.bits = bits
        with mp.workprec(bits):
            self.mid = [[(j, mp.mpf(a.mid.numerator) / a.mid.denominator) for j, a in r] for r in rows]
        with iv_precision(bits):
            self.box = [[(j, a.to_iv()) for j, a in r] for r in rows]

    def ratios(self, v):
        out = []
        for i, r in enumerate(self.mid):
            out.append(mp.fsum(a * v[j] for j, a in r) / v[i])
        return out

    def power(self, v, steps, rel_target):
        for _ in range(steps):
            r = self.ratios(v)
            lo, hi = min(r), max(r)
            if hi - lo <= rel_target * lo:
                return v, True
            c = hi
            w = [r[i] * v[i] + c * v[i] for i in range(self.n)]
            top = max(w)
            v = [x / top for x in w]
        return v, False

    def inverse(self, v, steps):
        r = self.ratios(v)
        hi = max(r)
        sigma = hi * (1 + mp.mpf(2) ** (-(self.bits // 2)))
        a = mp.zeros(self.n, self.n)
        for i, row in enumerate(self.mid):
            for j, x in row:
                a[i, j] = -x
            a[i, i] += sigma
        for _ in range(steps):
            try:
                y = mp.lu_solve(a, mp.matrix(v))
            except ZeroDivisionError:
                return v
            y = [y[i] for i in range(self.n)]
            top = max(y, key=abs)
            y = [x / top for x in y]
            if min(y) <= 0:
                return v
            v = y
        return v

    def certify(self, v) -> Interval:
        qs = []
        with iv_precision(self.bits):
            vv = [iv.mpf(x) for x in v]
            for i, r in enumerate(self.box):
                s = iv.mpf(0)
                for j, a in r:
                    s += a * vv[j]
                qs.append(Interval.from_iv(s / vv[i]))
        return Interval(min(q.lo for q in qs), max(q.hi for q in qs))


def _vector(engine: _Engine, v0, rel_bits: int):
    n = engine.n
    with mp.workprec(engine.bits):
        v = [mp.mpf(1)] * n if v0 is None else [mp.mpf(x) for x in v0]
        if min(v) <= 0:
            v = [mp.mpf(1)] * n
        target = mp.mpf(2) ** (-rel_bits - 2)
        v, ok = engine.power(v, POWER_STEPS, target)
        if not ok and n <= DENSE_LIMIT:
            v = engine.inverse(v, INVERSE_STEPS)
            v, ok = engine.power(v, 4, target)
        if not ok:
            v, ok = engine.power(v, POWER_STEPS * 10, target)
        return v


def _narrow(root: Interval, rel_bits: int) -> bool:
    return root.lo > 0 and root.width * 2 ** rel_bits <= root.lo


def perron_data(matrix: Sequence[Sequence], rel_bits: int, *, left: bool = False,
                start=None, max_bits: int = MAX_BITS) -> PerronData:
    """Certified Perron root with relative width <= 2**-rel_bits, plus approximate vectors."""
    rows = _structure(matrix)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in matrix):
        raise ValueError("matrix must be square and nonempty")
    if not _strongly_connected(rows):
        raise Reducible("matrix is not irreducible")
    span = max(abs(a.hi.numerator.bit_length() - a.hi.denominator.bit_length())
               for r in rows for _, a in r)
    bits = rel_bits + 32 + min(span, 64)
    v = start
    while bits <= max_bits:
        engine = _Engine(rows, bits)
        v = _vector(engine, v, rel_bits)
        root = engine.certify(v)
        if _narrow(root, rel_bits):
            lv = None
            if left:
                tengine = _Engine(_transpose(rows, n), bits)
                lv = _vector(tengine, None, rel_bits)
                root = root.intersect(tengine.certify(lv))
            return PerronData(root, v, lv, bits)
        bits *= 2
    raise PrecisionNotReached(f"Perron root not resolved to 2^-{rel_bits} within {max_bits} bits")


def perron_enclosure(matrix: Sequence[Sequence], precision: int, **kw) -> Interval:
    """Interval of width <= 2**-precision containing the Perron root."""
    rows = _structure(matrix)
    bound = max(sum(a.hi for _, a in r) for r in rows)  # max row sum >= rho
    scale = max(0, bound.numerator.bit_length() - bound.denominator.bit_length() + 1)
    data = perron_data(matrix, precision + scale + 1, **kw)
    return data.root


def log_perron_enclosure(matrix: Sequence[Sequence], precision: int, **kw) -> Interval:
    """Interval of width <= 2**-precision containing log of the Perron root."""
    data = perron_data(matrix, precision + 2, **kw)
    return log_of_root(data.root, precision)


def log_of_root(root: Interval, precision: int) -> Interval:
    with iv_precision(precision + 40):
        lo = iv.log(root.to_iv())
    out = Interval.from_iv(lo)
    return out.round_out(precision + 8)

