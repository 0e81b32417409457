"""Characteristic series, Newton polygons and stabilization in d."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .ring import RingContext, RingElement, Valuation


@dataclass(frozen=True)
class CharSeries:
    """Coefficients c_0..c_n of det(1 - tM), c_0 = 1."""

    coeffs: tuple[RingElement, ...]
    ring: RingContext

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] != self.ring.one():
            raise ValueError("c_0 must be exactly 1")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def modulus(self) -> int:
        return self.ring.modulus

    def valuations(self) -> list[Valuation]:
        return [c.valuation() for c in self.coeffs]

    def __getitem__(self, i: int) -> RingElement:
        return self.coeffs[i]

    def __len__(self) -> int:
        return len(self.coeffs)


def berkowitz(M: Sequence[Sequence[RingElement]], ring: RingContext) -> list[RingElement]:
    """Coefficients of det(tI - M), highest degree first, without divisions.

    Reading the list from the front gives det(1 - tM) in increasing powers.
    """
    n = len(M)
    zero = ring.zero()
    vect = [ring.one()]
    for r in range(n):
        R = M[r][:r]
        col = [M[i][r] for i in range(r)]
        A = [row[:r] for row in M[:r]]
        T = [ring.one(), -M[r][r]]
        for _ in range(r):
            T.append(-sum((x * y for x, y in zip(R, col)), zero))
            col = [sum((A[i][j] * col[j] for j in range(r)), zero) for i in range(r)]
        vect = [
            sum((T[i - j] * vect[j] for j in range(min(i, r) + 1)), zero)
            for i in range(r + 2)
        ]
    return vect


def char_series(M) -> CharSeries:
    """det(1 - tM) for an UpMatrix or a square list of ring elements."""
    entries = getattr(M, "entries", M)
    if entries and any(len(row) != len(entries) for row in entries):
        raise ValueError("matrix must be square")
    ring = M.ring if hasattr(M, "ring") else (entries[0][0].ctx if entries else None)
    if ring is None:
        raise ValueError("cannot infer the ring of an empty matrix")
    return CharSeries(tuple(berkowitz(entries, ring)), ring)


@dataclass(frozen=True)
class Slope:
    slope: Fraction
    mult: int
    provisional: bool = False  # an unknown coefficient could change this segment
    lower_bound: bool = False  # the segment ends at a coefficient that vanished mod p^N

    def __str__(self) -> str:
        s = str(self.slope)
        if self.lower_bound:
            s = ">=" + s
        elif self.provisional:
            s += "?"
        return s + (f" x{self.mult}" if self.mult > 1 else "")


@dataclass(frozen=True)
class SlopeMultiset:
    segments: tuple[Slope, ...]
    provisional: bool = False

    def as_list(self, include_provisional: bool = False) -> list[Fraction]:
        """Certain slopes, or also the provisional ones that are not mere bounds."""
        out = []
        for s in self.segments:
            if s.lower_bound or (s.provisional and not include_provisional):
                continue
            out += [s.slope] * s.mult
        return out

    def certain(self) -> list[Fraction]:
        return self.as_list(False)

    @property
    def total(self) -> int:
        return sum(s.mult for s in self.segments)

    def cuspidal(self) -> "SlopeMultiset":
        """Drop one certain slope-0 entry (the constant, or the ordinary Eisenstein line)."""
        segs = list(self.segments)
        for k, s in enumerate(segs):
            if s.slope == 0 and not s.provisional:
                if s.mult == 1:
                    del segs[k]
                else:
                    segs[k] = Slope(s.slope, s.mult - 1)
                return SlopeMultiset(tuple(segs), self.provisional)
        raise ValueError("no certain slope-0 entry to remove")


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    hull: list[tuple[int, int]] = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_slopes(cs: CharSeries | Sequence[Valuation]) -> SlopeMultiset:
    """Slopes of the lower convex hull of (i, v(c_i)).

    The hull is first taken over the coefficients up to the last one with a
    known valuation; zero coefficients inside that range enter with value N.
    An edge is provisional when a coefficient known only to be >= N, inside
    the edge or the first one after it, could still fall below its supporting
    line.  Farther unknown coefficients are not tested: valuations of the
    series grow faster than linearly, so they cannot reach the edge.  The trailing zero coefficients are
    covered by the hull continued through the points (i, N); those segments
    only bound their slopes from below.
    """
    vals = cs.valuations() if isinstance(cs, CharSeries) else list(cs)
    if not vals or vals[0].twice != 0 or vals[0].bound:
        raise ValueError("c_0 must be a unit")
    pts = [(i, v.twice) for i, v in enumerate(vals)]
    bound = [i for i, v in enumerate(vals) if v.bound]
    last = max(i for i, v in enumerate(vals) if not v.bound)
    head = _lower_hull(pts[: last + 1])
    segs = []
    for (x1, y1), (x2, y2) in zip(head, head[1:]):
        # line through the edge, compared against every unknown point at its floor
        near = [i for i in bound if x1 < i <= x2] + [i for i in bound if i > x2][:1]
        undercut = any((y2 - y1) * (i - x1) > (pts[i][1] - y1) * (x2 - x1) for i in near)
        segs.append(Slope(Fraction(y2 - y1, 2 * (x2 - x1)), x2 - x1, undercut or x2 in bound, x2 in bound))
    tail = _lower_hull(pts[last:])
    for (x1, y1), (x2, y2) in zip(tail, tail[1:]):
        segs.append(Slope(Fraction(y2 - y1, 2 * (x2 - x1)), x2 - x1, True, True))
    return SlopeMultiset(tuple(segs), any(s.provisional for s in segs))


def classicality_flag(slope: Fraction, k: int) -> str:
    if slope < k - 1:
        return "classical"
    if slope == k - 1:
        return "boundary"
    return "unknown"


def classicality_flags(slopes: SlopeMultiset | Sequence[Fraction], k: int) -> list[tuple[Fraction, str]]:
    """Coleman's threshold per slope: below k-1 classical, at k-1 boundary."""
    values = slopes.certain() if isinstance(slopes, SlopeMultiset) else list(slopes)
    return [(Fraction(s), classicality_flag(Fraction(s), k)) for s in values]


@dataclass
class StabilizationReport:
    d_list: list[int]
    N: int
    series: list[CharSeries]
    agree_prefix: list[int] = field(default_factory=list)  # per consecutive pair

    @property
    def stable_prefix(self) -> int:
        """Largest index m with c_0..c_m equal across every run (-1 if none)."""
        return min(self.agree_prefix) if self.agree_prefix else len(self.series[0]) - 1

    def stable_coefficients(self) -> list[RingElement]:
        return list(self.series[-1].coeffs[: self.stable_prefix + 1])

    @property
    def stable_indices(self) -> list[int]:
        """Indices i with c_i identical in every run, not only inside the prefix."""
        n = min(len(s) for s in self.series)
        first = self.series[0].coeffs
        return [
            i for i in range(n)
            if all((s.coeffs[i].a, s.coeffs[i].b) == (first[i].a, first[i].b) for s in self.series[1:])
        ]


def _agree(a: CharSeries, b: CharSeries) -> int:
    m = -1
    for x, y in zip(a.coeffs, b.coeffs):
        if (x.a, x.b) != (y.a, y.b):
            break
        m += 1
    return m


def stabilization_check(spec, d_list: Sequence[int], N: int | None = None, **kwargs) -> StabilizationReport:
    """Compute det(1 - tM_d) for each d and find the common coefficient prefix."""
    from .upmatrix import up_matrix

    d_list = list(d_list)
    if not d_list or any(b < a for a, b in zip(d_list, d_list[1:])):
        raise ValueError("d_list must be non-empty and ascending")
    N = N or spec.N
    cache: dict[int, CharSeries] = {}
    series = []
    for d in d_list:
        if d not in cache:
            cache[d] = char_series(up_matrix(replace(spec, d=d, N=N, qprec=None), **kwargs))
        series.append(cache[d])
    prefix = [_agree(a, b) for a, b in zip(series, series[1:])]
    return StabilizationReport(d_list, N, series, prefix)
