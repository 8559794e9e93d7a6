"""Modal operators on compound indices.

``box_sort``/``dia_sort`` quantify over the indices that differ from ``s`` only
in one sort, moving that coordinate along its own frame. ``dependent_box``
handles accessibility defined on the product directly: a finite predicate
over pairs of compounds, or the light cone over continuous (time, location).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .errors import UnboundedQuery, UnknownSort
from .measure import IntervalSet, parse_rational
from .modal import (ContinuousFrame, CountableFrame, box_continuous, dia_continuous)
from .model import Compound, FiniteFrame, IntensionalModel


def _frames_of(source) -> Mapping:
    if isinstance(source, IntensionalModel):
        return source.frames
    if isinstance(source, ProductFrame):
        return source.per_sort
    raise TypeError(f"expected a model or product frame, got {source!r}")


def _truth(p, s) -> int:
    if isinstance(p, Mapping):
        return int(p[s])
    return int(p(s))


def _shifted(source, sort, s: Compound):
    frames = _frames_of(source)
    if sort not in frames:
        raise UnknownSort(f"sort {sort!r} is not declared")
    frame = frames[sort]
    if isinstance(frame, FiniteFrame):
        return [s.replace(sort, w) for w in frame.successors(s[sort])]
    if isinstance(frame, CountableFrame):
        return [s.replace(sort, j) for j in frame.accessible(s[sort])]
    return None


def _slice(p, sort, s):
    if not hasattr(p, "slice"):
        raise TypeError(f"quantifying over continuous sort {sort!r} needs a sliced proposition")
    return p.slice(sort, s)


def box_sort(source, sort: str, p, s: Compound) -> int:
    """1 iff p holds at every s' with s_sort R s'_sort and equal other coordinates."""
    targets = _shifted(source, sort, s)
    if targets is None:
        frame = _frames_of(source)[sort]
        return box_continuous(frame, _slice(p, sort, s), s[sort])
    return int(all(_truth(p, t) for t in targets))


def dia_sort(source, sort: str, p, s: Compound) -> int:
    targets = _shifted(source, sort, s)
    if targets is None:
        frame = _frames_of(source)[sort]
        return dia_continuous(frame, _slice(p, sort, s), s[sort])
    return int(any(_truth(p, t) for t in targets))


def lift_sort(op, source, sort, p):
    """``op`` (box_sort or dia_sort) as a new proposition, for nesting."""
    return lambda s: op(source, sort, p, s)


# -- product frames ----------------------------------------------------------


@dataclass(frozen=True)
class LightCone:
    """(t, x) accesses (t', x') iff t' > t and |x' - x| <= c (t' - t)."""

    c: Fraction
    time: str = "time"
    loc: str = "loc"

    def __post_init__(self):
        object.__setattr__(self, "c", parse_rational(self.c))
        if self.c <= 0:
            raise ValueError("the cone speed must be positive")

    def slice_at(self, s: Compound, t2) -> IntervalSet:
        """Accessible locations at time ``t2`` (empty unless t2 > t)."""
        t, x = s[self.time], s[self.loc]
        dt = parse_rational(t2) - t
        if dt <= 0:
            return IntervalSet()
        r = self.c * dt
        return IntervalSet(((x - r, x + r),))


@dataclass(frozen=True)
class ProductFrame:
    per_sort: Mapping[str, object]
    dependent: Optional[object] = None

    def __post_init__(self):
        object.__setattr__(self, "per_sort", dict(self.per_sort))
        if isinstance(self.dependent, LightCone):
            for srt in (self.dependent.time, self.dependent.loc):
                if not isinstance(self.per_sort.get(srt), ContinuousFrame):
                    raise ValueError(f"a light cone needs {srt!r} to be a continuous sort")

    @property
    def sorts(self):
        return tuple(self.per_sort)

    def finite_space(self) -> list[Compound]:
        axes = []
        for srt, frame in self.per_sort.items():
            if not isinstance(frame, FiniteFrame):
                raise UnboundedQuery(f"sort {srt!r} is not finite")
            axes.append(frame.worlds)
        return [Compound(tuple(zip(self.sorts, combo))) for combo in itertools.product(*axes)]


@dataclass(frozen=True)
class SpacetimeProp:
    """A proposition over (time, loc), piecewise constant in time.

    ``bands`` holds ``(t_lo, t_hi, truth)`` with ``truth`` a MeasurableProp over
    locations, or None for "true at every location". Times outside all bands
    take ``default``.
    """

    bands: tuple = ()
    default: int = 0
    time: str = "time"
    loc: str = "loc"

    @classmethod
    def constant(cls, bit: int, **kw):
        return cls((), bit, **kw)

    def band_at(self, t2):
        for lo, hi, truth in self.bands:
            if lo <= t2 < hi:
                return truth, True
        return None, bool(self.default)

    def __call__(self, s: Compound) -> int:
        truth, on = self.band_at(s[self.time])
        if truth is None:
            return int(on)
        return truth.eval_at(s[self.loc])


def _cone_measures(cone: LightCone, p: SpacetimeProp, s: Compound, window):
    """(accessible measure, measure where p fails) inside the time window."""
    t0, t1 = (parse_rational(w) for w in window)
    t, x = s[cone.time], s[cone.loc]
    start = max(t0, t)
    if start >= t1:
        return Fraction(0), Fraction(0)
    # piecewise-constant bands split [start, t1) into pieces
    cuts = {start, t1}
    for lo, hi, _ in p.bands:
        for e in (lo, hi):
            if start < e < t1:
                cuts.add(e)
    cuts = sorted(cuts)
    total = fail = Fraction(0)
    for a, b in zip(cuts, cuts[1:]):
        truth, on = p.band_at(a)
        width = lambda t2: 2 * cone.c * (t2 - t)
        total += (b - a) * (width(a) + width(b)) / 2
        if truth is None:
            if not on:
                fail += (b - a) * (width(a) + width(b)) / 2
            continue
        base = truth.base

        def failing(t2, base=base):
            return cone.slice_at(s, t2).difference(base).measure() if t2 > t else Fraction(0)

        # cone edges cross an endpoint e when c (t2 - t) = |e - x|
        knots = {a, b}
        for lo, hi in base.intervals:
            for e in (lo, hi):
                k = t + abs(e - x) / cone.c
                if a < k < b:
                    knots.add(k)
        knots = sorted(knots)
        for u, v in zip(knots, knots[1:]):
            fail += (v - u) * (failing(u) + failing(v)) / 2
    return total, fail


def dependent_box(pf: ProductFrame, p, s: Compound, window=None) -> int:
    """Necessity under accessibility defined on the product space."""
    dep = pf.dependent
    if dep is None:
        raise ValueError("product frame has no dependent relation")
    if isinstance(dep, LightCone):
        if window is None:
            raise UnboundedQuery("light-cone queries need a time window (t0, t1)")
        total, fail = _cone_measures(dep, p, s, window)
        return int(fail == 0)
    return int(all(_truth(p, s2) for s2 in pf.finite_space() if dep(s, s2)))


def dependent_dia(pf: ProductFrame, p, s: Compound, window=None) -> int:
    dep = pf.dependent
    if dep is None:
        raise ValueError("product frame has no dependent relation")
    if isinstance(dep, LightCone):
        if window is None:
            raise UnboundedQuery("light-cone queries need a time window (t0, t1)")
        total, fail = _cone_measures(dep, p, s, window)
        return int(total - fail > 0)
    return int(any(_truth(p, s2) for s2 in pf.finite_space() if dep(s, s2)))


def cone_measures(pf: ProductFrame, p: SpacetimeProp, s: Compound, window):
    """Exact (accessible measure, failure measure) for a light-cone frame."""
    if window is None:
        raise UnboundedQuery("light-cone queries need a time window (t0, t1)")
    return _cone_measures(pf.dependent, p, s, window)


def independent_product(source, sorts) -> Callable:
    """The relation on compounds that moves each listed sort along its own frame."""
    frames = _frames_of(source)

    def related(s, s2):
        for srt in s.sorts:
            if srt in sorts:
                if s2[srt] not in frames[srt].successors(s[srt]):
                    return False
            elif s2[srt] != s[srt]:
                return False
        return True

    return related
