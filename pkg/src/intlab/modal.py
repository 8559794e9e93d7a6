"""Necessity and possibility over finite, countable and continuous frames.

Finite frames go through the adjacency operator: accumulate ``A v`` and
compare each component with the out-degree (box) or with 1 (dia). Countable
frames are evaluated one world at a time through a successor rule. Continuous
frames use a translation-invariant window and exact interval measure.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .errors import SpaceMismatch, TypeMismatch
from .measure import IntervalSet, MeasurableProp, parse_rational
from .model import FiniteFrame, Index
from .types import Idx
from .vectors import LinMap, Vec, apply_lin


# -- finite frames -----------------------------------------------------------


@lru_cache(maxsize=256)
def adjacency_operator(frame: FiniteFrame) -> LinMap:
    """A as a linear map: (A v)_i = sum_j A_ij v_j."""
    space = Idx(frame.sort)
    cols = {}
    for j, wj in enumerate(frame.worlds):
        cols[Index(frame.sort, wj)] = Vec(space, {
            Index(frame.sort, wi): 1 for i, wi in enumerate(frame.worlds) if frame.adj[i][j]})
    return LinMap(space, space, cols)


def prop_vector(frame: FiniteFrame, bits) -> Vec:
    """v(phi) from a 0/1 sequence (or a ``"1101"`` string) in world order."""
    if isinstance(bits, str):
        bits = [int(c) for c in bits.strip()]
    bits = list(bits)
    if len(bits) != len(frame.worlds) or any(b not in (0, 1) for b in bits):
        raise TypeMismatch(f"need {len(frame.worlds)} bits in 0/1, got {bits}")
    return Vec(Idx(frame.sort), {Index(frame.sort, w): b for w, b in zip(frame.worlds, bits)})


def values(frame: FiniteFrame, v: Vec) -> list[Fraction]:
    return [v[Index(frame.sort, w)] for w in frame.worlds]


def bits(frame: FiniteFrame, v: Vec) -> list[int]:
    return [int(x) for x in values(frame, v)]


def _check_prop(frame, v):
    if not isinstance(v, Vec) or v.space != Idx(frame.sort):
        raise SpaceMismatch(f"expected a proposition vector over the worlds of {frame.sort!r}")
    if any(c != 1 for c in v.entries.values()):
        raise TypeMismatch("proposition vectors must have 0/1 entries")


def accumulate(frame: FiniteFrame, v: Vec) -> Vec:
    """Component i counts the accessible worlds from w_i where v holds."""
    _check_prop(frame, v)
    return apply_lin(adjacency_operator(frame), v)


def degree_vector(frame: FiniteFrame) -> Vec:
    ones = prop_vector(frame, [1] * len(frame.worlds))
    return apply_lin(adjacency_operator(frame), ones)


def _threshold(frame, acc, test):
    space = Idx(frame.sort)
    return Vec(space, {lab: 1 for lab in (Index(frame.sort, w) for w in frame.worlds)
                       if test(lab, acc[lab])})


def box_finite(frame: FiniteFrame, v: Vec) -> Vec:
    acc = accumulate(frame, v)
    deg = degree_vector(frame)
    return _threshold(frame, acc, lambda lab, a: a == deg[lab])


def dia_finite(frame: FiniteFrame, v: Vec) -> Vec:
    acc = accumulate(frame, v)
    return _threshold(frame, acc, lambda lab, a: a >= 1)


def negate_prop(frame: FiniteFrame, v: Vec) -> Vec:
    return prop_vector(frame, [1 - b for b in bits(frame, v)])


# -- countable frames --------------------------------------------------------


@dataclass(frozen=True)
class CountableFrame:
    """Worlds 0, 1, 2, ... with a successor rule of finite out-degree."""

    sort: str
    successors: Callable[[int], Sequence[int]]
    name: str = "custom"

    def accessible(self, i: int) -> list[int]:
        if i < 0:
            raise ValueError("world indices are natural numbers")
        succ = sorted(set(self.successors(i)))
        if any(j < 0 for j in succ):
            raise ValueError(f"{self.name} frame produced a negative successor of {i}")
        return succ


def chain(sort="t") -> CountableFrame:
    return CountableFrame(sort, lambda i: [i + 1], "chain")


def offsets(deltas, sort="t") -> CountableFrame:
    deltas = tuple(int(d) for d in deltas)
    return CountableFrame(sort, lambda i: [i + d for d in deltas if i + d >= 0],
                          "offsets:" + ",".join(f"{d:+d}" for d in deltas))


class CountableProp:
    def at(self, i: int) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class FiniteSupport(CountableProp):
    """True exactly on ``support``."""

    support: frozenset

    def __init__(self, support):
        object.__setattr__(self, "support", frozenset(int(i) for i in support))

    def at(self, i):
        return int(i in self.support)


@dataclass(frozen=True)
class CofiniteSupport(CountableProp):
    """False exactly on ``falsified``."""

    falsified: frozenset

    def __init__(self, falsified):
        object.__setattr__(self, "falsified", frozenset(int(i) for i in falsified))

    def at(self, i):
        return int(i not in self.falsified)


@dataclass(frozen=True)
class Rule(CountableProp):
    fn: Callable[[int], int]

    def at(self, i):
        return int(bool(self.fn(i)))


@lru_cache(maxsize=4096)
def count_true(frame: CountableFrame, p: CountableProp, i: int) -> tuple[int, int]:
    """(accessible worlds satisfying p, out-degree) at world i."""
    succ = frame.accessible(i)
    return sum(p.at(j) for j in succ), len(succ)


def box_countable(frame: CountableFrame, p: CountableProp, i: int) -> int:
    hits, degree = count_true(frame, p, i)
    return int(hits == degree)


def dia_countable(frame: CountableFrame, p: CountableProp, i: int) -> int:
    hits, _ = count_true(frame, p, i)
    return int(hits >= 1)


# -- continuous frames -------------------------------------------------------


@dataclass(frozen=True)
class ContinuousFrame:
    """R(t) = [t + lo, t + hi) on the real line with Lebesgue measure."""

    sort: str
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", parse_rational(self.lo))
        object.__setattr__(self, "hi", parse_rational(self.hi))
        if not self.lo < self.hi:
            raise ValueError("a window needs lo < hi so that every R(t) has positive measure")

    def accessible(self, t) -> IntervalSet:
        t = parse_rational(t)
        return IntervalSet(((t + self.lo, t + self.hi),))

    def window_measure(self) -> Fraction:
        return self.hi - self.lo


def truth_measure_at(frame: ContinuousFrame, p: MeasurableProp, t) -> Fraction:
    """The integral of phi over R(t)."""
    return p.truth_measure(frame.accessible(t))


def failure_measure_at(frame: ContinuousFrame, p: MeasurableProp, t) -> Fraction:
    region = frame.accessible(t)
    return region.difference(p.base).measure()


def box_continuous(frame: ContinuousFrame, p: MeasurableProp, t) -> int:
    return int(failure_measure_at(frame, p, t) == 0)


def dia_continuous(frame: ContinuousFrame, p: MeasurableProp, t) -> int:
    return int(truth_measure_at(frame, p, t) > 0)


# -- duality -----------------------------------------------------------------


@dataclass(frozen=True)
class DualityViolation:
    prop: str
    at: str
    box: int
    not_dia_not: int


def duality_check(frame, p=None, samples=None, universe: IntervalSet | None = None):
    """Compare box(phi) with not(dia(not phi)); returns the violations found.

    Finite frames check ``p`` (a proposition vector) or, when ``p`` is None,
    every proposition. Countable and continuous frames check ``p`` at each
    point of ``samples``.
    """
    out = []
    if isinstance(frame, FiniteFrame):
        n = len(frame.worlds)
        props = [p] if p is not None else [
            prop_vector(frame, combo) for combo in itertools.product((0, 1), repeat=n)]
        for v in props:
            box = bits(frame, box_finite(frame, v))
            dual = [1 - b for b in bits(frame, dia_finite(frame, negate_prop(frame, v)))]
            for w, b, d in zip(frame.worlds, box, dual):
                if b != d:
                    out.append(DualityViolation("".join(map(str, bits(frame, v))), w, b, d))
        return out
    if samples is None:
        raise ValueError("countable and continuous frames need sample points")
    if isinstance(frame, CountableFrame):
        neg = Rule(lambda i: 1 - p.at(i))
        for i in samples:
            b = box_countable(frame, p, i)
            d = 1 - dia_countable(frame, neg, i)
            if b != d:
                out.append(DualityViolation(repr(p), str(i), b, d))
        return out
    if isinstance(frame, ContinuousFrame):
        if universe is None:
            universe = p.base.hull()
            for t in samples:
                universe = universe.union(frame.accessible(t)).hull()
        neg = p.negate(universe)
        for t in samples:
            if frame.accessible(t).difference(universe).measure():
                raise ValueError(f"universe does not cover R({t})")
            b = box_continuous(frame, p, t)
            d = 1 - dia_continuous(frame, neg, t)
            if b != d:
                out.append(DualityViolation(str(p), str(t), b, d))
        return out
    raise TypeError(f"unsupported frame {frame!r}")
