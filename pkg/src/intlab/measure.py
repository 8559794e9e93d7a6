"""Exact Lebesgue measure on the real line.

Sets are finite unions of half-open intervals ``[a, b)`` with rational
endpoints. Null sets (finite point sets, scaled Cantor sets, user oracles)
only affect pointwise evaluation, never a measure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .errors import UndecidableMembership


def parse_rational(text) -> Fraction:
    """Exact value of ``"p/q"``, ``"4.3"``, ``"-1"`` or a number."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, float):
        raise ValueError("floats are not exact; pass a string")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {text!r}") from None


@dataclass(frozen=True)
class IntervalSet:
    intervals: tuple[tuple[Fraction, Fraction], ...] = ()

    @classmethod
    def of(cls, *pairs) -> "IntervalSet":
        return cls.normalize((parse_rational(a), parse_rational(b)) for a, b in pairs)

    @classmethod
    def normalize(cls, pairs: Iterable) -> "IntervalSet":
        items = sorted((Fraction(a), Fraction(b)) for a, b in pairs if a < b)
        merged: list[list[Fraction]] = []
        for a, b in items:
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return cls(tuple((a, b) for a, b in merged))

    @property
    def is_empty(self):
        return not self.intervals

    def measure(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), Fraction(0))

    def contains(self, x) -> bool:
        x = parse_rational(x)
        return any(a <= x < b for a, b in self.intervals)

    __contains__ = contains

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet.normalize(self.intervals + other.intervals)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        i = j = 0
        xs, ys = self.intervals, other.intervals
        while i < len(xs) and j < len(ys):
            lo = max(xs[i][0], ys[j][0])
            hi = min(xs[i][1], ys[j][1])
            if lo < hi:
                out.append((lo, hi))
            if xs[i][1] < ys[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet.normalize(out)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for a, b in self.intervals:
            cur = a
            for c, d in other.intervals:
                if d <= cur or c >= b:
                    continue
                if c > cur:
                    out.append((cur, c))
                cur = max(cur, d)
                if cur >= b:
                    break
            if cur < b:
                out.append((cur, b))
        return IntervalSet.normalize(out)

    def complement(self, universe: "IntervalSet") -> "IntervalSet":
        return universe.difference(self)

    def hull(self) -> "IntervalSet":
        if self.is_empty:
            return self
        return IntervalSet(((self.intervals[0][0], self.intervals[-1][1]),))

    def __str__(self):
        if not self.intervals:
            return "∅"
        return " ∪ ".join(f"[{a},{b})" for a, b in self.intervals)


# -- null sets ---------------------------------------------------------------


def in_unit_cantor(y: Fraction) -> bool:
    """Membership of a rational in the middle-thirds Cantor set of [0, 1].

    Follows the map y -> 3y (left third) / 3y - 2 (right third); the orbit of
    p/q stays in {k/q}, so it either enters an open middle third or repeats.
    """
    y = Fraction(y)
    seen = set()
    while True:
        if y < 0 or y > 1:
            return False
        if y in seen or y in (0, 1):
            return True
        seen.add(y)
        if y <= Fraction(1, 3):
            y = 3 * y
        elif y >= Fraction(2, 3):
            y = 3 * y - 2
        else:
            return False


class NullSet:
    """A set of Lebesgue measure zero with a pointwise membership test."""

    id: str

    def contains(self, x: Fraction) -> bool:
        raise NotImplementedError

    def measure(self) -> Fraction:
        return Fraction(0)


@dataclass(frozen=True)
class FinitePoints(NullSet):
    points: frozenset
    id: str = "points"

    def __init__(self, points, id="points"):
        object.__setattr__(self, "points", frozenset(parse_rational(p) for p in points))
        object.__setattr__(self, "id", id)

    def contains(self, x):
        return parse_rational(x) in self.points

    def __str__(self):
        return "points(" + ",".join(str(p) for p in sorted(self.points)) + ")"


@dataclass(frozen=True)
class CantorSet(NullSet):
    """The middle-thirds Cantor set affinely placed on [lo, hi]."""

    lo: Fraction
    hi: Fraction
    id: str = "cantor"

    def __post_init__(self):
        object.__setattr__(self, "lo", parse_rational(self.lo))
        object.__setattr__(self, "hi", parse_rational(self.hi))
        if not self.lo < self.hi:
            raise ValueError("Cantor set needs lo < hi")

    def contains(self, x):
        x = parse_rational(x)
        return in_unit_cantor((x - self.lo) / (self.hi - self.lo))

    def __str__(self):
        return f"cantor[{self.lo},{self.hi}]"


@dataclass(frozen=True)
class Custom(NullSet):
    """A null set known only through an oracle returning True, False or None."""

    oracle: Callable[[Fraction], Optional[bool]]
    id: str = "custom"

    def contains(self, x):
        answer = self.oracle(parse_rational(x))
        if answer is None:
            raise UndecidableMembership(f"null set {self.id!r} cannot decide {x}")
        return bool(answer)

    def __str__(self):
        return f"custom<{self.id}>"


ADD, REMOVE = "add", "remove"


@dataclass(frozen=True)
class MeasurableProp:
    """An indicator function: ``base`` modified on null sets.

    Exceptions are applied in order; an ``add`` exception makes its points
    true, a ``remove`` exception makes them false.
    """

    base: IntervalSet = IntervalSet()
    exceptions: tuple = ()

    def __post_init__(self):
        for null, polarity in self.exceptions:
            if polarity not in (ADD, REMOVE):
                raise ValueError(f"polarity must be 'add' or 'remove', got {polarity!r}")
            if not isinstance(null, NullSet):
                raise TypeError(f"{null!r} is not a null set")

    def eval_at(self, x) -> int:
        x = parse_rational(x)
        value = int(self.base.contains(x))
        for null, polarity in self.exceptions:
            if null.contains(x):
                value = 1 if polarity == ADD else 0
        return value

    def truth_measure(self, within: IntervalSet) -> Fraction:
        # exceptions are null, so only the base contributes
        return self.base.intersect(within).measure()

    def without_exceptions(self) -> "MeasurableProp":
        return MeasurableProp(self.base)

    def with_exception(self, null: NullSet, polarity: str) -> "MeasurableProp":
        return MeasurableProp(self.base, self.exceptions + ((null, polarity),))

    def negate(self, universe: IntervalSet) -> "MeasurableProp":
        """Pointwise negation, exact inside ``universe``."""
        flipped = tuple((n, REMOVE if p == ADD else ADD) for n, p in self.exceptions)
        return MeasurableProp(universe.difference(self.base), flipped)

    def __str__(self):
        parts = [f"base:{self.base}"]
        parts += [f"{p}:{n}" for n, p in self.exceptions]
        return " ".join(parts)


# -- ball volumes ------------------------------------------------------------


@dataclass(frozen=True)
class BallVolume:
    """``coefficient * pi**pi_power``, exact."""

    coefficient: Fraction
    pi_power: int

    def __float__(self):
        return float(self.coefficient) * math.pi ** self.pi_power

    def __str__(self):
        if self.pi_power == 0:
            return str(self.coefficient)
        pi = "π" if self.pi_power == 1 else f"π^{self.pi_power}"
        return f"{self.coefficient}·{pi}"


def ball_volume(n: int, r) -> BallVolume:
    """Volume pi^(n/2) / Gamma(n/2 + 1) * r^n of the n-ball of radius r."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("dimension must be a positive integer")
    r = parse_rational(r)
    if r <= 0:
        raise ValueError("radius must be positive")
    k, odd = divmod(n, 2)
    if not odd:
        coef = Fraction(1, math.factorial(k))
    else:
        # Gamma(k + 3/2) = (2k+1)!! / 2^(k+1) * sqrt(pi)
        double_fact = math.prod(range(1, 2 * k + 2, 2))
        coef = Fraction(2 ** (k + 1), double_fact)
    return BallVolume(coef * r ** n, k)
