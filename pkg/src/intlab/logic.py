"""Truth values as basis vectors of R^2 and connectives as 2 x 2^n matrices."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from .errors import NotInImage, SpaceMismatch
from .model import FALSE, TRUE, Tru
from .types import T
from .vectors import LinMap, TensorSpace, Vec, apply_lin, tensor

MAX_ARITY = 16

B1 = Vec.unit(T, TRUE)
B0 = Vec.unit(T, FALSE)


def truth_vec(bit: int) -> Vec:
    return B1 if bit else B0


def truth_bit(v: Vec) -> int:
    """Inverse of ``truth_vec``; superpositions are rejected."""
    if v == B1:
        return 1
    if v == B0:
        return 0
    raise NotInImage(f"{v!r} is not a truth basis vector")


def input_rows(arity: int):
    # b1 before b0 in every factor, matching h_t(1) as the first coordinate
    return list(itertools.product((1, 0), repeat=arity))


@dataclass(frozen=True)
class TruthTable:
    arity: int
    rows: Mapping[tuple, int]

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("arity must be at least 1")
        expected = set(itertools.product((0, 1), repeat=self.arity))
        if set(self.rows) != expected:
            raise ValueError(f"a {self.arity}-ary table needs exactly {2 ** self.arity} rows")
        if any(v not in (0, 1) for v in self.rows.values()):
            raise ValueError("table outputs must be 0 or 1")

    @classmethod
    def from_function(cls, arity: int, fn: Callable[..., int]):
        return cls(arity, {r: int(fn(*r)) for r in itertools.product((0, 1), repeat=arity)})

    def __call__(self, *bits):
        return self.rows[tuple(bits)]

    def __hash__(self):
        return hash((self.arity, frozenset(self.rows.items())))


BUILTINS = {
    "NOT": TruthTable.from_function(1, lambda a: 1 - a),
    "AND": TruthTable.from_function(2, lambda a, b: a & b),
    "OR": TruthTable.from_function(2, lambda a, b: a | b),
    "IMPLIES": TruthTable.from_function(2, lambda a, b: (1 - a) | b),
    "IFF": TruthTable.from_function(2, lambda a, b: int(a == b)),
    "XOR": TruthTable.from_function(2, lambda a, b: a ^ b),
}


def op_matrix(tt: TruthTable) -> LinMap:
    """The matrix M with M (h(t1) ⊗ ... ⊗ h(tn)) = h(NOP(t1, ..., tn))."""
    return _op_matrix(tt)


@lru_cache(maxsize=None)
def _op_matrix(tt: TruthTable) -> LinMap:
    if tt.arity > MAX_ARITY:
        raise ValueError(f"arity {tt.arity} exceeds the cap of {MAX_ARITY}")
    if tt.arity == 1:
        return LinMap(T, T, {Tru(a): truth_vec(tt(a)) for (a,) in input_rows(1)})
    dom = TensorSpace((T,) * tt.arity)
    cols = {tuple(Tru(b) for b in row): truth_vec(tt(*row)) for row in input_rows(tt.arity)}
    return LinMap(dom, T, cols)


def column_labels(arity: int):
    if arity == 1:
        return [TRUE, FALSE]
    return [tuple(Tru(b) for b in row) for row in input_rows(arity)]


def apply_logic(m: LinMap, args: Sequence[Vec]) -> Vec:
    for a in args:
        truth_bit(a)
    expected = len(m.dom.factors) if isinstance(m.dom, TensorSpace) else 1
    if len(args) != expected:
        raise SpaceMismatch(f"connective takes {expected} arguments, got {len(args)}")
    arg = args[0] if expected == 1 else tensor(*args)
    return apply_lin(m, arg)
