"""Basis-labelled sparse vectors and linear maps over exact rationals.

Every space is named by a semantic type (or a tensor product of them) and its
basis vectors are labelled by domain values: ``b_x`` is ``Vec(space, {x: 1})``.
Function types are realised as Hom spaces: ``LinMap`` stores one column per
basis label of its domain. A column is itself a ``Vec`` or, for curried result
types, another ``LinMap``.

When a Hom space is used as the *domain* of another map, its basis is the free
one labelled by the function values themselves (``FuncVal`` labels). Images
of function-typed values are not linearly independent inside Hom, so
applying such a map to a ``LinMap`` argument first reads the argument back
through the left inverse of the embedding (see ``coordinates``).
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

from .errors import CombinatorialBlowup, NotInImage, SpaceMismatch, TypeMismatch
from .model import (Compound, DomainValue, FuncVal, Index, IntensionalModel, check_value,
                    enumerate_domain, render_value, type_of)
from .types import CompoundIdx, Func, Idx, SemType


class PartialMapWarning(UserWarning):
    """A linear map was applied to a basis label it has no column for."""


@dataclass(frozen=True)
class TensorSpace:
    factors: tuple

    def __post_init__(self):
        flat = []
        for f in self.factors:
            flat.extend(f.factors if isinstance(f, TensorSpace) else (f,))
        object.__setattr__(self, "factors", tuple(flat))

    def __str__(self):
        return " ⊗ ".join(str(f) for f in self.factors)


Space = Union[SemType, TensorSpace]


def label_text(label) -> str:
    if isinstance(label, tuple):
        return "⊗".join(label_text(x) for x in label)
    return render_value(label)


def _scalar(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Vec:
    __slots__ = ("space", "entries")

    def __init__(self, space: Space, entries=None):
        self.space = space
        clean = {}
        for label, c in (entries or {}).items():
            c = _scalar(c)
            if c:
                clean[label] = c
        self.entries = clean

    @classmethod
    def unit(cls, space, label):
        return cls(space, {label: 1})

    def __getitem__(self, label) -> Fraction:
        return self.entries.get(label, Fraction(0))

    def support(self):
        return list(self.entries)

    @property
    def is_zero(self):
        return not self.entries

    def _check(self, other):
        if not isinstance(other, Vec) or other.space != self.space:
            raise SpaceMismatch(f"cannot combine vectors in {self.space} and "
                                f"{getattr(other, 'space', other)}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.entries)
        for k, c in other.entries.items():
            out[k] = out.get(k, 0) + c
        return Vec(self.space, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Vec(self.space, {k: -c for k, c in self.entries.items()})

    def __mul__(self, a):
        a = _scalar(a)
        return Vec(self.space, {k: a * c for k, c in self.entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Vec) and self.space == other.space and self.entries == other.entries

    def __hash__(self):
        return hash((self.space, frozenset(self.entries.items())))

    def flat(self):
        return {(k,): c for k, c in self.entries.items()}

    def to_text(self) -> str:
        return canonical_text(self)

    def __repr__(self):
        body = ", ".join(f"{label_text(k)}: {c}" for k, c in sorted(
            self.entries.items(), key=lambda kc: label_text(kc[0])))
        return f"Vec[{self.space}]{{{body}}}"


class LinMap:
    """A linear map given by its columns on the basis of ``dom``."""

    __slots__ = ("dom", "cod", "columns")

    def __init__(self, dom: Space, cod: Space, columns=None):
        self.dom = dom
        self.cod = cod
        self.columns = dict(columns or {})
        for label, col in self.columns.items():
            if space_of(col) != cod:
                raise SpaceMismatch(f"column {label_text(label)} lives in {space_of(col)}, not {cod}")

    def __call__(self, v):
        return apply_lin(self, v)

    def _check(self, other):
        if not isinstance(other, LinMap) or (other.dom, other.cod) != (self.dom, self.cod):
            raise SpaceMismatch("cannot combine maps between different spaces")

    def __add__(self, other):
        self._check(other)
        cols = dict(self.columns)
        for k, col in other.columns.items():
            cols[k] = cols[k] + col if k in cols else col
        return LinMap(self.dom, self.cod, cols)

    def __neg__(self):
        return LinMap(self.dom, self.cod, {k: -c for k, c in self.columns.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, a):
        return LinMap(self.dom, self.cod, {k: c * a for k, c in self.columns.items()})

    __rmul__ = __mul__

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.columns.values())

    def flat(self):
        out = {}
        for k, col in self.columns.items():
            for key, c in col.flat().items():
                out[(k,) + key] = c
        return out

    def __eq__(self, other):
        return (isinstance(other, LinMap) and (self.dom, self.cod) == (other.dom, other.cod)
                and self.flat() == other.flat())

    def __hash__(self):
        return hash((self.dom, self.cod, frozenset(self.flat().items())))

    def to_text(self) -> str:
        return canonical_text(self)

    def __repr__(self):
        return f"LinMap[{self.dom} -> {self.cod}]({len(self.columns)} columns)"


def space_of(x) -> Space:
    if isinstance(x, Vec):
        return x.space
    if isinstance(x, LinMap):
        return Func(x.dom, x.cod)
    raise TypeMismatch(f"not a vector or linear map: {x!r}")


def zero(space: Space):
    if isinstance(space, Func):
        return LinMap(space.arg, space.res, {})
    return Vec(space, {})


def canonical_text(x) -> str:
    """One ``label: scalar`` line per non-zero coordinate, sorted by label."""
    header = f"# {'vec' if isinstance(x, Vec) else 'map'} {space_of(x)}"
    rows = sorted((" | ".join(label_text(k) for k in key), c) for key, c in x.flat().items())
    return "\n".join([header] + [f"{k}: {c}" for k, c in rows])


def apply_lin(m: LinMap, v: Vec):
    if not isinstance(v, Vec) or v.space != m.dom:
        raise SpaceMismatch(f"map from {m.dom} applied to element of {space_of(v)}")
    out = zero(m.cod)
    missing = []
    for label, c in v.entries.items():
        col = m.columns.get(label)
        if col is None:
            missing.append(label)
            continue
        out = out + col * c
    if missing:
        warnings.warn(f"no column for {', '.join(label_text(x) for x in missing)}; "
                      "treated as zero", PartialMapWarning, stacklevel=2)
    return out


def tensor(*vecs: Vec) -> Vec:
    """Kronecker product; labels become flat tuples, spaces flatten."""
    if not vecs:
        raise SpaceMismatch("tensor of nothing")
    for v in vecs:
        if not isinstance(v, Vec):
            raise SpaceMismatch("tensor factors must be vectors")
    space = TensorSpace(tuple(v.space for v in vecs))

    def parts(v):
        for k, c in v.entries.items():
            yield (k if isinstance(v.space, TensorSpace) else (k,)), c

    entries = {}
    for combo in itertools.product(*(list(parts(v)) for v in vecs)):
        label = tuple(x for k, _ in combo for x in k)
        c = Fraction(1)
        for _, coef in combo:
            c *= coef
        entries[label] = c
    return Vec(space, entries)


def compose_lin(g: LinMap, f: LinMap, model: IntensionalModel | None = None) -> LinMap:
    """The map ``g . f``. Function-valued columns of ``f`` are read back as coordinates."""
    if f.cod != g.dom:
        raise SpaceMismatch(f"cannot compose: {f.cod} is not {g.dom}")
    cols = {}
    for label, col in f.columns.items():
        if isinstance(col, LinMap):
            if model is None:
                raise SpaceMismatch("composing through a Hom space needs the model")
            col = coordinates(col, f.cod, model)
        cols[label] = apply_lin(g, col)
    return LinMap(f.dom, g.cod, cols)


# -- the embedding h ---------------------------------------------------------


def embed(value: DomainValue, typ: SemType | None = None, model: IntensionalModel | None = None):
    """h_typ(value): a unit basis vector for primitives, a LinMap for functions."""
    if typ is None:
        typ = type_of(value)
    if model is not None:
        check_value(value, typ, model)
    elif type_of(value) != typ:
        raise TypeMismatch(f"{value} has type {type_of(value)}, not {typ}")
    if isinstance(typ, Func):
        return LinMap(typ.arg, typ.res,
                      {a: embed(b, typ.res) for a, b in value.table})
    return Vec.unit(typ, value)


def unembed(x, typ: SemType, model: IntensionalModel) -> DomainValue:
    """Left inverse of ``embed``; NotInImage unless ``x`` is exactly an image."""
    if isinstance(typ, Func):
        if not isinstance(x, LinMap) or (x.dom, x.cod) != (typ.arg, typ.res):
            raise NotInImage(f"expected a map {typ.arg} -> {typ.res}")
        args = enumerate_domain(typ.arg, model)
        known = set(args)
        stray = [k for k, col in x.columns.items() if k not in known and not col.is_zero]
        if stray:
            raise NotInImage(f"map has columns outside D_{typ.arg}")
        table = []
        for a in args:
            if a not in x.columns:
                raise NotInImage(f"zero column at {render_value(a)}")
            table.append((a, unembed(x.columns[a], typ.res, model)))
        return FuncVal(typ.arg, tuple(table))
    if not isinstance(x, Vec) or x.space != typ:
        raise NotInImage(f"expected a vector in the space of {typ}")
    if len(x.entries) != 1:
        raise NotInImage(f"{x!r} is not a basis vector")
    (label, c), = x.entries.items()
    if c != 1:
        raise NotInImage(f"{x!r} has coefficient {c}, not 1")
    try:
        check_value(label, typ, model)
    except TypeMismatch:
        raise NotInImage(f"{label!r} is not an element of D_{typ}") from None
    return label


def coordinates(x, typ: SemType, model: IntensionalModel) -> Vec:
    """The free-basis vector for ``x`` (identity on primitive types)."""
    if isinstance(x, Vec) and x.space == typ:
        return x
    return Vec.unit(typ, unembed(x, typ, model))


# -- lifting -----------------------------------------------------------------


@dataclass(frozen=True)
class SemanticFunction:
    """A named n-ary semantic function D_1 x ... x D_n -> D_res."""

    name: str
    arg_types: tuple
    res_type: SemType
    fn: Callable

    def __call__(self, *args):
        return self.fn(*args)


def lift(f, model: IntensionalModel) -> LinMap:
    """The (multi)linear map f' with f'(h(a1) ⊗ ... ⊗ h(an)) = h(f(a1, ..., an)).

    Unary functions act on the argument space directly; arity n > 1 acts on
    the tensor product of the argument spaces.
    """
    if isinstance(f, FuncVal):
        typ = type_of(f)
        check_value(f, typ, model)
        return LinMap(typ.arg, typ.res, {a: embed(b, typ.res) for a, b in f.table})
    if not isinstance(f, SemanticFunction):
        raise TypeMismatch(f"cannot lift {f!r}")
    domains = [enumerate_domain(t, model) for t in f.arg_types]
    size = 1
    for d in domains:
        size *= len(d)
    if size > model.effective_cap:
        raise CombinatorialBlowup(f"lifting {f.name} needs {size} columns")
    if len(f.arg_types) == 1:
        dom = f.arg_types[0]
        cols = {a: embed(f(a), f.res_type, model) for a in domains[0]}
    else:
        dom = TensorSpace(tuple(f.arg_types))
        cols = {args: embed(f(*args), f.res_type, model) for args in itertools.product(*domains)}
    return LinMap(dom, f.res_type, cols)


def apply_multilinear(m: LinMap, args: Sequence, model: IntensionalModel | None = None):
    """Apply a lifted n-ary map to n argument vectors."""
    if isinstance(m.dom, TensorSpace):
        if len(args) != len(m.dom.factors):
            raise SpaceMismatch(f"expected {len(m.dom.factors)} arguments, got {len(args)}")
        vecs = [a if isinstance(a, Vec) else coordinates(a, t, model)
                for a, t in zip(args, m.dom.factors)]
        return apply_lin(m, tensor(*vecs))
    if len(args) != 1:
        raise SpaceMismatch("unary map applied to several arguments")
    a = args[0]
    return apply_lin(m, a if isinstance(a, Vec) else coordinates(a, m.dom, model))


# -- compound indices and matrices -------------------------------------------


def compound_as_tensor(v: Vec, model: IntensionalModel) -> Vec:
    """Transport a vector of S_S to the tensor product of the per-sort spaces."""
    if v.space != CompoundIdx():
        raise SpaceMismatch("expected a vector over the compound index space")
    space = TensorSpace(tuple(Idx(s) for s in model.sorts))
    out = {}
    for s, c in v.entries.items():
        out[tuple(Index(srt, lab) for srt, lab in s.assign)] = c
    return Vec(space, out)


def to_matrix(m: LinMap, rows: Sequence, cols: Sequence) -> list[list[Fraction]]:
    """Dense matrix of ``m`` for the given row (codomain) and column (domain) labels."""
    out = []
    for r in rows:
        row = []
        for c in cols:
            col = m.columns.get(c)
            if col is None:
                row.append(Fraction(0))
            elif isinstance(col, Vec):
                row.append(col[r])
            else:
                raise SpaceMismatch("to_matrix needs vector-valued columns")
        out.append(row)
    return out


def vector_values(v: Vec, labels: Sequence) -> list[Fraction]:
    return [v[x] for x in labels]


def compound_basis(model: IntensionalModel) -> list[Compound]:
    return list(model.index_space)
