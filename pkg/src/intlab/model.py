"""Set-theoretic side: domain values, frames, compound indices and models.

A model is immutable once built. Every constant carries a total intension
table over the compound index space; construction fails loudly otherwise.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import os
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from types import MappingProxyType
from typing import Any, Iterable, Mapping

from .errors import CombinatorialBlowup, ModelError, TypeMismatch, UnknownSort
from .types import E, RESERVED, S, T, CompoundIdx, Entity, Func, Idx, SemType, Truth

DEFAULT_CAP = 10**6


def enumeration_cap() -> int:
    raw = os.environ.get("INTLAB_CAP")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ModelError(f"INTLAB_CAP must be an integer, got {raw!r}") from None
    return DEFAULT_CAP


# -- domain values -----------------------------------------------------------


class DomainValue:
    __slots__ = ()


@dataclass(frozen=True)
class Ent(DomainValue):
    label: str

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class Tru(DomainValue):
    bit: int

    def __post_init__(self):
        if self.bit not in (0, 1):
            raise TypeMismatch(f"truth values are 0 or 1, got {self.bit!r}")

    def __str__(self):
        return str(self.bit)


@dataclass(frozen=True)
class Index(DomainValue):
    sort: str
    label: str

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class Compound(DomainValue):
    """One coordinate per declared sort, kept in declaration order."""

    assign: tuple[tuple[str, Any], ...] = ()

    @classmethod
    def of(cls, **coords):
        return cls(tuple(coords.items()))

    def __getitem__(self, sort):
        for name, label in self.assign:
            if name == sort:
                return label
        raise KeyError(sort)

    @property
    def sorts(self):
        return tuple(name for name, _ in self.assign)

    def replace(self, sort, label) -> "Compound":
        if sort not in self.sorts:
            raise KeyError(sort)
        return Compound(tuple((n, label if n == sort else v) for n, v in self.assign))

    def __str__(self):
        return "(" + ",".join(str(v) for _, v in self.assign) + ")"


TRUE = Tru(1)
FALSE = Tru(0)


@dataclass(frozen=True)
class FuncVal(DomainValue):
    """A total function stored as a table; keys in the argument domain's order."""

    arg_type: SemType
    table: tuple[tuple[DomainValue, DomainValue], ...]
    _lookup: Mapping = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        lookup = dict(self.table)
        if len(lookup) != len(self.table):
            raise TypeMismatch("function table has duplicate keys")
        object.__setattr__(self, "_lookup", lookup)

    def __call__(self, arg):
        try:
            return self._lookup[arg]
        except KeyError:
            raise TypeMismatch(f"{arg} is outside the domain of this function") from None

    def keys(self):
        return [k for k, _ in self.table]

    def __str__(self):
        return render_value(self)


def render_value(value: DomainValue) -> str:
    """Canonical short text for a value; also used as JSON table key."""
    if isinstance(value, (Ent, Index)):
        return value.label
    if isinstance(value, Tru):
        return str(value.bit)
    if isinstance(value, Compound):
        return ",".join(str(v) for _, v in value.assign)
    if isinstance(value, FuncVal):
        inner = ", ".join(f"{render_value(k)}: {render_value(v)}" for k, v in value.table)
        return "{" + inner + "}"
    raise TypeMismatch(f"not a domain value: {value!r}")


def type_of(value: DomainValue) -> SemType:
    if isinstance(value, Ent):
        return E
    if isinstance(value, Tru):
        return T
    if isinstance(value, Index):
        return Idx(value.sort)
    if isinstance(value, Compound):
        return S
    if isinstance(value, FuncVal):
        return Func(value.arg_type, type_of(value.table[0][1]))
    raise TypeMismatch(f"not a domain value: {value!r}")


# -- frames ------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteFrame:
    """Finite Kripke frame; ``adj[i][j] == 1`` iff world i accesses world j."""

    sort: str
    worlds: tuple[str, ...]
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.worlds)
        if n == 0:
            raise ModelError(f"sort {self.sort!r} has no indices")
        if len(set(self.worlds)) != n:
            raise ModelError(f"sort {self.sort!r} has duplicate indices")
        if len(self.adj) != n or any(len(row) != n for row in self.adj):
            raise ModelError(f"adjacency of {self.sort!r} must be {n}x{n}")
        if any(x not in (0, 1) for row in self.adj for x in row):
            raise ModelError(f"adjacency of {self.sort!r} must be 0/1")

    @classmethod
    def from_edges(cls, sort, worlds, edges):
        worlds = tuple(worlds)
        pos = {w: i for i, w in enumerate(worlds)}
        adj = [[0] * len(worlds) for _ in worlds]
        for src, dst in edges:
            if src not in pos or dst not in pos:
                raise ModelError(f"edge ({src}, {dst}) mentions an unknown index of {sort!r}")
            adj[pos[src]][pos[dst]] = 1
        return cls(sort, worlds, tuple(tuple(r) for r in adj))

    @cached_property
    def position(self):
        return {w: i for i, w in enumerate(self.worlds)}

    def successors(self, label):
        row = self.adj[self.position[label]]
        return [w for w, a in zip(self.worlds, row) if a]

    def out_degree(self, label) -> int:
        return sum(self.adj[self.position[label]])

    def edges(self):
        return [(self.worlds[i], self.worlds[j])
                for i, row in enumerate(self.adj) for j, a in enumerate(row) if a]

    @property
    def is_reflexive(self) -> bool:
        return all(self.adj[i][i] for i in range(len(self.worlds)))


# -- assignments -------------------------------------------------------------


@dataclass(frozen=True)
class Assignment:
    bindings: tuple[tuple[str, DomainValue], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[str, DomainValue] | None = None):
        return cls(tuple(sorted((mapping or {}).items())))

    def __getitem__(self, name):
        for k, v in self.bindings:
            if k == name:
                return v
        raise KeyError(name)

    def __contains__(self, name):
        return any(k == name for k, _ in self.bindings)

    def as_dict(self):
        return dict(self.bindings)

    def __str__(self):
        return "{" + ", ".join(f"{k}->{render_value(v)}" for k, v in self.bindings) + "}"


def variant(g: Assignment, x: str, k: DomainValue, typ: SemType = E, model=None) -> Assignment:
    """g[x -> k]. ``typ`` is the variable's declared type (entities by default)."""
    if model is not None:
        check_value(k, typ, model)
    elif type_of(k) != typ:
        raise TypeMismatch(f"cannot bind {x} to {k}: expected {typ}, got {type_of(k)}")
    d = g.as_dict()
    d[x] = k
    return Assignment.of(d)


# -- the model ---------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    name: str
    type: SemType  # extension type; the intension has type <s, type>
    intension: Mapping[Compound, DomainValue]


@dataclass(frozen=True, eq=False)
class IntensionalModel:
    sorts: tuple[str, ...]
    frames: Mapping[str, FiniteFrame]
    entities: tuple[str, ...]
    constants: Mapping[str, Constant]
    cap: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "frames", MappingProxyType(dict(self.frames)))
        object.__setattr__(self, "constants", MappingProxyType(dict(self.constants)))
        object.__setattr__(self, "_domains", {})
        if not self.entities:
            raise ModelError("the entity domain must be non-empty")
        if len(set(self.entities)) != len(self.entities):
            raise ModelError("duplicate entity labels")
        if len(set(self.sorts)) != len(self.sorts):
            raise ModelError("duplicate sort ids")
        for sort in self.sorts:
            if not sort or sort in RESERVED:
                raise ModelError(f"invalid sort id {sort!r} (e, t and s are reserved)")
            frame = self.frames.get(sort)
            if not isinstance(frame, FiniteFrame):
                raise ModelError(f"sort {sort!r} needs a finite frame")
            if frame.sort != sort:
                raise ModelError(f"frame for {sort!r} is labelled {frame.sort!r}")
        extra = set(self.frames) - set(self.sorts)
        if extra:
            raise ModelError(f"frames for undeclared sorts: {sorted(extra)}")
        for const in self.constants.values():
            self._check_constant(const)

    def _check_constant(self, const: Constant):
        for s in self.index_space:
            if s not in const.intension:
                raise ModelError(f"intension of {const.name!r} is undefined at {s}")
            try:
                check_value(const.intension[s], const.type, self)
            except TypeMismatch as exc:
                raise ModelError(f"intension of {const.name!r} at {s}: {exc}") from None
        if len(const.intension) != len(self.index_space):
            raise ModelError(f"intension of {const.name!r} has keys outside S")

    @property
    def effective_cap(self) -> int:
        return self.cap if self.cap is not None else enumeration_cap()

    @cached_property
    def index_space(self) -> list[Compound]:
        return compound_index_space(self)

    def signature(self) -> dict[str, SemType]:
        return {name: c.type for name, c in self.constants.items()}

    def extension(self, name: str, s: Compound) -> DomainValue:
        return self.constants[name].intension[s]

    def with_extension(self, name: str, s: Compound, value: DomainValue) -> "IntensionalModel":
        """A copy of the model with one intension entry overwritten."""
        const = self.constants[name]
        table = dict(const.intension)
        table[s] = value
        consts = dict(self.constants)
        consts[name] = replace(const, intension=MappingProxyType(table))
        return replace(self, constants=consts)


def _checked_product(sizes: Iterable[int], cap: int, what) -> int:
    total = 1
    for n in sizes:
        total *= n
        if total > cap:
            raise CombinatorialBlowup(f"enumerating {what} exceeds the cap of {cap} values")
    return total


def domain_size(typ: SemType, model: IntensionalModel) -> int:
    cap = model.effective_cap
    if isinstance(typ, Truth):
        return 2
    if isinstance(typ, Entity):
        return len(model.entities)
    if isinstance(typ, Idx):
        return len(_frame(model, typ.sort).worlds)
    if isinstance(typ, CompoundIdx):
        return _checked_product((len(model.frames[s].worlds) for s in model.sorts), cap, "S")
    if isinstance(typ, Func):
        n_arg = domain_size(typ.arg, model)
        n_res = domain_size(typ.res, model)
        return _checked_product(itertools.repeat(n_res, n_arg), cap, typ)
    raise TypeMismatch(f"unknown type {typ!r}")


def _frame(model, sort):
    try:
        return model.frames[sort]
    except KeyError:
        raise UnknownSort(f"sort {sort!r} is not declared") from None


def compound_index_space(model: IntensionalModel) -> list[Compound]:
    _checked_product((len(model.frames[s].worlds) for s in model.sorts),
                     model.effective_cap, "S")
    axes = [model.frames[s].worlds for s in model.sorts]
    return [Compound(tuple(zip(model.sorts, combo))) for combo in itertools.product(*axes)]


def enumerate_domain(typ: SemType, model: IntensionalModel) -> list[DomainValue]:
    """All of D_typ in canonical order (cached per model)."""
    cache = model._domains
    if typ in cache:
        return cache[typ]
    if isinstance(typ, Truth):
        values = [TRUE, FALSE]
    elif isinstance(typ, Entity):
        values = [Ent(x) for x in model.entities]
    elif isinstance(typ, Idx):
        values = [Index(typ.sort, w) for w in _frame(model, typ.sort).worlds]
    elif isinstance(typ, CompoundIdx):
        values = list(model.index_space)
    elif isinstance(typ, Func):
        domain_size(typ, model)
        args = enumerate_domain(typ.arg, model)
        results = enumerate_domain(typ.res, model)
        values = [FuncVal(typ.arg, tuple(zip(args, combo)))
                  for combo in itertools.product(results, repeat=len(args))]
    else:
        raise TypeMismatch(f"unknown type {typ!r}")
    cache[typ] = values
    return values


def check_value(value: DomainValue, typ: SemType, model: IntensionalModel) -> None:
    """Raise TypeMismatch unless ``value`` is an element of D_typ."""
    if isinstance(typ, Truth):
        ok = isinstance(value, Tru)
    elif isinstance(typ, Entity):
        ok = isinstance(value, Ent) and value.label in model.entities
    elif isinstance(typ, Idx):
        ok = (isinstance(value, Index) and value.sort == typ.sort
              and typ.sort in model.frames and value.label in model.frames[typ.sort].position)
    elif isinstance(typ, CompoundIdx):
        ok = isinstance(value, Compound) and value.sorts == model.sorts and all(
            lab in model.frames[srt].position for srt, lab in value.assign)
    elif isinstance(typ, Func):
        if not isinstance(value, FuncVal) or value.arg_type != typ.arg:
            raise TypeMismatch(f"{value} is not a function of type {typ}")
        if len(value.table) != domain_size(typ.arg, model):
            raise TypeMismatch(f"{value} is not total on D_{typ.arg}")
        for k, v in value.table:
            check_value(k, typ.arg, model)
            check_value(v, typ.res, model)
        return
    else:
        ok = False
    if not ok:
        raise TypeMismatch(f"{value!r} is not in D_{typ}")


# -- model files -------------------------------------------------------------


def parse_value(obj, typ: SemType, model_parts) -> DomainValue:
    """Decode a JSON value of type ``typ``; function tables are keyed by render_value."""
    if isinstance(typ, Truth):
        if obj in (0, 1) and not isinstance(obj, float):
            return Tru(int(obj))
        if obj in ("0", "1"):
            return Tru(int(obj))
        raise ModelError(f"expected a truth value, got {obj!r}")
    if isinstance(typ, Entity):
        return Ent(str(obj))
    if isinstance(typ, Idx):
        return Index(typ.sort, str(obj))
    if isinstance(typ, CompoundIdx):
        return Compound(tuple(zip(model_parts.sorts, str(obj).split(","))))
    if isinstance(typ, Func):
        if not isinstance(obj, dict):
            raise ModelError(f"expected an object for a value of type {typ}, got {obj!r}")
        table = []
        for arg in enumerate_domain(typ.arg, model_parts):
            key = render_value(arg)
            if key in obj:
                raw = obj[key]
            elif "*" in obj:
                raw = obj["*"]
            else:
                raise ModelError(f"function table of type {typ} is missing key {key!r}")
            table.append((arg, parse_value(raw, typ.res, model_parts)))
        return FuncVal(typ.arg, tuple(table))
    raise ModelError(f"cannot decode values of type {typ}")


def _intension_table(raw, sorts, frames, typ, name, parts):
    table = {}

    def walk(node, depth, prefix):
        if depth == len(sorts):
            table[Compound(tuple(zip(sorts, prefix)))] = parse_value(node, typ, parts)
            return
        if not isinstance(node, dict):
            raise ModelError(f"intension of {name!r}: expected a table keyed by {sorts[depth]!r}")
        unknown = set(node) - set(frames[sorts[depth]].worlds) - {"*"}
        if unknown:
            raise ModelError(f"intension of {name!r}: unknown {sorts[depth]!r} indices {sorted(unknown)}")
        for w in frames[sorts[depth]].worlds:
            if w in node:
                walk(node[w], depth + 1, prefix + (w,))
            elif "*" in node:
                walk(node["*"], depth + 1, prefix + (w,))
            else:
                raise ModelError(f"intension of {name!r} is missing index {w!r}")

    walk(raw, 0, ())
    return table


def model_from_dict(data: Mapping) -> IntensionalModel:
    from .lang.parser import parse_type

    try:
        sorts, frames = [], {}
        for spec in data.get("sorts", []):
            sid = spec["id"]
            sorts.append(sid)
            frames[sid] = FiniteFrame.from_edges(sid, spec["indices"], spec.get("edges", []))
        entities = tuple(str(x) for x in data["entities"])
        parts = IntensionalModel(tuple(sorts), frames, entities, {})
        constants = {}
        for spec in data.get("constants", []):
            name = spec["name"]
            if name in constants:
                raise ModelError(f"constant {name!r} declared twice")
            declared = parse_type(spec["type"])
            if isinstance(declared, Func) and declared.arg == S:
                if "intension" not in spec:
                    raise ModelError(f"constant {name!r} of type {declared} needs an 'intension'")
                ext = declared.res
                table = _intension_table(spec["intension"], parts.sorts, frames, ext, name, parts)
            else:
                if "value" not in spec:
                    raise ModelError(f"rigid constant {name!r} needs a 'value'")
                ext = declared
                v = parse_value(spec["value"], ext, parts)
                table = {s: v for s in parts.index_space}
            constants[name] = Constant(name, ext, MappingProxyType(table))
        return IntensionalModel(tuple(sorts), frames, entities, constants)
    except (KeyError, TypeError) as exc:
        raise ModelError(f"malformed model data: {exc!r}") from None
    except TypeMismatch as exc:
        raise ModelError(str(exc)) from None


def load_model(path) -> IntensionalModel:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelError(f"cannot read model {path}: {exc}") from None
    return model_from_dict(data)


def model_hash(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]
