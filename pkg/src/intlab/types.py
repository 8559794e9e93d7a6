"""Semantic types: e, t, index sorts, the compound index ``s`` and ``<a,b>``."""
from __future__ import annotations

from dataclasses import dataclass

RESERVED = frozenset({"e", "t", "s"})


class SemType:
    __slots__ = ()

    @property
    def is_primitive(self) -> bool:
        return not isinstance(self, Func)


@dataclass(frozen=True)
class Entity(SemType):
    def __str__(self):
        return "e"


@dataclass(frozen=True)
class Truth(SemType):
    def __str__(self):
        return "t"


@dataclass(frozen=True)
class Idx(SemType):
    sort: str

    def __str__(self):
        return self.sort


@dataclass(frozen=True)
class CompoundIdx(SemType):
    """The compound index space S, treated as a primitive domain."""

    def __str__(self):
        return "s"


@dataclass(frozen=True)
class Func(SemType):
    arg: SemType
    res: SemType

    def __str__(self):
        return f"<{self.arg},{self.res}>"


E = Entity()
T = Truth()
S = CompoundIdx()


def func(*types: SemType) -> SemType:
    """Right-nested function type: ``func(e, e, t) == <e,<e,t>>``."""
    if len(types) == 1:
        return types[0]
    return Func(types[0], func(*types[1:]))


def uncurry(typ: SemType) -> tuple[list[SemType], SemType]:
    args = []
    while isinstance(typ, Func):
        args.append(typ.arg)
        typ = typ.res
    return args, typ


def sorts_in(typ: SemType) -> set[str]:
    if isinstance(typ, Idx):
        return {typ.sort}
    if isinstance(typ, Func):
        return sorts_in(typ.arg) | sorts_in(typ.res)
    return set()
