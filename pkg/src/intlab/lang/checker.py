"""Simple type checking for the modal lambda calculus."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ..errors import TypingError, UnboundVariable, UnknownSort, Unsupported
from ..types import E, T, CompoundIdx, Func, SemType, sorts_in
from .parser import ARITY, App, Const, Expr, Lam, LogicOp, Modal, Var


@dataclass(frozen=True, eq=False)
class TypedExpr:
    """An expression node with its synthesized type and typed children."""

    expr: Expr
    type: SemType
    children: tuple = ()
    free: tuple = ()  # sorted (name, type) pairs of free variables

    @property
    def free_types(self) -> dict[str, SemType]:
        return dict(self.free)

    def __str__(self):
        return f"{self.expr} : {self.type}"


def _merge(kids, drop=None) -> tuple:
    out = {}
    for k in kids:
        for name, typ in k.free:
            out[name] = typ
    out.pop(drop, None)
    return tuple(sorted(out.items()))


def typecheck(e: Expr, signature, sorts=None, free_types: Mapping | None = None,
              allow_free: bool = True) -> TypedExpr:
    """Type ``e`` against a signature (or a model).

    Free variables take their type from ``free_types``, defaulting to e. With
    ``allow_free=False`` a free variable raises UnboundVariable.
    """
    if hasattr(signature, "signature"):
        model = signature
        signature = model.signature()
        if sorts is None:
            sorts = model.sorts
    sorts = None if sorts is None else set(sorts)
    free_types = dict(free_types or {})

    def check_sorts(node, typ):
        if sorts is None:
            return
        for srt in sorts_in(typ):
            if srt not in sorts:
                raise UnknownSort(f"sort {srt!r} in {node} is not declared")

    def go(node, env) -> TypedExpr:
        if isinstance(node, Const):
            if node.name not in signature:
                raise TypingError(node, "a declared constant", "an unknown name")
            return TypedExpr(node, signature[node.name])
        if isinstance(node, Var):
            if node.name in env:
                return TypedExpr(node, env[node.name], (), ((node.name, env[node.name]),))
            if not allow_free:
                raise UnboundVariable(f"variable {node.name!r} is not bound")
            typ = free_types.get(node.name, E)
            return TypedExpr(node, typ, (), ((node.name, typ),))
        if isinstance(node, Lam):
            check_sorts(node, node.ann)
            body = go(node.body, {**env, node.var: node.ann})
            return TypedExpr(node, Func(node.ann, body.type), (body,), _merge([body], node.var))
        if isinstance(node, App):
            fn, arg = go(node.fn, env), go(node.arg, env)
            if not isinstance(fn.type, Func):
                raise TypingError(node, "a function in head position", fn.type)
            if fn.type.arg != arg.type:
                raise TypingError(node, fn.type.arg, arg.type, "argument type")
            return TypedExpr(node, fn.type.res, (fn, arg), _merge([fn, arg]))
        if isinstance(node, LogicOp):
            if len(node.args) != ARITY[node.op]:
                raise TypingError(node, f"{ARITY[node.op]} operand(s)", len(node.args))
            kids = tuple(go(a, env) for a in node.args)
            for k in kids:
                if k.type != T:
                    raise TypingError(node, T, k.type, f"operand {k.expr}")
            return TypedExpr(node, T, kids, _merge(kids))
        if isinstance(node, Modal):
            if sorts is not None and node.sort not in sorts:
                raise UnknownSort(f"sort {node.sort!r} in {node} is not declared")
            body = go(node.body, env)
            if body.type != T:
                raise TypingError(node, T, body.type, "modal body")
            for name, typ in body.free:
                if typ == CompoundIdx() or node.sort in sorts_in(typ):
                    raise Unsupported(
                        f"{node.kind}[{node.sort}] over a body that depends on the "
                        f"{node.sort!r}-typed variable {name!r}")
            return TypedExpr(node, T, (body,), body.free)
        raise TypeError(f"not an expression: {node!r}")

    return go(e, {})
