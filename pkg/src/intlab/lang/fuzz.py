"""Seeded, type-directed generator of well-typed expressions."""
from __future__ import annotations

import random
from typing import Optional

from ..model import IntensionalModel
from ..types import E, T, Func, SemType, uncurry
from .parser import App, Const, Expr, Lam, LogicOp, Modal, Var, depth, to_text

_BINARY = ("and", "or", "implies", "iff", "xor")
_BOUND_NAMES = ("x", "y", "z", "x1", "y1", "z1", "x2", "y2")
FREE_VARS = ("x", "y")  # free entity variables the generator may use


class ExprFuzzer:
    """Random expressions of a given type with height at most ``max_depth``.

    Free variables are restricted to ``x`` and ``y`` of type e; bound
    variables are annotated with e, t or a function type drawn from the
    constants of the model.
    """

    def __init__(self, model: IntensionalModel, seed: int = 0, free_vars: bool = True):
        self.model = model
        self.rng = random.Random(seed)
        self.signature = model.signature()
        self.free_vars = free_vars
        self.lam_types = [E, T] + sorted({t.arg for t in self.signature.values()
                                          if isinstance(t, Func)} - {E, T}, key=str)

    def _producers(self, typ: SemType):
        """Constants whose curried result type is ``typ``, with their argument types."""
        out = []
        for name, ctype in sorted(self.signature.items()):
            args = []
            cur = ctype
            while True:
                if cur == typ:
                    out.append((name, list(args)))
                if not isinstance(cur, Func):
                    break
                args.append(cur.arg)
                cur = cur.res
        return out

    def leaf(self, typ: SemType, env) -> Optional[Expr]:
        options: list[Expr] = [Const(n) for n, args in self._producers(typ) if not args]
        options += [Var(v) for v, t in env if t == typ and self._visible(v, env)]
        if typ == E and self.free_vars:
            options += [Var(v) for v in FREE_VARS if all(v != b for b, _ in env)]
        return self.rng.choice(options) if options else None

    @staticmethod
    def _visible(v, env):
        # the innermost binding of v shadows outer ones
        for name, _ in reversed(env):
            if name == v:
                return True
        return False

    def gen(self, typ: SemType, budget: int, env=()) -> Optional[Expr]:
        """An expression of type ``typ`` and height <= ``budget``, or None."""
        if budget <= 1:
            return self.leaf(typ, env)
        rng = self.rng
        choices = ["leaf", "app"]
        if typ == T:
            choices += ["logic", "logic", "not", "modal"]
        if isinstance(typ, Func):
            choices += ["lam", "lam"]
        if budget >= 3:
            choices.append("redex")
        rng.shuffle(choices)
        for kind in choices:
            e = self._build(kind, typ, budget, env)
            if e is not None:
                return e
        return None

    def _fresh(self, env):
        used = {v for v, _ in env}
        free = [v for v in _BOUND_NAMES if v not in used]
        return self.rng.choice(free or list(_BOUND_NAMES))

    def _build(self, kind, typ, budget, env):
        rng = self.rng
        if kind == "leaf":
            return self.leaf(typ, env)
        if kind == "app":
            producers = [p for p in self._producers(typ) if p[1]]
            if not producers:
                return None
            name, args = rng.choice(producers)
            e: Expr = Const(name)
            for a in args:
                arg = self.gen(a, budget - 1, env)
                if arg is None:
                    return None
                e = App(e, arg)
            return e if depth(e) <= budget else None
        if kind == "not":
            body = self.gen(T, budget - 1, env)
            return None if body is None else LogicOp("not", (body,))
        if kind == "logic":
            op = rng.choice(_BINARY)
            a, b = self.gen(T, budget - 1, env), self.gen(T, budget - 1, env)
            return None if a is None or b is None else LogicOp(op, (a, b))
        if kind == "modal":
            body = self.gen(T, budget - 1, env)
            if body is None:
                return None
            return Modal(rng.choice(("box", "dia")), rng.choice(self.model.sorts), body)
        if kind == "lam":
            v = self._fresh(env)
            body = self.gen(typ.res, budget - 1, env + ((v, typ.arg),))
            return None if body is None else Lam(v, typ.arg, body)
        if kind == "redex":
            ann = rng.choice(self.lam_types)
            v = self._fresh(env)
            body = self.gen(typ, budget - 2, env + ((v, ann),))
            arg = self.gen(ann, budget - 1, env)
            if body is None or arg is None:
                return None
            return App(Lam(v, ann, body), arg)
        raise ValueError(kind)

    def corpus(self, n: int, max_depth: int = 5, types=None, max_tries: int | None = None):
        """``n`` distinct expressions (by printed form) of height <= ``max_depth``."""
        types = list(types) if types else self._default_types()
        seen, out = set(), []
        tries = 0
        limit = max_tries or 200 * n
        while len(out) < n and tries < limit:
            tries += 1
            typ = self.rng.choice(types)
            e = self.gen(typ, self.rng.randint(1, max_depth))
            if e is None:
                continue
            text = to_text(e)
            if text not in seen:
                seen.add(text)
                out.append(e)
        return out

    def _default_types(self):
        # mostly propositions, plus entity and predicate typed terms
        types = [T] * 6 + [E, Func(E, T)]
        for t in self.signature.values():
            if isinstance(t, Func) and len(uncurry(t)[0]) == 1 and t not in types:
                types.append(t)
        return types


def generate_corpus(model: IntensionalModel, n: int = 200, max_depth: int = 5, seed: int = 0):
    return ExprFuzzer(model, seed).corpus(n, max_depth)
