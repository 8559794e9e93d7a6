"""The formal (set-theoretic) and vector evaluators, and the homomorphism check.

Both evaluators memoize per (node, relevant part of g, s); an evaluator
instance is confined to one thread or process.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import IntlabError, UnboundVariable
from ..logic import BUILTINS, apply_logic, op_matrix, truth_bit, truth_vec
from ..model import (Assignment, Compound, FuncVal, IntensionalModel, Tru, enumerate_domain,
                     render_value, variant)
from ..multisort import box_sort, dia_sort
from ..types import S
from ..vectors import LinMap, Vec, apply_lin, canonical_text, coordinates, embed
from .checker import TypedExpr
from .parser import App, Const, Lam, LogicOp, Modal, Var


def _key(te: TypedExpr, g: Assignment, s: Compound):
    try:
        return te, tuple((name, g[name]) for name, _ in te.free), s
    except KeyError as exc:
        raise UnboundVariable(f"assignment does not cover {exc.args[0]!r}") from None


def _lookup(g: Assignment, name: str):
    try:
        return g[name]
    except KeyError:
        raise UnboundVariable(f"assignment does not cover {name!r}") from None


class FormalEvaluator:
    def __init__(self, model: IntensionalModel):
        self.model = model
        self._memo: dict = {}

    def __call__(self, te: TypedExpr, g: Assignment | None = None, s: Compound | None = None):
        return self.eval(te, g or Assignment.of(), s)

    def eval(self, te: TypedExpr, g: Assignment, s: Compound):
        key = _key(te, g, s)
        if key not in self._memo:
            self._memo[key] = self._eval(te, g, s)
        return self._memo[key]

    def _eval(self, te, g, s):
        node, m = te.expr, self.model
        if isinstance(node, Const):
            return m.extension(node.name, s)
        if isinstance(node, Var):
            return _lookup(g, node.name)
        if isinstance(node, Lam):
            body = te.children[0]
            table = tuple((a, self.eval(body, variant(g, node.var, a, node.ann), s))
                          for a in enumerate_domain(node.ann, m))
            return FuncVal(node.ann, table)
        if isinstance(node, App):
            fn, arg = te.children
            return self.eval(fn, g, s)(self.eval(arg, g, s))
        if isinstance(node, LogicOp):
            bits = [self.eval(k, g, s).bit for k in te.children]
            return Tru(BUILTINS[node.op.upper()](*bits))
        if isinstance(node, Modal):
            body = te.children[0]
            op = box_sort if node.kind == "box" else dia_sort
            return Tru(op(m, node.sort, lambda s2: self.eval(body, g, s2).bit, s))
        raise TypeError(f"cannot evaluate {node!r}")


def sort_accessibility(model: IntensionalModel, sort: str) -> LinMap:
    """A_sort on the compound space: moves the ``sort`` coordinate, fixes the rest."""
    frame = model.frames[sort]
    cols = {s: {} for s in model.index_space}
    for s in model.index_space:
        for w in frame.successors(s[sort]):
            cols[s.replace(sort, w)][s] = 1
    return LinMap(S, S, {k: Vec(S, v) for k, v in cols.items()})


@dataclass
class VectorModel:
    """Cached vector images of a model: intension operators h(I(c)) : S -> S_tau
    and accessibility operators with their degree vectors."""

    model: IntensionalModel
    intensions: dict
    access: dict
    degree: dict

    @classmethod
    def from_model(cls, model: IntensionalModel) -> "VectorModel":
        intensions = {}
        for name, const in model.constants.items():
            intensions[name] = LinMap(S, const.type, {
                s: embed(const.intension[s], const.type, model) for s in model.index_space})
        access, degree = {}, {}
        ones = Vec(S, {s: 1 for s in model.index_space})
        for srt in model.sorts:
            access[srt] = sort_accessibility(model, srt)
            degree[srt] = apply_lin(access[srt], ones)
        return cls(model, intensions, access, degree)

    def intension_operator(self, name: str) -> LinMap:
        return self.intensions[name]


class VectorEvaluator:
    def __init__(self, vm: VectorModel | IntensionalModel):
        self.vm = vm if isinstance(vm, VectorModel) else VectorModel.from_model(vm)
        self.model = self.vm.model
        self._memo: dict = {}
        self._modal: dict = {}

    def __call__(self, te: TypedExpr, g: Assignment | None = None, s: Compound | None = None):
        return self.eval(te, g or Assignment.of(), s)

    def eval(self, te: TypedExpr, g: Assignment, s: Compound):
        key = _key(te, g, s)
        if key not in self._memo:
            self._memo[key] = self._eval(te, g, s)
        return self._memo[key]

    def _eval(self, te, g, s):
        node, m = te.expr, self.model
        if isinstance(node, Const):
            return apply_lin(self.vm.intension_operator(node.name), Vec.unit(S, s))
        if isinstance(node, Var):
            return embed(_lookup(g, node.name), te.type, m)
        if isinstance(node, Lam):
            body = te.children[0]
            cols = {a: self.eval(body, variant(g, node.var, a, node.ann), s)
                    for a in enumerate_domain(node.ann, m)}
            return LinMap(node.ann, body.type, cols)
        if isinstance(node, App):
            fn, arg = te.children
            f = self.eval(fn, g, s)
            x = coordinates(self.eval(arg, g, s), arg.type, m)
            return apply_lin(f, x)
        if isinstance(node, LogicOp):
            args = [self.eval(k, g, s) for k in te.children]
            return apply_logic(op_matrix(BUILTINS[node.op.upper()]), args)
        if isinstance(node, Modal):
            return truth_vec(int(self.modal_vector(te, g)[s]))
        raise TypeError(f"cannot evaluate {node!r}")

    def proposition_vector(self, body: TypedExpr, g: Assignment) -> Vec:
        """v(phi) over the compound index space."""
        return Vec(S, {s: 1 for s in self.model.index_space
                       if truth_bit(self.eval(body, g, s))})

    def modal_vector(self, te: TypedExpr, g: Assignment) -> Vec:
        """The box/dia proposition over all of S, by accumulation against A_sort."""
        key = _key(te, g, None)
        if key not in self._modal:
            node, body = te.expr, te.children[0]
            acc = apply_lin(self.vm.access[node.sort], self.proposition_vector(body, g))
            deg = self.vm.degree[node.sort]
            if node.kind == "box":
                hit = {s for s in self.model.index_space if acc[s] == deg[s]}
            else:
                hit = {s for s in self.model.index_space if acc[s] >= 1}
            self._modal[key] = Vec(S, {s: 1 for s in hit})
        return self._modal[key]

    def accumulation(self, te: TypedExpr, g: Assignment) -> Vec:
        node, body = te.expr, te.children[0]
        return apply_lin(self.vm.access[node.sort], self.proposition_vector(body, g))


# -- homomorphism check ------------------------------------------------------


@dataclass(frozen=True, order=True)
class HomViolation:
    index: str
    assignment: str
    formal: str
    vector: str
    error: str = ""


@dataclass(frozen=True)
class HomReport:
    expr: str
    checked: int
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def assignments_for(te: TypedExpr, model: IntensionalModel):
    names = [n for n, _ in te.free]
    domains = [enumerate_domain(t, model) for _, t in te.free]
    for combo in itertools.product(*domains):
        yield Assignment.of(dict(zip(names, combo)))


def _text(x) -> str:
    if isinstance(x, (Vec, LinMap)):
        return canonical_text(x).replace("\n", "; ")
    return render_value(x) if x is not None else "-"


def check_hom(te: TypedExpr, model: IntensionalModel, vector_model: VectorModel | None = None,
              formal: FormalEvaluator | None = None,
              vector: VectorEvaluator | None = None) -> HomReport:
    """Compare h(evalFormal) with evalVector at every s and every assignment."""
    formal = formal or FormalEvaluator(model)
    vector = vector or VectorEvaluator(vector_model or VectorModel.from_model(model))
    violations, checked = [], 0
    for g in assignments_for(te, model):
        for s in model.index_space:
            checked += 1
            f = v = None
            try:
                f = formal.eval(te, g, s)
                v = vector.eval(te, g, s)
                if embed(f, te.type, model) != v:
                    violations.append(HomViolation(str(s), str(g), _text(f), _text(v)))
            except IntlabError as exc:
                violations.append(HomViolation(str(s), str(g), _text(f), _text(v),
                                               f"{type(exc).__name__}: {exc}"))
    return HomReport(str(te.expr), checked, tuple(sorted(violations)))

