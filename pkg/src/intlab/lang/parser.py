"""Abstract syntax, concrete syntax and pretty printer for the modal lambda calculus.

Concrete syntax (ASCII, with Unicode aliases)::

    type  := "e" | "t" | "s" | sortid | "<" type "," type ">"
    expr  := "\\" ident ":" type "." expr          (also "λ")
           | expr "iff" expr                      (also "<->", "↔")
           | expr "implies" expr                  (right assoc; "->", "→")
           | expr "or" expr | expr "and" expr     ("∨", "∧")
           | "not" expr                           ("¬")
           | ("box" | "dia") "[" sortid "]" expr  ("□", "◇")
           | expr "(" expr ("," expr)* ")"        (curried application)
           | NOT(..) AND(..) OR(..) IMPLIES(..) IFF(..) XOR(..)
           | ident | "(" expr ")"

Precedence, loosest first: lambda, iff, implies, or, and, prefix operators,
application. A free identifier is a variable when it looks like one
(``x``, ``y``, ``z`` optionally followed by digits or primes) and is not a
declared constant; every other free identifier is a constant.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError
from ..types import E, S, T, Func, Idx, SemType


class Expr:
    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Const(Expr):
    name: str


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Lam(Expr):
    var: str
    ann: SemType
    body: Expr


@dataclass(frozen=True)
class App(Expr):
    fn: Expr
    arg: Expr


@dataclass(frozen=True)
class LogicOp(Expr):
    op: str  # a key of ARITY
    args: tuple


@dataclass(frozen=True)
class Modal(Expr):
    kind: str  # "box" | "dia"
    sort: str
    body: Expr


ARITY = {"not": 1, "and": 2, "or": 2, "implies": 2, "iff": 2, "xor": 2}
CALL_OPS = {"NOT": "not", "AND": "and", "OR": "or", "IMPLIES": "implies",
            "IFF": "iff", "XOR": "xor"}
KEYWORDS = frozenset({"not", "and", "or", "implies", "iff", "box", "dia"})
VAR_RE = re.compile(r"^[x-z][0-9]*'*$")

_SYMBOLS = ["<->", "->", "\\", "λ", ":", ".", "(", ")", ",", "[", "]", "<", ">",
            "□", "◇", "¬", "∧", "∨", "→", "↔"]
_ALIASES = {"λ": "\\", "□": "box", "◇": "dia", "¬": "not", "∧": "and", "∨": "or",
            "→": "implies", "->": "implies", "↔": "iff", "<->": "iff"}


def looks_like_variable(name: str) -> bool:
    return bool(VAR_RE.match(name))


# -- lexer -------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "sym" | "eof"
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                val = _ALIASES.get(sym, sym)
                out.append(Token("ident" if val in KEYWORDS else "sym", val, i))
                i += len(sym)
                break
        else:
            if c.isalpha() or c == "_":
                j = i + 1
                while j < n and (text[j].isalnum() or text[j] in "_'") and text[j] not in "λ":
                    j += 1
                out.append(Token("ident", text[i:j], i))
                i = j
            else:
                raise ParseError(f"unexpected character {c!r}", text, i)
    out.append(Token("eof", "", n))
    return out


# -- parser ------------------------------------------------------------------


class Parser:
    def __init__(self, text: str, constants=None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.bound: list[str] = []
        self.constants = set(constants or ())

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.value)
        raise ParseError(f"{msg}, found {found}", self.text, tok.pos)

    def at(self, *values) -> bool:
        return self.tok.kind != "eof" and self.tok.value in values

    def take(self, value=None) -> Token:
        tok = self.tok
        if value is not None and (tok.kind == "eof" or tok.value != value):
            self.error(f"expected {value!r}")
        self.i += 1
        return tok

    def ident(self, what="identifier") -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.value in KEYWORDS:
            self.error(f"expected {what}")
        self.i += 1
        return tok.value

    def finish(self):
        if self.tok.kind != "eof":
            self.error("unexpected trailing input")

    # types
    def type_(self) -> SemType:
        if self.at("<"):
            self.take("<")
            a = self.type_()
            self.take(",")
            b = self.type_()
            self.take(">")
            return Func(a, b)
        name = self.ident("a type")
        return {"e": E, "t": T, "s": S}.get(name) or Idx(name)

    # expressions
    def expr(self) -> Expr:
        if self.at("\\"):
            return self.lam()
        return self.iff()

    def lam(self) -> Expr:
        self.take("\\")
        var = self.ident("a variable name")
        self.take(":")
        ann = self.type_()
        self.take(".")
        self.bound.append(var)
        try:
            body = self.expr()
        finally:
            self.bound.pop()
        return Lam(var, ann, body)

    def iff(self) -> Expr:
        left = self.implies()
        while self.at("iff"):
            self.take()
            left = LogicOp("iff", (left, self.implies()))
        return left

    def implies(self) -> Expr:
        left = self.or_()
        if self.at("implies"):
            self.take()
            return LogicOp("implies", (left, self.implies()))
        return left

    def or_(self) -> Expr:
        left = self.and_()
        while self.at("or"):
            self.take()
            left = LogicOp("or", (left, self.and_()))
        return left

    def and_(self) -> Expr:
        left = self.unary()
        while self.at("and"):
            self.take()
            left = LogicOp("and", (left, self.unary()))
        return left

    def unary(self) -> Expr:
        if self.at("not"):
            self.take()
            return LogicOp("not", (self.unary(),))
        if self.at("box", "dia"):
            kind = self.take().value
            self.take("[")
            sort = self.ident("a sort id")
            self.take("]")
            return Modal(kind, sort, self.unary())
        if self.at("\\"):
            return self.lam()
        return self.postfix()

    def args(self) -> list[Expr]:
        self.take("(")
        out = [self.expr()]
        while self.at(","):
            self.take()
            out.append(self.expr())
        self.take(")")
        return out

    def postfix(self) -> Expr:
        e = self.atom()
        while self.at("("):
            for a in self.args():
                e = App(e, a)
        return e

    def atom(self) -> Expr:
        tok = self.tok
        if self.at("("):
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if tok.kind == "ident" and tok.value not in KEYWORDS:
            self.i += 1
            name = tok.value
            if name in CALL_OPS and self.at("("):
                op = CALL_OPS[name]
                args = self.args()
                if len(args) != ARITY[op]:
                    self.error(f"{name} takes {ARITY[op]} argument(s)", tok)
                return LogicOp(op, tuple(args))
            if name in self.bound:
                return Var(name)
            if name not in self.constants and looks_like_variable(name):
                return Var(name)
            return Const(name)
        self.error("expected an expression")


def parse(text: str, constants=None) -> Expr:
    p = Parser(text, constants)
    e = p.expr()
    p.finish()
    return e


def parse_type(text: str) -> SemType:
    p = Parser(text)
    t = p.type_()
    p.finish()
    return t


# -- printer -----------------------------------------------------------------

_LEVEL = {"iff": 1, "implies": 2, "or": 3, "and": 4}
_PREFIX, _POSTFIX = 5, 6


def to_text(e: Expr, ctx: int = 0) -> str:
    """Canonical concrete syntax; ``parse(to_text(e)) == e``."""
    if isinstance(e, (Const, Var)):
        return e.name
    if isinstance(e, Lam):
        s = f"\\{e.var}:{e.ann}. {to_text(e.body, 0)}"
        return f"({s})" if ctx > 0 else s
    if isinstance(e, App):
        head, args = e, []
        while isinstance(head, App):
            args.append(head.arg)
            head = head.fn
        args.reverse()
        return to_text(head, _POSTFIX) + "(" + ", ".join(to_text(a) for a in args) + ")"
    if isinstance(e, Modal):
        s = f"{e.kind}[{e.sort}] {to_text(e.body, _PREFIX)}"
        return f"({s})" if ctx > _PREFIX else s
    if isinstance(e, LogicOp):
        if e.op == "not":
            s = f"not {to_text(e.args[0], _PREFIX)}"
            return f"({s})" if ctx > _PREFIX else s
        if e.op == "xor":
            return "XOR(" + ", ".join(to_text(a) for a in e.args) + ")"
        level = _LEVEL[e.op]
        left, right = e.args
        if e.op == "implies":
            s = f"{to_text(left, level + 1)} implies {to_text(right, level)}"
        else:
            s = f"{to_text(left, level)} {e.op} {to_text(right, level + 1)}"
        return f"({s})" if ctx > level else s
    raise TypeError(f"not an expression: {e!r}")


def depth(e: Expr) -> int:
    return 1 + max((depth(c) for c in children(e)), default=0)


def children(e: Expr) -> tuple:
    if isinstance(e, Lam):
        return (e.body,)
    if isinstance(e, App):
        return (e.fn, e.arg)
    if isinstance(e, LogicOp):
        return tuple(e.args)
    if isinstance(e, Modal):
        return (e.body,)
    return ()
