"""Typed modal lambda calculus: syntax, typing, evaluation."""
from .checker import TypedExpr, typecheck
from .evaluate import (FormalEvaluator, HomReport, HomViolation, VectorEvaluator, VectorModel,
                       check_hom)
from .fuzz import ExprFuzzer, generate_corpus
from .parser import App, Const, Expr, Lam, LogicOp, Modal, Var, parse, parse_type, to_text

__all__ = [
    "App", "Const", "Expr", "ExprFuzzer", "FormalEvaluator", "HomReport", "HomViolation", "Lam",
    "LogicOp", "Modal", "TypedExpr", "Var", "VectorEvaluator", "VectorModel", "check_hom",
    "generate_corpus", "parse", "parse_type", "to_text", "typecheck",
]
