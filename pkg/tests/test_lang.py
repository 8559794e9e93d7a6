import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intlab.errors import ParseError, TypingError, UnboundVariable, UnknownSort, Unsupported
from intlab.lang import (FormalEvaluator, VectorEvaluator, VectorModel, check_hom, parse,
                         parse_type, to_text, typecheck)
from intlab.lang.fuzz import ExprFuzzer
from intlab.lang.parser import App, Const, Lam, LogicOp, Modal, Var, depth
from intlab.logic import B0, B1
from intlab.model import Assignment, Ent, Tru, enumerate_domain, variant
from intlab.types import E, T, Func, Idx


# -- parser ------------------------------------------------------------------


def test_parse_examples():
    assert parse("P(x)") == App(Const("P"), Var("x"))
    assert parse("\\x:e. happy(x)") == Lam("x", E, App(Const("happy"), Var("x")))
    assert parse("box[w] (p and q)") == Modal("box", "w", LogicOp("and", (Const("p"), Const("q"))))


def test_precedence_and_associativity():
    p, q, r = Const("p"), Const("q"), Const("r")
    assert parse("not p and q or r") == LogicOp("or", (LogicOp("and", (LogicOp("not", (p,)), q)), r))
    assert parse("p implies q implies r") == LogicOp("implies", (p, LogicOp("implies", (q, r))))
    assert parse("p or q implies r") == LogicOp("implies", (LogicOp("or", (p, q)), r))
    assert parse("box[w] p and q") == LogicOp("and", (Modal("box", "w", p), q))
    assert parse("f(a, b)") == App(App(Const("f"), Const("a")), Const("b"))
    assert parse("f(a)(b)") == parse("f(a, b)")


def test_unicode_aliases():
    assert parse("□[w] ¬p ∧ q") == parse("box[w] not p and q")
    assert parse("λx:e. ◇[w] (p ∨ q → r ↔ s)") == parse("\\x:e. dia[w] (p or q -> r <-> s)")
    assert parse("XOR(p, q)") == LogicOp("xor", (Const("p"), Const("q")))


def test_identifier_resolution():
    assert parse("x") == Var("x")
    assert parse("x", constants={"x"}) == Const("x")
    assert parse("\\ann:e. ann") == Lam("ann", E, Var("ann"))
    assert parse("z1'") == Var("z1'")


def test_types():
    assert parse_type("<e,<w,t>>") == Func(E, Func(Idx("w"), T))
    with pytest.raises(ParseError):
        parse_type("<e,t")


@pytest.mark.parametrize("text,line,col", [
    ("p and", 1, 6),
    ("box w p", 1, 5),
    ("p\n  and )", 2, 7),
    ("\\x e. p", 1, 4),
    ("p $ q", 1, 3),
    ("AND(p)", 1, 1),
])
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (line, col)
    assert "^" in info.value.caret()


ROUND_TRIP_CORPUS = [
    ("p", "p"), ("(p)", "p"), ("not not p", "not not p"), ("(not p) and q", "not p and q"),
    ("p and (q and r)", "p and (q and r)"), ("(p and q) and r", "p and q and r"),
    ("p or q and r", "p or q and r"), ("(p or q) and r", "(p or q) and r"),
    ("p -> q -> r", "p implies q implies r"), ("(p -> q) -> r", "(p implies q) implies r"),
    ("p <-> q <-> r", "p iff q iff r"), ("p <-> (q <-> r)", "p iff (q iff r)"),
    ("not (p and q)", "not (p and q)"), ("box[w] p", "box[w] p"),
    ("box[w] (p)", "box[w] p"), ("box[w] (p and q)", "box[w] (p and q)"),
    ("dia[w] not p", "dia[w] not p"), ("not box[w] p", "not box[w] p"),
    ("box[w] dia[i] p", "box[w] dia[i] p"), ("□[w]◇[w]p", "box[w] dia[w] p"),
    ("f(a)", "f(a)"), ("f(a)(b)", "f(a, b)"), ("f(a, b)", "f(a, b)"),
    ("(f)(a)", "f(a)"), ("f(g(a))", "f(g(a))"), ("f((a))", "f(a)"),
    ("\\x:e. p", "\\x:e. p"), ("λx:e.p", "\\x:e. p"), ("(\\x:e. f(x))(a)", "(\\x:e. f(x))(a)"),
    ("\\x:e. \\y:e. r(x, y)", "\\x:e. \\y:e. r(x, y)"), ("\\f:<e,t>. f(a)", "\\f:<e,t>. f(a)"),
    ("\\x:e. p and q", "\\x:e. p and q"), ("(\\x:e. p) and q", "(\\x:e. p) and q"),
    ("p and \\x:e. q", "p and (\\x:e. q)"), ("not \\x:t. x", "not (\\x:t. x)"),
    ("XOR(p, q)", "XOR(p, q)"), ("XOR(p, q) and r", "XOR(p, q) and r"),
    ("AND(p, q)", "p and q"), ("OR(p, q)", "p or q"), ("NOT(p)", "not p"),
    ("IMPLIES(p, q)", "p implies q"), ("IFF(p, q)", "p iff q"),
    ("not p implies q", "not p implies q"), ("not (p implies q)", "not (p implies q)"),
    ("box[w] (p implies q) implies box[w] p implies box[w] q",
     "box[w] (p implies q) implies box[w] p implies box[w] q"),
    ("f(\\x:e. x)", "f(\\x:e. x)"), ("\\x:<e,<e,t>>. x(a, b)", "\\x:<e,<e,t>>. x(a, b)"),
    ("\\x:w. p", "\\x:w. p"), ("dia[w] (p or q) and r", "dia[w] (p or q) and r"),
    ("  p   and\nq ", "p and q"),
]


@pytest.mark.parametrize("text,normal", ROUND_TRIP_CORPUS)
def test_print_parse_normalizes(text, normal):
    assert to_text(parse(text)) == normal
    assert parse(normal) == parse(text)


def test_round_trip_corpus_size():
    assert len(ROUND_TRIP_CORPUS) >= 50


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_parse_print_identity_on_generated_asts(twosort, seed):
    for e in ExprFuzzer(twosort, seed).corpus(5, max_depth=6):
        assert parse(to_text(e), twosort.constants) == e


# -- type checking -----------------------------------------------------------


def test_typecheck_examples(twosort):
    assert typecheck(parse("happy(x)"), twosort).type == T
    assert typecheck(parse("\\x:e. happy(x)"), twosort).type == Func(E, T)
    assert typecheck(parse("everyone(\\x:e. happy(x))"), twosort).type == T
    with pytest.raises(TypingError):
        typecheck(parse("rains(ann)"), twosort)
    with pytest.raises(TypingError):
        typecheck(parse("happy(rains)"), twosort)
    with pytest.raises(TypingError):
        typecheck(parse("box[w] ann"), twosort)
    with pytest.raises(TypingError):
        typecheck(parse("nobody"), twosort)
    with pytest.raises(UnknownSort):
        typecheck(parse("box[v] rains"), twosort)
    with pytest.raises(UnboundVariable):
        typecheck(parse("happy(x)"), twosort, allow_free=False)


def test_free_variable_types(twosort):
    te = typecheck(parse("\\y:e. loves(x, y)"), twosort)
    assert te.free_types == {"x": E}
    te = typecheck(parse("z(ann)"), twosort, free_types={"z": Func(E, T)})
    assert te.type == T


def test_modal_under_index_lambda_is_flagged(twosort):
    with pytest.raises(Unsupported):
        typecheck(parse("\\x:w. box[w] (\\y:w. rains)(x)"), twosort)
    # a modal over another sort is fine
    typecheck(parse("\\x:w. box[i] (\\y:w. rains)(x)"), twosort)


# -- evaluation --------------------------------------------------------------


def test_four_world_necessity(fourworld):
    te = typecheck(parse("box[w] phi", fourworld.constants), fourworld)
    s1 = fourworld.index_space[0]
    assert FormalEvaluator(fourworld)(te, None, s1) == Tru(1)
    assert VectorEvaluator(fourworld)(te, None, s1) == B1


def test_negation_vector(fourworld):
    te = typecheck(parse("not p", fourworld.constants), fourworld)
    for s in fourworld.index_space:
        p = fourworld.extension("p", s).bit
        assert VectorEvaluator(fourworld)(te, None, s) == (B0 if p else B1)


def test_constant_vector_is_basis(twosort):
    te = typecheck(parse("ann", twosort.constants), twosort)
    v = VectorEvaluator(twosort)(te, None, twosort.index_space[0])
    assert v.entries == {Ent("ann"): 1}


def test_beta_agreement_exhaustive(twosort):
    formal = FormalEvaluator(twosort)
    redex = typecheck(parse("(\\x:e. happy(x))(ann)", twosort.constants), twosort)
    direct = typecheck(parse("happy(ann)", twosort.constants), twosort)
    for s in twosort.index_space:
        assert formal(redex, None, s) == formal(direct, None, s)
    body = typecheck(parse("\\y:e. loves(x, best_friend(y))"), twosort)
    redex = typecheck(parse("(\\x:e. \\y:e. loves(x, best_friend(y)))(z)"), twosort)
    for s in twosort.index_space:
        for a in enumerate_domain(E, twosort):
            g = Assignment.of({"z": a})
            assert formal.eval(redex, g, s) == formal.eval(body, variant(g, "x", a), s)


def test_unbound_at_evaluation(twosort):
    te = typecheck(parse("happy(x)"), twosort)
    with pytest.raises(UnboundVariable):
        FormalEvaluator(twosort)(te, Assignment.of(), twosort.index_space[0])


# -- homomorphism check ------------------------------------------------------


def test_identity_has_no_violations(twosort):
    rep = check_hom(typecheck(parse("\\x:e. x"), twosort), twosort)
    assert rep.ok and rep.checked == len(twosort.index_space)


def test_closed_propositions_on_four_world_model(fourworld):
    corpus = ExprFuzzer(fourworld, seed=1, free_vars=False).corpus(150, 5, types=[T])
    for e in corpus:
        te = typecheck(e, fourworld)
        assert te.free == ()
        assert check_hom(te, fourworld).ok, str(e)


def test_fault_injection_is_reported(twosort):
    vm = VectorModel.from_model(twosort)
    s = twosort.index_space[2]
    bad = twosort.with_extension("rains", s, Tru(1 - twosort.extension("rains", s).bit))
    rep = check_hom(typecheck(parse("rains or box[i] rains", bad.constants), bad), bad, vm)
    assert not rep.ok
    assert str(s) in {v.index for v in rep.violations}


def test_fuzzer_is_seeded_and_bounded(twosort):
    a = [to_text(e) for e in ExprFuzzer(twosort, 5).corpus(60, 5)]
    b = [to_text(e) for e in ExprFuzzer(twosort, 5).corpus(60, 5)]
    assert a == b and len(set(a)) == 60
    assert all(depth(parse(t, twosort.constants)) <= 5 for t in a)
