"""Acceptance gate: one test per criterion, each logging a PASS/FAIL line."""
import itertools
import random
import time
from fractions import Fraction

from acceptance_log import criterion
from intlab.lang import FormalEvaluator, VectorEvaluator, check_hom, parse, typecheck
from intlab.lang.fuzz import ExprFuzzer
from intlab.lang.parser import depth
from intlab.logic import (BUILTINS, B0, B1, TruthTable, apply_logic, column_labels, op_matrix,
                          truth_vec)
from intlab.measure import (REMOVE, ADD, CantorSet, FinitePoints, IntervalSet, MeasurableProp,
                            ball_volume)
from intlab.modal import (ContinuousFrame, FiniteSupport, accumulate, adjacency_operator, bits,
                          box_continuous, box_countable, box_finite, chain, dia_continuous,
                          dia_countable, dia_finite, duality_check, prop_vector,
                          truth_measure_at, values)
from intlab.model import (FALSE, TRUE, Assignment, Constant, Ent, FiniteFrame, FuncVal, Index,
                          IntensionalModel, enumerate_domain)
from intlab.types import E, T, Func, Idx
from intlab.vectors import (Vec, compose_lin, compound_as_tensor, embed, lift, tensor,
                            to_matrix)

FOUR_EDGES = [("w1", "w2"), ("w1", "w4"), ("w2", "w3"), ("w3", "w2"), ("w4", "w4")]
WORLDS = ["w1", "w2", "w3", "w4"]


def test_criterion_01_four_world_necessity():
    with criterion(1, "four-world necessity: accumulate (2,0,1,1), box (1,0,1,1), < 10 ms"):
        adjacency_operator.cache_clear()
        started = time.perf_counter()
        frame = FiniteFrame.from_edges("w", WORLDS, FOUR_EDGES)
        v = prop_vector(frame, [1, 1, 0, 1])
        acc = accumulate(frame, v)
        box = box_finite(frame, v)
        elapsed = time.perf_counter() - started
        assert values(frame, acc) == [2, 0, 1, 1]
        assert bits(frame, box) == [1, 0, 1, 1]
        assert elapsed < 0.010, f"took {elapsed * 1000:.2f} ms"


def test_criterion_02_four_world_possibility():
    with criterion(2, "four-world possibility: dia (1,0,1,1)"):
        frame = FiniteFrame.from_edges("w", WORLDS, FOUR_EDGES)
        assert bits(frame, dia_finite(frame, prop_vector(frame, "1101"))) == [1, 0, 1, 1]


def test_criterion_03_infinite_chain():
    with criterion(3, "chain with support {5,11,19}: box = dia = 1 exactly at {4,10,18}"):
        frame = chain()
        p = FiniteSupport({5, 11, 19})
        box_hits = {i for i in range(31) if box_countable(frame, p, i)}
        dia_hits = {i for i in range(31) if dia_countable(frame, p, i)}
        assert box_hits == {4, 10, 18}
        assert dia_hits == {4, 10, 18}
        assert box_countable(frame, p, 5) == 0


def test_criterion_04_cantor_necessity():
    with criterion(4, "Cantor necessity: measure 2 and box 1; after removing 1/2, 3/2 and box 0"):
        frame = ContinuousFrame("t", -1, 1)
        p = MeasurableProp(IntervalSet.of(("0", "10")), ((CantorSet(3, 5), REMOVE),))
        assert truth_measure_at(frame, p, 4) == 2
        assert box_continuous(frame, p, 4) == 1
        holed = MeasurableProp(IntervalSet.of(("0", "10")).difference(IntervalSet.of(("7/2", "4"))),
                               p.exceptions)
        assert truth_measure_at(frame, holed, 4) == Fraction(3, 2)
        assert box_continuous(frame, holed, 4) == 0


def test_criterion_05_positive_measure_possibility():
    with criterion(5, "possibility: [4.25,4.35) gives 1/10 and dia 1; a single point gives dia 0"):
        frame = ContinuousFrame("t", -1, 1)
        p = MeasurableProp(IntervalSet.of(("4.25", "4.35")))
        assert truth_measure_at(frame, p, 4) == Fraction(1, 10)
        assert dia_continuous(frame, p, 4) == 1
        point = MeasurableProp(IntervalSet(), ((FinitePoints(["43/10"]), ADD),))
        assert point.eval_at("43/10") == 1
        assert dia_continuous(frame, point, 4) == 0


def test_criterion_06_logic_matrices():
    with criterion(6, "NOT and AND matrices entry for entry; all 16 binary tables"):
        rows = [TRUE, FALSE]
        assert to_matrix(op_matrix(BUILTINS["NOT"]), rows, column_labels(1)) == [[0, 1], [1, 0]]
        assert to_matrix(op_matrix(BUILTINS["AND"]), rows, column_labels(2)) == [
            [1, 0, 0, 0], [0, 1, 1, 1]]
        inputs = list(itertools.product((0, 1), repeat=2))
        for outputs in itertools.product((0, 1), repeat=4):
            tt = TruthTable(2, dict(zip(inputs, outputs)))
            m = op_matrix(tt)
            for a, b in inputs:
                assert apply_logic(m, [truth_vec(a), truth_vec(b)]) == truth_vec(tt(a, b))
        assert apply_logic(op_matrix(BUILTINS["NOT"]), [B1]) == B0


def test_criterion_07_homomorphism_suite(twosort):
    with criterion(7, "homomorphism: 0 violations on >= 200 expressions of depth <= 5, < 60 s"):
        started = time.perf_counter()
        assert len(twosort.index_space) <= 8 and len(twosort.entities) <= 3
        corpus = ExprFuzzer(twosort, seed=2024).corpus(220, max_depth=5)
        assert len(corpus) >= 200
        assert len({str(e) for e in corpus}) == len(corpus)
        formal, vector = FormalEvaluator(twosort), VectorEvaluator(twosort)
        failures = []
        for e in corpus:
            assert depth(e) <= 5
            rep = check_hom(typecheck(e, twosort), twosort, formal=formal, vector=vector)
            failures.extend((str(e), v) for v in rep.violations)
        elapsed = time.perf_counter() - started
        assert failures == []
        assert elapsed < 60


def _chain_model(rng):
    n_e, n_w = rng.randint(1, 4), rng.randint(1, 4)
    worlds = [f"v{k}" for k in range(n_w)]
    frame = FiniteFrame.from_edges("w", worlds, [])
    parts = IntensionalModel(("w",), {"w": frame}, tuple(f"d{k}" for k in range(n_e)), {})
    pool = [E, T, Idx("w")]
    n = rng.randint(1, 4)
    types = [rng.choice(pool) for _ in range(n + 1)]
    funcs = []
    for a, b in zip(types, types[1:]):
        res = enumerate_domain(b, parts)
        funcs.append(FuncVal(a, tuple((x, rng.choice(res)) for x in enumerate_domain(a, parts))))
    return parts, types, funcs


def test_criterion_08_composition_preservation():
    with criterion(8, "composition: fold of lifts equals lift of composition, 1000 trials"):
        rng = random.Random(8)
        for _ in range(1000):
            parts, types, funcs = _chain_model(rng)
            folded = lift(funcs[0], parts)
            for f in funcs[1:]:
                folded = compose_lin(lift(f, parts), folded)
            composite = FuncVal(types[0], tuple(
                (a, _apply_all(funcs, a)) for a in enumerate_domain(types[0], parts)))
            assert folded == lift(composite, parts)
            for a in enumerate_domain(types[0], parts):
                assert folded(embed(a)) == embed(_apply_all(funcs, a))
            # the same chain through the vector evaluator
            consts = {f"f{k}": Constant(f"f{k}", Func(types[k], types[k + 1]),
                                        {s: funcs[k] for s in parts.index_space})
                      for k in range(len(funcs))}
            model = IntensionalModel(parts.sorts, parts.frames, parts.entities, consts)
            start = rng.choice(enumerate_domain(types[0], parts))
            text = "x"
            for k in range(len(funcs)):
                text = f"f{k}({text})"
            te = typecheck(parse(text, consts), model, free_types={"x": types[0]})
            g = Assignment.of({"x": start})
            s = model.index_space[0]
            assert VectorEvaluator(model).eval(te, g, s) == folded(embed(start))


def _apply_all(funcs, a):
    for f in funcs:
        a = f(a)
    return a


def test_criterion_09_duality():
    with criterion(9, "duality: 20 random 4-world frames x 16 propositions; Cantor fixture"):
        rng = random.Random(9)
        for _ in range(20):
            edges = [(a, b) for a in WORLDS for b in WORLDS if rng.random() < 0.4]
            frame = FiniteFrame.from_edges("w", WORLDS, edges)
            assert duality_check(frame) == []
        frame = ContinuousFrame("t", -1, 1)
        p = MeasurableProp(IntervalSet.of(("0", "10")), ((CantorSet(3, 5), REMOVE),))
        samples = [Fraction(k, 4) for k in range(-8, 50)]
        assert duality_check(frame, p, samples) == []


def test_criterion_10_ball_volumes():
    with criterion(10, "ball volumes 2r, pi r^2, 4/3 pi r^3 in exact form"):
        r = Fraction(7, 3)
        v1, v2, v3 = ball_volume(1, r), ball_volume(2, r), ball_volume(3, r)
        assert (v1.coefficient, v1.pi_power) == (2 * r, 0)
        assert (v2.coefficient, v2.pi_power) == (r ** 2, 1)
        assert (v3.coefficient, v3.pi_power) == (Fraction(4, 3) * r ** 3, 1)


def test_criterion_11_tensor_consistency(twosort):
    with criterion(11, "h_S(s) equals the tensor of per-sort basis vectors on the demo model"):
        seen = set()
        for s in twosort.index_space:
            per_sort = [Vec.unit(Idx(srt), Index(srt, s[srt])) for srt in twosort.sorts]
            image = compound_as_tensor(embed(s), twosort)
            assert image == tensor(*per_sort)
            seen.add(image)
        assert len(seen) == len(twosort.index_space)


def test_criterion_12_chain_frame_coincidence():
    with criterion(12, "uniform out-degree 1 frames: box equals dia for every proposition"):
        for n in range(1, 5):
            worlds = [f"w{k}" for k in range(1, n + 1)]
            for targets in itertools.product(worlds, repeat=n):
                frame = FiniteFrame.from_edges("w", worlds, list(zip(worlds, targets)))
                for combo in itertools.product((0, 1), repeat=n):
                    v = prop_vector(frame, combo)
                    assert box_finite(frame, v) == dia_finite(frame, v)


def test_four_world_evaluators_agree_with_frame(fourworld):
    te = typecheck(parse("box[w] phi", fourworld.constants), fourworld)
    ve = VectorEvaluator(fourworld)
    mv = ve.modal_vector(te, Assignment.of())
    assert [mv[s] for s in fourworld.index_space] == [1, 0, 1, 1]
    formal = FormalEvaluator(fourworld)
    assert [formal(te, None, s).bit for s in fourworld.index_space] == [1, 0, 1, 1]
    assert Ent("ann") in enumerate_domain(E, fourworld)
