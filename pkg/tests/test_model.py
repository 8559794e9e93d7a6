import json

import pytest

from intlab.errors import CombinatorialBlowup, ModelError, TypeMismatch, UnknownSort
from intlab.model import (FALSE, TRUE, Assignment, Compound, Ent, FiniteFrame, FuncVal, Index,
                          IntensionalModel, Tru, domain_size, enumerate_domain, load_model,
                          model_from_dict, model_hash, render_value, variant)
from intlab.types import E, S, T, Func, Idx, func, uncurry


def test_types_print_and_curry():
    t = func(E, E, T)
    assert str(t) == "<e,<e,t>>"
    assert uncurry(t) == ([E, E], T)


def test_frame_successors_and_flags():
    f = FiniteFrame.from_edges("w", ["w1", "w2"], [("w1", "w2"), ("w2", "w2")])
    assert f.successors("w1") == ["w2"]
    assert f.out_degree("w2") == 1
    assert not f.is_reflexive
    with pytest.raises(ModelError):
        FiniteFrame.from_edges("w", ["w1"], [("w1", "w9")])


def test_demo_models_load(fourworld, twosort):
    assert len(fourworld.index_space) == 4
    assert len(twosort.index_space) == 6
    s = Compound.of(w="w2", i="i1")
    assert twosort.extension("the_king", s) == Ent("cal")
    assert twosort.extension("happy", s)(Ent("ann")) == FALSE


def test_compound_index_order(twosort):
    labels = [str(s) for s in twosort.index_space]
    assert labels[:3] == ["(w1,i1)", "(w1,i2)", "(w1,i3)"]


def test_function_domain_enumeration(twosort):
    dom = enumerate_domain(Func(E, T), twosort)
    assert len(dom) == 8 == domain_size(Func(E, T), twosort)
    assert len(set(dom)) == 8
    assert render_value(dom[0]) == "{ann: 1, bob: 1, cal: 1}"
    assert enumerate_domain(T, twosort) == [TRUE, FALSE]


def test_cap_is_enforced(twosort, monkeypatch):
    monkeypatch.setenv("INTLAB_CAP", "100")
    with pytest.raises(CombinatorialBlowup):
        domain_size(Func(Func(E, T), T), twosort)


def test_unknown_sort(twosort):
    with pytest.raises(UnknownSort):
        enumerate_domain(Idx("zz"), twosort)


def test_variant_checks_type(twosort):
    g = variant(Assignment.of(), "x", Ent("ann"))
    assert g["x"] == Ent("ann")
    with pytest.raises(TypeMismatch):
        variant(g, "x", Tru(1))
    with pytest.raises(TypeMismatch):
        variant(g, "x", Ent("zed"), E, twosort)


def _base():
    return {"sorts": [{"id": "w", "indices": ["w1", "w2"], "edges": [["w1", "w2"]]}],
            "entities": ["a", "b"],
            "constants": [{"name": "p", "type": "<s,t>", "intension": {"w1": 1, "w2": 0}}]}


def test_model_file_errors():
    data = _base()
    data["constants"][0]["intension"] = {"w1": 1}
    with pytest.raises(ModelError, match="missing index"):
        model_from_dict(data)
    data = _base()
    data["sorts"][0]["id"] = "t"
    with pytest.raises(ModelError, match="reserved"):
        model_from_dict(data)
    data = _base()
    data["entities"] = []
    with pytest.raises(ModelError):
        model_from_dict(data)
    data = _base()
    data["constants"].append({"name": "k", "type": "e", "value": "zz"})
    with pytest.raises(ModelError):
        model_from_dict(data)


def test_rigid_and_wildcard_tables():
    data = _base()
    data["constants"].append({"name": "f", "type": "<s,<e,e>>",
                              "intension": {"*": {"a": "b", "*": "a"}}})
    m = model_from_dict(data)
    for s in m.index_space:
        assert m.extension("f", s)(Ent("a")) == Ent("b")
        assert m.extension("f", s)(Ent("b")) == Ent("a")


def test_with_extension_leaves_original(twosort):
    s = twosort.index_space[0]
    bad = twosort.with_extension("rains", s, Tru(0))
    assert twosort.extension("rains", s) == Tru(1)
    assert bad.extension("rains", s) == Tru(0)


def test_load_and_hash(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(_base()))
    m = load_model(path)
    assert isinstance(m, IntensionalModel)
    assert len(model_hash(path)) == 16
    with pytest.raises(ModelError):
        load_model(tmp_path / "missing.json")


def test_funcval_lookup():
    f = FuncVal(E, ((Ent("a"), TRUE), (Ent("b"), FALSE)))
    assert f(Ent("a")) == TRUE
    with pytest.raises(TypeMismatch):
        f(Ent("c"))
    assert Index("w", "w1") != Index("v", "w1")
    assert S != T
