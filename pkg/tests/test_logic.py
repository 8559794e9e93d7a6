import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from intlab.errors import NotInImage, SpaceMismatch
from intlab.logic import (B0, B1, BUILTINS, TruthTable, apply_logic, column_labels, input_rows,
                          op_matrix, truth_bit, truth_vec)
from intlab.model import FALSE, TRUE
from intlab.vectors import Vec, to_matrix
from intlab.types import T


def test_basis_order_and_inverse():
    assert B1 == Vec(T, {TRUE: 1}) and B0 == Vec(T, {FALSE: 1})
    assert truth_bit(truth_vec(1)) == 1 and truth_bit(truth_vec(0)) == 0
    with pytest.raises(NotInImage):
        truth_bit(B1 + B0)
    assert input_rows(2) == [(1, 1), (1, 0), (0, 1), (0, 0)]


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_builtin_rows_match_table(name):
    tt = BUILTINS[name]
    m = op_matrix(tt)
    mat = to_matrix(m, [TRUE, FALSE], column_labels(tt.arity))
    # row for b1 lists the table outputs in b1-first column order
    assert mat[0] == [tt(*row) for row in input_rows(tt.arity)]
    assert [a + b for a, b in zip(*mat)] == [1] * 2 ** tt.arity


@given(st.integers(1, 4).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, 1), min_size=2 ** n,
                                             max_size=2 ** n))))
def test_random_tables_apply_correctly(spec):
    n, outputs = spec
    rows = list(itertools.product((0, 1), repeat=n))
    tt = TruthTable(n, dict(zip(rows, outputs)))
    m = op_matrix(tt)
    for row in rows:
        assert apply_logic(m, [truth_vec(b) for b in row]) == truth_vec(tt(*row))


def test_apply_logic_validates():
    with pytest.raises(SpaceMismatch):
        apply_logic(op_matrix(BUILTINS["AND"]), [B1])
    with pytest.raises(NotInImage):
        apply_logic(op_matrix(BUILTINS["NOT"]), [B1 * 2])
    with pytest.raises(ValueError):
        TruthTable(2, {(0, 0): 1})
