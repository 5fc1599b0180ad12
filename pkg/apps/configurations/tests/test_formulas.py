import pytest

from apps.configurations.datatype import Interpretation
from apps.configurations.exceptions import FormulaError
from apps.configurations.formulas import (
    FALSE,
    TRUE,
    BlockEq,
    Eq,
    Not,
    Var,
    atom,
    block_assignment,
    check_formula,
    conj,
    disj,
    eval_qf,
    expand_block_equalities,
    format_formula,
    shift_positions,
    substitute,
    variables,
)
from apps.kernel.builders import GRAPH_SIG, ORDER_SIG, complete_graph
from apps.kernel.exceptions import SignatureError

K2 = complete_graph(2)


# ─── Evaluation ─────────────────────────────────────────────────────────────────


def test_atom_on_an_edge():
    assert eval_qf(atom("E", (0, 0), (1, 1)), K2, {Var(0, 0): 0, Var(1, 1): 1})


def test_equal_variables():
    assert eval_qf(Eq(Var(0, 0), Var(1, 0)), K2, {Var(0, 0): 1, Var(1, 0): 1})


def test_non_edge_and_edge_is_false():
    phi = conj(Not(atom("E", (0, 0), (1, 0))), atom("E", (1, 0), (0, 0)))
    assert not eval_qf(phi, K2, {Var(0, 0): 0, Var(1, 0): 1})


def test_unassigned_variable_is_an_error():
    with pytest.raises(FormulaError):
        eval_qf(atom("E", (0, 0), (1, 0)), K2, {Var(0, 0): 0})


def test_constants_and_empty_connectives():
    assert conj() == TRUE
    assert disj() == FALSE
    assert eval_qf(disj(FALSE, TRUE), K2, {})


def test_block_equality_compares_listed_positions():
    env = block_assignment([(0, 1), (0, 0)])
    assert eval_qf(BlockEq(0, 1, (0,)), K2, env)
    assert not eval_qf(BlockEq(0, 1, (0, 1)), K2, env)


# ─── Well-formedness ────────────────────────────────────────────────────────────


def test_variable_out_of_range_is_rejected():
    with pytest.raises(FormulaError):
        check_formula(atom("E", (0, 0), (1, 2)), GRAPH_SIG, 2, 2)


def test_unknown_symbol_is_rejected():
    with pytest.raises(FormulaError):
        check_formula(atom("R", (0, 0), (1, 0)), GRAPH_SIG, 2, 1)


def test_interpretation_must_cover_the_source():
    with pytest.raises(SignatureError):
        Interpretation.of(ORDER_SIG, GRAPH_SIG, 2, {})


def test_interpretation_width_is_positive():
    with pytest.raises(FormulaError):
        Interpretation.of(ORDER_SIG, GRAPH_SIG, 0, {"R": atom("E", (0, 0), (1, 0))})


# ─── Rewriting ──────────────────────────────────────────────────────────────────


def test_shift_keeps_block_equalities_whole():
    assert shift_positions(BlockEq(0, 1, (0, 1)), 2) == BlockEq(0, 1, (2, 3))
    assert shift_positions(atom("E", (0, 0), (1, 1)), 1) == atom("E", (0, 1), (1, 2))


def test_substitution_expands_block_equalities():
    phi = substitute(BlockEq(0, 1, (0,)), lambda v: Var(v.arg, v.pos + 3))
    assert phi == Eq(Var(0, 3), Var(1, 3))


def test_expansion_covers_every_position():
    phi = expand_block_equalities(BlockEq(0, 1, (2, 3)))
    assert variables(phi) == {Var(0, 2), Var(1, 2), Var(0, 3), Var(1, 3)}


# ─── Prefix notation ────────────────────────────────────────────────────────────


def test_prefix_notation():
    phi = conj(atom("E", (0, 0), (1, 1)), Not(Eq(Var(0, 0), Var(1, 0))), BlockEq(0, 1, (2, 3)))
    assert format_formula(phi) == "(and (E x0.0 x1.1) (not (= x0.0 x1.0)) (beq 0 1 [2 3]))"
    assert format_formula(disj(TRUE, FALSE)) == "(or true false)"
