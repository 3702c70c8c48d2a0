import pytest
from hypothesis import given
from hypothesis import strategies as st

from unimach import corpus
from unimach.resource import (
    Budget,
    Exp2,
    ExpressionError,
    LinMul,
    Pow,
    Var,
    eval_capped,
    eval_g,
    fit_overhead,
    initial_cells,
    parse_g,
    repr_length,
    run_space_bounded,
    validate_subclass,
)

CASES = {
    "2*x": lambda x: 2 * x,
    "3*x^2": lambda x: 3 * x * x,
    "2^x": lambda x: 2**x,
    "2^(x^2+1)": lambda x: 2 ** (x * x + 1),
    "x+5": lambda x: x + 5,
    "x^2+x+1": lambda x: x * x + x + 1,
}


def test_parse_shapes():
    assert parse_g("2*x") == LinMul(2, Var())
    assert parse_g("x^3") == Pow(Var(), 3)
    assert parse_g("2^x") == Exp2(Var())
    assert str(parse_g("3 * x ^ 2")) == "3*x^2"


@pytest.mark.parametrize("text", ["", "x+", "2**x", "y", "x^", "(x", "x^x", "-x"])
def test_parse_errors(text):
    with pytest.raises(ExpressionError):
        parse_g(text)


def test_repr_lengths():
    assert repr_length("2*x") == 3
    assert repr_length("x^2") == 3
    assert repr_length("3*x^2") == 5
    assert repr_length("2^(x^2+1)") == 9


@pytest.mark.parametrize("text", sorted(CASES))
def test_eval_and_validate_against_python(text):
    f = CASES[text]
    g = parse_g(text)
    for x in range(0, 20):
        assert eval_g(g, x) == f(x)
        assert eval_capped(g, x, 50) == min(f(x), 50)
    c_g = validate_subclass(g)
    assert c_g == max(0, max(x - f(x) for x in range(65)))
    assert all(c_g + f(x) >= x for x in range(65))


def test_outside_subclass():
    assert validate_subclass("log2(x)") is None
    assert validate_subclass("5") is None
    assert validate_subclass("0*x") is None
    with pytest.raises(ExpressionError):
        Budget.of("log2(x)")


def test_identity_bound_needs_no_constant():
    assert validate_subclass("x") == 0


def test_within_budget_run():
    b = Budget.of("100*x")
    run = run_space_bounded(corpus.identity(), (1,), b)
    assert run.outcome == "final" and run.result == (1,)
    assert run.peak_cells <= b.space_cells(1) == run.limit == 105


def test_over_budget_run_is_reproducible():
    b = Budget.of("100*x")
    a = run_space_bounded(corpus.marcher(), (1,), b)
    c = run_space_bounded(corpus.marcher(), (1,), b)
    assert a.outcome == "violation" and not a.ok
    assert a.violation_step == c.violation_step is not None
    assert a.peak_cells == a.limit + 1


def test_budget_smaller_than_input_tape():
    m = corpus.identity()
    b = Budget.of("x")
    run = run_space_bounded(m, (1,), b)
    assert initial_cells(m, (1,)) > b.space_cells(1)
    assert run.outcome == "violation" and run.violation_step == 0


def test_fit_overhead():
    rows = [("m", 1, 10, 1), ("m", 2, 40, 4), ("m", 3, 90, 9)]
    # C comes from the smallest x, where g = 1 splits t evenly: C = 5, then d = 1 misses 40 > 25
    assert fit_overhead(rows) == (5, 2)
    assert fit_overhead([]) is None
    assert fit_overhead([("m", 1, 1, 1), ("m", 2, 10**9, 2)]) is None


@given(st.integers(1, 6), st.integers(0, 4), st.integers(0, 30), st.integers(0, 30))
def test_monotone_in_x(a, k, x, dx):
    for g in (LinMul(a, Var()), Pow(Var(), k + 1), Exp2(LinMul(a, Var()))):
        assert eval_g(g, x) <= eval_g(g, x + dx)


def test_right_mover_breaks_a_linear_budget():
    run = run_space_bounded(corpus.marcher(), (1,), Budget.of("2*x"))
    assert run.outcome == "violation"
