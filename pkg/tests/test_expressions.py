import pytest

from app.exceptions import InputError
from app.services import lie
from app.services.expressions import evaluate, evaluate_chain
from app.services.operators import OperatorContext, compose


@pytest.fixture
def ctx(paper_operators):
    return OperatorContext(paper_operators)


def test_products_compose_right_to_left(ctx, paper_operators):
    x, y = paper_operators["x"], paper_operators["y"]
    assert evaluate("xy", ctx) == compose(x, y)


def test_powers_and_zero(ctx, paper_operators):
    assert evaluate("x^2", ctx).is_zero()
    assert evaluate("0", ctx).is_zero()
    assert evaluate("z^1", ctx) == paper_operators["z"]


def test_signs_and_coefficients(ctx, paper_operators):
    x = paper_operators["x"]
    assert evaluate("2x - x", ctx) == x
    assert evaluate("-1/2*x + 3/2 x", ctx) == x
    assert evaluate("(x + y) - y", ctx) == x


def test_brackets(ctx):
    assert evaluate("[x,y]", ctx) == evaluate("xy - yx", ctx)
    assert evaluate("[[y,z],x]", ctx) == evaluate("yzx", ctx)


def test_chain(ctx):
    values = evaluate_chain("yx = 0 = x^2", ctx)
    assert len(values) == 3
    assert all(value.is_zero() for value in values)


@pytest.mark.parametrize("text", ["w", "x +", "[x,y", "2", "x^0", "x = y", "x)"])
def test_rejects(ctx, text):
    with pytest.raises(InputError):
        evaluate(text, ctx)


def test_basis_names_with_brackets_win(paper_L):
    algebra, _ = paper_L
    assert lie.evaluate(algebra, "[[y,z],x]") == algebra.basis_vector("[[y,z],x]")
    assert lie.evaluate(algebra, "[x,[y,z]]") == -algebra.basis_vector("[[y,z],x]")


def test_lie_context_forbids_juxtaposition(paper_L):
    algebra, _ = paper_L
    with pytest.raises(InputError, match="Juxtaposition"):
        lie.evaluate(algebra, "xy")
