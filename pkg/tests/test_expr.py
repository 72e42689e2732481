import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from simpsonlab.errors import (
    DomainError,
    ExpressionSyntaxError,
    NonConstantExponentError,
    UnknownIdentifierError,
)
from simpsonlab.expr import (
    Binary,
    Const,
    Pow,
    Unary,
    Var,
    X,
    eval_value,
    parse,
    to_source,
)


class TestParsing:
    def test_monomial_power(self):
        assert parse("x^4") == Pow(X, 4.0)

    def test_sum_of_call_and_product(self):
        assert parse("sin(x)+2*x") == Binary(
            "add", Unary("sin", X), Binary("mul", Const(2.0), X)
        )

    def test_precedence_pow_over_mul_over_add(self):
        assert parse("2+3*x^2") == Binary(
            "add", Const(2.0), Binary("mul", Const(3.0), Pow(X, 2.0))
        )

    def test_unary_minus_binds_below_pow(self):
        assert parse("-x^2") == Unary("neg", Pow(X, 2.0))

    def test_left_associativity_of_sub(self):
        assert parse("1-2-3") == Binary(
            "sub", Binary("sub", Const(1.0), Const(2.0)), Const(3.0)
        )

    def test_parens_override(self):
        assert parse("2*(x+1)") == Binary(
            "mul", Const(2.0), Binary("add", X, Const(1.0))
        )

    def test_pow_right_associative_constant_fold(self):
        # exponent subtree 2^3 is x-free and folds to 8
        assert parse("x^2^3") == Pow(X, 8.0)

    def test_negative_exponent(self):
        assert parse("x^-2") == Pow(X, -2.0)

    def test_scientific_notation(self):
        assert parse("1.5e-3*x") == Binary("mul", Const(1.5e-3), X)

    @pytest.mark.parametrize(
        "source, offset",
        [("x^", 2), ("", 0), ("   ", 0), ("2*", 2), ("(x+1", 4), ("sin x", 4),
         ("2x", 1), ("x+*3", 2)],
    )
    def test_syntax_error_offsets(self, source, offset):
        with pytest.raises(ExpressionSyntaxError) as err:
            parse(source)
        assert err.value.offset == offset

    @pytest.mark.parametrize("source, offset", [("y+1", 0), ("sin(t)", 4)])
    def test_unknown_identifier(self, source, offset):
        with pytest.raises(UnknownIdentifierError) as err:
            parse(source)
        assert err.value.offset == offset

    @pytest.mark.parametrize("source", ["x^x", "2^(x+1)", "x^(1+x)"])
    def test_non_constant_exponent_rejected(self, source):
        with pytest.raises(NonConstantExponentError):
            parse(source)


class TestPrinting:
    @pytest.mark.parametrize(
        "source",
        [
            "x^4",
            "sin(x)+2*x",
            "-x^2",
            "1-2-3",
            "2*(x+1)",
            "x/(1+x)",
            "1-(2-3)",
            "abs(x)-sqrt(x)*log(1+x)",
            "-(x*x)",
            "(x+1)^2",
            "exp(2*x)/x^3",
            "x^-1.5",
            "--x",
        ],
    )
    def test_round_trip_fixed(self, source):
        tree = parse(source)
        assert parse(to_source(tree)) == tree

    def test_negative_constant_prints_parseable(self):
        # programmatic Const(-2) re-parses as neg(2); the value agrees
        tree = Const(-2.0)
        reparsed = parse(to_source(tree))
        assert eval_value(reparsed, 0.0) == -2.0


_leaf = st.one_of(
    st.builds(Const, st.floats(min_value=0.0, max_value=100.0, allow_nan=False)),
    st.just(X),
)
_expr_trees = st.recursive(
    _leaf,
    lambda inner: st.one_of(
        st.builds(
            Unary,
            st.sampled_from(["neg", "abs", "sin", "cos", "exp", "log", "sqrt"]),
            inner,
        ),
        st.builds(Binary, st.sampled_from(["add", "sub", "mul", "div"]),
                  inner, inner),
        st.builds(
            Pow,
            inner,
            st.floats(min_value=-4.0, max_value=4.0, allow_nan=False),
        ),
    ),
    max_leaves=25,
)


@settings(max_examples=300, deadline=None)
@given(_expr_trees)
def test_round_trip_property(tree):
    assert parse(to_source(tree)) == tree


class TestEvalValue:
    def test_deterministic(self):
        e = parse("sin(x)*exp(x)+x^2")
        assert eval_value(e, 0.7) == eval_value(e, 0.7)

    def test_matches_math(self):
        e = parse("sin(x)*exp(x)+x^2")
        x = 0.7
        assert eval_value(e, x) == pytest.approx(
            math.sin(x) * math.exp(x) + x * x, rel=1e-15
        )

    def test_array_matches_scalar(self):
        e = parse("exp(2*x)/(1+x^2)")
        xs = np.linspace(0.0, 2.0, 17)
        batch = eval_value(e, xs)
        singles = np.array([eval_value(e, float(x)) for x in xs])
        assert np.array_equal(batch, singles)

    @pytest.mark.parametrize(
        "source, x",
        [("log(x)", -1.0), ("log(x)", 0.0), ("sqrt(x)", -0.5),
         ("1/x", 0.0), ("x^-1", 0.0), ("x^0.5", -1.0)],
    )
    def test_domain_errors(self, source, x):
        with pytest.raises(DomainError):
            eval_value(parse(source), x)

    def test_array_domain_error(self):
        with pytest.raises(DomainError):
            eval_value(parse("log(x)"), np.array([1.0, 2.0, -1.0]))

    def test_integer_power_of_negative_base(self):
        assert eval_value(parse("x^3"), -2.0) == -8.0
