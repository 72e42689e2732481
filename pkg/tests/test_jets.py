import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from oracles import fd_derivative
from simpsonlab.errors import DomainError, NonSmoothPointError
from simpsonlab.expr import Binary, Const, Pow, Unary, X, parse
from simpsonlab.jets import derivative, eval_jet, jet_mul

from conftest import SMOOTH_CORPUS


class TestFixtures:
    def test_quartic_monomial(self):
        j = eval_jet(parse("x^4"), 1.0)
        assert j.derivatives() == (1.0, 4.0, 12.0, 24.0, 24.0)

    def test_sine_series_at_zero(self):
        j = eval_jet(parse("sin(x)"), 0.0, order=3)
        assert j.derivatives()[:4] == (0.0, 1.0, 0.0, -1.0)

    def test_constant_has_flat_jet(self):
        j = eval_jet(parse("3.5"), 2.0)
        assert j.coeffs == (3.5, 0.0, 0.0, 0.0, 0.0)

    def test_exp_closed_form(self):
        j = eval_jet(parse("exp(2*x)"), 0.5)
        for k in range(5):
            assert j.derivative(k) == pytest.approx(2**k * math.e, rel=1e-14)

    def test_log_closed_form(self):
        # d^k/dx^k log(1+x) = (-1)^(k-1) (k-1)! / (1+x)^k
        j = eval_jet(parse("log(1+x)"), 1.0)
        assert j.derivative(0) == pytest.approx(math.log(2.0), rel=1e-15)
        for k in range(1, 5):
            expect = (-1) ** (k - 1) * math.factorial(k - 1) / 2.0**k
            assert j.derivative(k) == pytest.approx(expect, rel=1e-14)

    def test_quotient(self):
        # 1/(1+x) at 0: k-th derivative (-1)^k k!
        j = eval_jet(parse("1/(1+x)"), 0.0)
        for k in range(5):
            assert j.derivative(k) == pytest.approx(
                (-1) ** k * math.factorial(k), rel=1e-14
            )

    def test_fractional_power(self):
        j = eval_jet(parse("x^2.5"), 4.0)
        coeff = 2.5 * 1.5 * 0.5  # d^3/dx^3 x^2.5 = 1.875 x^-0.5
        assert j.derivative(3) == pytest.approx(coeff * 4.0**-0.5, rel=1e-13)

    def test_sqrt_matches_half_power(self):
        a = eval_jet(parse("sqrt(x)"), 2.25)
        b = eval_jet(parse("x^0.5"), 2.25)
        assert np.allclose(a.coeffs, b.coeffs, rtol=1e-14, atol=0.0)


class TestFiniteDifferenceOracle:
    def test_spec_example_exp2x(self):
        e = parse("exp(2*x)")
        j = eval_jet(e, 0.5, order=3)
        for order in (1, 2, 3):
            ref = fd_derivative(e, 0.5, order, h=1e-4)
            assert j.derivative(order) == pytest.approx(ref, rel=1e-6)

    def test_random_corpus_orders_1_to_3(self):
        rng = np.random.default_rng(20260810)
        checked = 0
        while checked < 200:
            text, (lo, hi) = SMOOTH_CORPUS[checked % len(SMOOTH_CORPUS)]
            e = parse(text)
            # keep the 5-point stencil inside the smooth window
            x = float(rng.uniform(lo + 1e-3, hi - 1e-3))
            j = eval_jet(e, x, order=3)
            for order in (1, 2, 3):
                got = j.derivative(order)
                ref = fd_derivative(e, x, order, h=1e-4)
                assert abs(got - ref) <= max(1e-6, 1e-6 * abs(got)), (
                    text, x, order, got, ref
                )
            checked += 1


class TestAlgebraicProperties:
    @settings(max_examples=60, deadline=None)
    @given(
        st.floats(min_value=-5, max_value=5, allow_nan=False),
        st.floats(min_value=-5, max_value=5, allow_nan=False),
        st.floats(min_value=0.2, max_value=1.4, allow_nan=False),
    )
    def test_linearity(self, alpha, beta, x0):
        f = parse("sin(x)*x")
        g = parse("exp(x)")
        combo = Binary(
            "add",
            Binary("mul", Const(alpha), f),
            Binary("mul", Const(beta), g),
        )
        jc = eval_jet(combo, x0)
        jf = eval_jet(f, x0)
        jg = eval_jet(g, x0)
        for k in range(5):
            expect = alpha * jf.coeffs[k] + beta * jg.coeffs[k]
            assert jc.coeffs[k] == pytest.approx(expect, rel=1e-14, abs=1e-16)

    def test_product_rule_is_cauchy_product(self):
        f = parse("sin(x)+x^2")
        g = parse("exp(x)*x")
        x0 = 0.8
        product = eval_jet(Binary("mul", f, g), x0)
        direct = jet_mul(eval_jet(f, x0), eval_jet(g, x0))
        assert product.coeffs == direct.coeffs

    def test_polynomials_exact(self):
        # jets of degree-<=4 polynomials equal the binomially shifted
        # coefficients, computed here by direct coefficient arithmetic
        rng = np.random.default_rng(7)
        for _ in range(50):
            coeffs = rng.uniform(-10, 10, size=5)
            x0 = float(rng.uniform(-2, 2))
            text = "+".join(f"({float(c)!r})*x^{k}" for k, c in enumerate(coeffs))
            jet = eval_jet(parse(text), x0)
            for k in range(5):
                shifted = sum(
                    coeffs[n] * math.comb(n, k) * x0 ** (n - k)
                    for n in range(k, 5)
                )
                assert jet.coeffs[k] == pytest.approx(
                    shifted, rel=1e-12, abs=1e-11
                )


class TestNonSmoothAndDomain:
    def test_abs_at_zero_order0_ok(self):
        assert eval_jet(parse("abs(x)"), 0.0, order=0).c0 == 0.0

    def test_abs_at_zero_raises_for_derivatives(self):
        with pytest.raises(NonSmoothPointError):
            eval_jet(parse("abs(x)"), 0.0, order=1)

    def test_abs_sign_propagation(self):
        pos = eval_jet(parse("abs(x^3)"), 2.0)
        neg = eval_jet(parse("abs(x^3)"), -2.0)
        assert pos.derivative(1) == pytest.approx(12.0)
        assert neg.derivative(1) == pytest.approx(-12.0)

    def test_abs_array_gate(self):
        xs = np.array([0.5, 0.0, 1.0])
        with pytest.raises(NonSmoothPointError):
            eval_jet(parse("abs(x)"), xs, order=1)

    def test_sqrt_at_zero(self):
        assert eval_jet(parse("sqrt(x)"), 0.0, order=0).c0 == 0.0
        with pytest.raises(DomainError):
            eval_jet(parse("sqrt(x)"), 0.0, order=1)

    def test_log_domain(self):
        with pytest.raises(DomainError):
            eval_jet(parse("log(x)"), 0.0)

    def test_fractional_power_domain(self):
        with pytest.raises(DomainError):
            eval_jet(parse("x^1.5"), 0.0, order=2)

    def test_negative_power_at_zero(self):
        with pytest.raises(DomainError):
            eval_jet(parse("x^-2"), 0.0)

    def test_order_gate_validation(self):
        with pytest.raises(ValueError):
            eval_jet(parse("x"), 1.0, order=5)


def test_vectorized_matches_scalar():
    e = parse("exp(2*x)*sin(x)+log(1+x)")
    xs = np.linspace(0.1, 2.0, 23)
    batch = eval_jet(e, xs)
    for i, x in enumerate(xs):
        single = eval_jet(e, float(x))
        for k in range(5):
            assert batch.coeffs[k][i] == pytest.approx(
                single.coeffs[k], rel=1e-15
            )


def test_derivative_helper():
    assert derivative(parse("x^4"), 1.0, 3) == 24.0
