import math

import numpy as np
import pytest

from oracles import mp_integrate
from simpsonlab.errors import InvalidIntervalError, ToleranceNotReachedError
from simpsonlab.expr import Binary, Const, parse
from simpsonlab.quadrature import (
    MidpointVariant,
    integrate,
    simpson_defect,
    sup_abs_derivative,
)

# exact antiderivative fixtures
KNOWN_INTEGRALS = [
    ("x^2", 0.0, 1.0, 1.0 / 3.0),
    ("sin(x)", 0.0, math.pi, 2.0),
    ("exp(x)", 0.0, 1.0, math.e - 1.0),
]


class TestIntegrate:
    @pytest.mark.parametrize("text, lo, hi, exact", KNOWN_INTEGRALS)
    def test_known_antiderivatives(self, text, lo, hi, exact):
        value, err = integrate(parse(text), lo, hi, tol=1e-12)
        assert err <= 1e-12
        assert abs(value - exact) <= max(err, 5e-15)

    def test_error_estimate_brackets_truth(self):
        e = parse("exp(x)*sin(3*x)")
        truth = mp_integrate(e, 0.0, 2.0)
        for tol in (1e-6, 1e-9, 1e-12):
            value, err = integrate(e, 0.0, 2.0, tol=tol)
            assert err <= tol
            assert abs(value - truth) <= err

    def test_rejects_bad_interval_and_tol(self):
        with pytest.raises(InvalidIntervalError):
            integrate(parse("x"), 1.0, 1.0, 1e-9)
        with pytest.raises(InvalidIntervalError):
            integrate(parse("x"), 2.0, 1.0, 1e-9)
        with pytest.raises(ValueError):
            integrate(parse("x"), 0.0, 1.0, 0.0)

    def test_recursion_cap_carries_best_value(self):
        # a kink starves the Richardson estimate; with a tiny depth cap
        # the tolerance is unreachable
        kink = parse("abs(x-0.3333333)")
        with pytest.raises(ToleranceNotReachedError) as err:
            integrate(kink, 0.0, 1.0, tol=1e-15, max_depth=5)
        exact = mp_integrate(kink, 0.0, 1.0)
        assert abs(err.value.value - exact) < 1e-3
        assert err.value.err_est > 1e-15

    def test_scalar_only_callable_is_wrapped(self):
        value, _ = integrate(lambda x: math.exp(x), 0.0, 1.0, tol=1e-10)
        assert value == pytest.approx(math.e - 1.0, abs=1e-10)

    def test_non_finite_integrand_rejected(self):
        with pytest.raises(InvalidIntervalError):
            integrate(lambda x: np.asarray(x) ** -1.0, 0.0, 1.0, tol=1e-9)

    def test_deterministic(self):
        e = parse("exp(x)*sin(3*x)")
        assert integrate(e, 0.0, 2.0, 1e-11) == integrate(e, 0.0, 2.0, 1e-11)


class TestSimpsonDefect:
    def test_cubic_exactness(self):
        d = simpson_defect(parse("x^3"), 0.0, 1.0, 1.0)
        assert abs(d.value) < 1e-12

    def test_random_cubics_exact(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            c = rng.uniform(-10, 10, size=4)
            a = float(rng.uniform(0.0, 1.0))
            b = float(rng.uniform(a + 0.1, 2.0))
            text = (
                f"({float(c[0])!r})+({float(c[1])!r})*x"
                f"+({float(c[2])!r})*x^2+({float(c[3])!r})*x^3"
            )
            d = simpson_defect(parse(text), a, b, 1.0, tol=1e-13)
            assert abs(d.value) < 1e-12

    def test_quartic_fixture(self):
        d = simpson_defect(parse("x^4"), 0.0, 1.0, 1.0)
        assert d.value == pytest.approx(-1.0 / 120.0, abs=1e-10)
        assert d.abs_value == abs(d.value)
        assert d.interval == (0.0, 1.0)
        assert d.midpoint_used == 0.5

    def test_regression_fixture_both_variants_m_half(self):
        # frozen from exact antiderivative arithmetic:
        # printed midpoint 1/2 -> -19/960, corrected midpoint 1/4 -> -1/3840
        printed = simpson_defect(parse("x^4"), 0.0, 1.0, 0.5,
                                 variant=MidpointVariant.PRINTED)
        corrected = simpson_defect(parse("x^4"), 0.0, 1.0, 0.5,
                                   variant=MidpointVariant.CORRECTED)
        assert printed.value == pytest.approx(-19.0 / 960.0, abs=2e-11)
        assert corrected.value == pytest.approx(-1.0 / 3840.0, abs=2e-11)
        assert printed.value != corrected.value
        assert printed.midpoint_used == 0.5
        assert corrected.midpoint_used == 0.25

    def test_variants_coincide_at_m_one(self):
        left = simpson_defect(parse("exp(x)"), 0.0, 1.0, 1.0,
                              variant=MidpointVariant.PRINTED)
        right = simpson_defect(parse("exp(x)"), 0.0, 1.0, 1.0,
                               variant=MidpointVariant.CORRECTED)
        assert left.value == right.value

    def test_linearity_in_f(self):
        rng = np.random.default_rng(3)
        f, g = parse("exp(x)"), parse("sin(x)")
        for _ in range(10):
            alpha = float(rng.uniform(-5, 5))
            beta = float(rng.uniform(-5, 5))
            combo = Binary(
                "add",
                Binary("mul", Const(alpha), f),
                Binary("mul", Const(beta), g),
            )
            d_combo = simpson_defect(combo, 0.0, 2.0, 1.0).value
            d_f = simpson_defect(f, 0.0, 2.0, 1.0).value
            d_g = simpson_defect(g, 0.0, 2.0, 1.0).value
            assert d_combo == pytest.approx(
                alpha * d_f + beta * d_g, abs=1e-10
            )

    def test_invalid_interval(self):
        with pytest.raises(InvalidIntervalError):
            simpson_defect(parse("x"), 0.5, 2.0, 0.25)  # a == m*b
        with pytest.raises(InvalidIntervalError):
            simpson_defect(parse("x"), 1.0, 1.0, 1.0)

    def test_m_range_validation(self):
        with pytest.raises(ValueError):
            simpson_defect(parse("x"), 0.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            simpson_defect(parse("x"), 0.0, 1.0, 1.5)


class TestSupAbsDerivative:
    def test_constant_fourth_derivative(self):
        assert sup_abs_derivative(parse("x^4"), 4, 0.0, 1.0) == pytest.approx(
            24.0, rel=1e-12
        )

    def test_sine_interior_maximum(self):
        got = sup_abs_derivative(parse("sin(x)"), 4, 0.0, math.pi)
        assert got == pytest.approx(1.0, abs=1e-9)
        assert got <= 1.0 + 1e-12

    def test_monotone_closed_form(self):
        got = sup_abs_derivative(parse("exp(2*x)"), 3, 0.0, 1.0)
        assert got == pytest.approx(8.0 * math.e**2, rel=1e-9)

    def test_never_below_grid_maximum(self):
        e = parse("sin(5*x)*exp(x)")
        got = sup_abs_derivative(e, 3, 0.0, 2.0)
        xs = np.linspace(0.0, 2.0, 4097)
        from simpsonlab.jets import eval_jet

        grid = float(np.max(np.abs(eval_jet(e, xs, order=3).derivative(3))))
        assert got >= grid

    def test_dominates_random_samples(self):
        rng = np.random.default_rng(11)
        e = parse("exp(x)*sin(3*x)+x^4")
        lo, hi = 0.0, 2.0
        for order in (3, 4):
            sup = sup_abs_derivative(e, order, lo, hi)
            from simpsonlab.jets import eval_jet

            for _ in range(100):
                x = float(rng.uniform(lo, hi))
                assert sup + 1e-12 >= abs(
                    float(eval_jet(e, x, order=order).derivative(order))
                )

    def test_order_validation(self):
        with pytest.raises(ValueError):
            sup_abs_derivative(parse("x"), 2, 0.0, 1.0)
