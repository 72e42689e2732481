"""Independent numerical oracles used by the test suite.

Everything here deliberately avoids the library's own evaluation code:
expressions are re-walked with mpmath arithmetic at 50 significant
digits, so finite-difference stencils and reference integrals are exact
to far beyond float64 and can referee the jet and quadrature paths.
"""

import mpmath as mp

from simpsonlab.expr import Binary, Const, Pow, Unary, Var

mp.mp.dps = 50

_MP_UNARY = {
    "neg": lambda v: -v,
    "abs": abs,
    "sin": mp.sin,
    "cos": mp.cos,
    "exp": mp.exp,
    "log": mp.log,
    "sqrt": mp.sqrt,
}


def mp_eval(e, x):
    """Evaluate an expression tree in mpmath arithmetic."""
    if isinstance(e, Const):
        return mp.mpf(e.value)
    if isinstance(e, Var):
        return mp.mpf(x)
    if isinstance(e, Unary):
        return _MP_UNARY[e.op](mp_eval(e.arg, x))
    if isinstance(e, Binary):
        lv, rv = mp_eval(e.left, x), mp_eval(e.right, x)
        if e.op == "add":
            return lv + rv
        if e.op == "sub":
            return lv - rv
        if e.op == "mul":
            return lv * rv
        if e.op == "div":
            return lv / rv
        raise ValueError(e.op)
    if isinstance(e, Pow):
        base = mp_eval(e.base, x)
        k = e.exponent
        if float(k).is_integer():
            return base ** int(k)
        return base ** mp.mpf(k)
    raise TypeError(e)


# 5-point central stencils, orders 1..3 (orders 1,2 are 4th-order accurate,
# order 3 is 2nd-order accurate: truncation ~ f^(5) h^2 / 4)
_STENCILS = {
    1: ((1, -8, 0, 8, -1), lambda h: 12 * h),
    2: ((-1, 16, -30, 16, -1), lambda h: 12 * h**2),
    3: ((-1, 2, 0, -2, 1), lambda h: 2 * h**3),
}


def fd_derivative(e, x, order, h=1e-4):
    """Finite-difference derivative of the given order at x, in mpmath."""
    coeffs, denom = _STENCILS[order]
    hh = mp.mpf(h)
    xx = mp.mpf(x)
    acc = mp.mpf(0)
    for k, c in zip(range(-2, 3), coeffs):
        if c:
            acc += c * mp_eval(e, xx + k * hh)
    return float(acc / denom(hh))


def mp_integrate(e, lo, hi):
    """Reference integral of an expression via mpmath quadrature."""
    return float(mp.quad(lambda t: mp_eval(e, t), [mp.mpf(lo), mp.mpf(hi)]))


def mp_integrate_fn(fn, lo, hi, split=None):
    """Reference integral of an mpmath-callable, optionally split."""
    points = [mp.mpf(lo)]
    if split is not None:
        points.extend(mp.mpf(p) for p in split)
    points.append(mp.mpf(hi))
    return float(mp.quad(fn, points))
