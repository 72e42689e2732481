"""Truncated Taylor-jet arithmetic up to fourth order.

A Jet4 stores the Taylor coefficients (c0..c4) of a function at an
expansion point, so the k-th derivative is k! * ck. Propagating jets
through the expression tree gives f, f', f'', f''', f'''' in one pass
without symbolic differentiation; coefficients may be floats or ndarrays,
in which case everything is evaluated elementwise.

The recurrences are the standard truncated power-series rules: Cauchy
products for *, the quotient recurrence for /, and the well-known ODE
based recurrences for exp/log/sqrt/sin/cos and real powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonSmoothPointError
from .expr import Binary, Const, Expr, Pow, Unary, Var

ORDER = 4  # coefficients c0..c4 are always carried

_FACTORIALS = (1.0, 1.0, 2.0, 6.0, 24.0)


@dataclass(frozen=True)
class Jet4:
    """Taylor coefficients at the expansion point; derivative k is k!*ck."""

    c0: object
    c1: object
    c2: object
    c3: object
    c4: object

    @property
    def coeffs(self):
        return (self.c0, self.c1, self.c2, self.c3, self.c4)

    def derivative(self, k: int):
        """k-th derivative value, k in 0..4."""
        return _FACTORIALS[k] * self.coeffs[k]

    def derivatives(self):
        return tuple(_FACTORIALS[k] * c for k, c in enumerate(self.coeffs))


def _jet(c):
    return Jet4(*c)


def constant_jet(value, like=None) -> Jet4:
    zero = np.zeros_like(like) if isinstance(like, np.ndarray) else 0.0
    if isinstance(like, np.ndarray):
        return Jet4(np.full_like(like, value, dtype=float), zero, zero, zero, zero)
    return Jet4(float(value), 0.0, 0.0, 0.0, 0.0)


def variable_jet(x0) -> Jet4:
    if isinstance(x0, np.ndarray):
        x0 = x0.astype(float, copy=False)
        one = np.ones_like(x0)
        zero = np.zeros_like(x0)
        return Jet4(x0, one, zero, zero, zero)
    return Jet4(float(x0), 1.0, 0.0, 0.0, 0.0)


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------


def jet_add(u: Jet4, v: Jet4) -> Jet4:
    return _jet(tuple(a + b for a, b in zip(u.coeffs, v.coeffs)))


def jet_sub(u: Jet4, v: Jet4) -> Jet4:
    return _jet(tuple(a - b for a, b in zip(u.coeffs, v.coeffs)))


def jet_neg(u: Jet4) -> Jet4:
    return _jet(tuple(-a for a in u.coeffs))


def jet_scale(alpha: float, u: Jet4) -> Jet4:
    return _jet(tuple(alpha * a for a in u.coeffs))


def jet_mul(u: Jet4, v: Jet4) -> Jet4:
    a, b = u.coeffs, v.coeffs
    return _jet(
        tuple(sum(a[j] * b[k - j] for j in range(k + 1)) for k in range(ORDER + 1))
    )


def jet_div(u: Jet4, v: Jet4) -> Jet4:
    a, b = u.coeffs, v.coeffs
    if np.any(np.asarray(b[0]) == 0.0):
        raise DomainError("division by zero in jet evaluation")
    w = [a[0] / b[0]]
    for k in range(1, ORDER + 1):
        acc = a[k]
        for j in range(1, k + 1):
            acc = acc - b[j] * w[k - j]
        w.append(acc / b[0])
    return _jet(tuple(w))


def jet_exp(u: Jet4) -> Jet4:
    a = u.coeffs
    w = [np.exp(a[0])]
    for k in range(1, ORDER + 1):
        acc = 0.0
        for j in range(1, k + 1):
            acc = acc + j * a[j] * w[k - j]
        w.append(acc / k)
    return _jet(tuple(w))


def jet_log(u: Jet4) -> Jet4:
    a = u.coeffs
    if np.any(np.asarray(a[0]) <= 0.0):
        raise DomainError("log of non-positive argument in jet evaluation")
    w = [np.log(a[0])]
    for k in range(1, ORDER + 1):
        acc = k * a[k]
        for j in range(1, k):
            acc = acc - j * w[j] * a[k - j]
        w.append(acc / (k * a[0]))
    return _jet(tuple(w))


def jet_sqrt(u: Jet4, order: int = ORDER) -> Jet4:
    a = u.coeffs
    if np.any(np.asarray(a[0]) < 0.0):
        raise DomainError("sqrt of negative argument in jet evaluation")
    if np.any(np.asarray(a[0]) == 0.0):
        if order == 0:
            return _jet((np.sqrt(a[0]),) + tuple(0.0 * c for c in a[1:]))
        raise DomainError("sqrt at 0 has unbounded derivatives")
    w = [np.sqrt(a[0])]
    for k in range(1, ORDER + 1):
        acc = a[k]
        for j in range(1, k):
            acc = acc - w[j] * w[k - j]
        w.append(acc / (2.0 * w[0]))
    return _jet(tuple(w))


def jet_sin_cos(u: Jet4):
    a = u.coeffs
    s = [np.sin(a[0])]
    c = [np.cos(a[0])]
    for k in range(1, ORDER + 1):
        sk = 0.0
        ck = 0.0
        for j in range(1, k + 1):
            sk = sk + j * a[j] * c[k - j]
            ck = ck - j * a[j] * s[k - j]
        s.append(sk / k)
        c.append(ck / k)
    return _jet(tuple(s)), _jet(tuple(c))


def jet_abs(u: Jet4, order: int) -> Jet4:
    """abs of a jet; differentiable only away from a zero of the value."""
    c0 = np.asarray(u.c0)
    if order >= 1 and np.any(c0 == 0.0):
        raise NonSmoothPointError("abs is not differentiable where its argument is 0")
    if order == 0:
        return _jet((np.abs(u.c0),) + tuple(0.0 * c for c in u.coeffs[1:]))
    sign = np.sign(u.c0)
    return _jet(tuple(sign * c for c in u.coeffs))


def jet_pow(u: Jet4, exponent: float, order: int = ORDER) -> Jet4:
    """u**alpha for a constant real alpha.

    Nonnegative integer exponents use repeated multiplication (exact for
    polynomial data); negative integers go through the quotient rule;
    non-integer exponents use the u*w' = alpha*w*u' recurrence and
    require a strictly positive value.
    """
    a = u.coeffs
    if float(exponent).is_integer():
        n = int(exponent)
        if n == 0:
            return constant_jet(1.0, like=a[0] if isinstance(a[0], np.ndarray) else None)
        if n < 0:
            if np.any(np.asarray(a[0]) == 0.0):
                raise DomainError("zero raised to a negative power")
            one = constant_jet(1.0, like=a[0] if isinstance(a[0], np.ndarray) else None)
            return jet_div(one, jet_pow(u, -n))
        w = u
        for _ in range(n - 1):
            w = jet_mul(w, u)
        return w
    if order == 0:
        if np.any(np.asarray(a[0]) < 0.0):
            raise DomainError("negative base with non-integer exponent")
        return _jet((a[0] ** exponent,) + tuple(0.0 * c for c in a[1:]))
    if np.any(np.asarray(a[0]) <= 0.0):
        raise DomainError(
            "non-integer power needs a strictly positive base for derivatives"
        )
    w = [a[0] ** exponent]
    alpha = float(exponent)
    for k in range(1, ORDER + 1):
        acc = 0.0
        for j in range(0, k):
            acc = acc + alpha * (k - j) * a[k - j] * w[j]
        for j in range(1, k):
            acc = acc - (k - j) * a[j] * w[k - j]
        w.append(acc / (k * a[0]))
    return _jet(tuple(w))


# ---------------------------------------------------------------------------
# evaluation of expression trees
# ---------------------------------------------------------------------------


def eval_jet(e: Expr, x0, order: int = 4) -> Jet4:
    """Taylor coefficients of e at x0; x0 may be a float or an ndarray.

    `order` states how many derivatives the caller needs (0..4). It gates
    the non-smooth cases: abs at a zero argument and fractional powers at
    0 are fine for order 0 but raise for order >= 1.
    """
    if not 0 <= order <= 4:
        raise ValueError(f"order must be in 0..4, got {order}")
    return _eval(e, variable_jet(x0), order)


def _eval(e: Expr, x: Jet4, order: int) -> Jet4:
    if isinstance(e, Const):
        like = x.c0 if isinstance(x.c0, np.ndarray) else None
        return constant_jet(e.value, like=like)
    if isinstance(e, Var):
        return x
    if isinstance(e, Unary):
        u = _eval(e.arg, x, order)
        if e.op == "neg":
            return jet_neg(u)
        if e.op == "abs":
            return jet_abs(u, order)
        if e.op == "sin":
            return jet_sin_cos(u)[0]
        if e.op == "cos":
            return jet_sin_cos(u)[1]
        if e.op == "exp":
            return jet_exp(u)
        if e.op == "log":
            return jet_log(u)
        if e.op == "sqrt":
            return jet_sqrt(u, order)
        raise ValueError(f"unknown unary op {e.op!r}")
    if isinstance(e, Binary):
        u = _eval(e.left, x, order)
        v = _eval(e.right, x, order)
        if e.op == "add":
            return jet_add(u, v)
        if e.op == "sub":
            return jet_sub(u, v)
        if e.op == "mul":
            return jet_mul(u, v)
        if e.op == "div":
            return jet_div(u, v)
        raise ValueError(f"unknown binary op {e.op!r}")
    if isinstance(e, Pow):
        return jet_pow(_eval(e.base, x, order), e.exponent, order)
    raise TypeError(f"not an expression node: {e!r}")


def derivative(e: Expr, x0, k: int):
    """Convenience wrapper: k-th derivative of e at x0 (k in 0..4)."""
    return eval_jet(e, x0, order=k).derivative(k)
