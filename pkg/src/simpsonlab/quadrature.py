"""High-accuracy reference integration and the Simpson defect.

The oracle is an adaptive-bisection Simpson rule: each panel is compared
against its two halves, the Richardson difference (S2 - S1)/15 serves as
the embedded error estimate, and panels that miss their share of the
tolerance budget are split. All pending panel midpoints are evaluated in
one vectorized call per refinement sweep, which keeps Python overhead off
the hot path. A hard recursion cap bounds the work; hitting it raises
ToleranceNotReachedError carrying the best value and its estimate.

The defect is the quantity every bound in this package controls:

    defect = integral(f, a..m*b) - (m*b - a)/6 * [f(a) + 4 f(mid) + f(m*b)]

with two midpoint conventions for m < 1 (see MidpointVariant); they
coincide at m = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidIntervalError, ToleranceNotReachedError
from .expr import as_function
from .jets import eval_jet

DEFAULT_TOL = 1e-11
DEFAULT_MAX_DEPTH = 60

_SUP_GRID_POINTS = 4097
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class MidpointVariant(str, Enum):
    """Which midpoint the three-point rule samples when m < 1.

    PRINTED uses f((a+b)/2); CORRECTED uses f((a+m*b)/2), the form that
    the change-of-variables derivation of the kernel identity produces.
    Both coincide at m = 1. The package adjudicates between them
    numerically (see simpsonlab.kernel) instead of assuming either.
    """

    PRINTED = "printed"
    CORRECTED = "corrected"


@dataclass(frozen=True)
class Defect:
    """Signed Simpson defect plus the bookkeeping needed to re-check it."""

    value: float
    abs_value: float
    interval: tuple
    midpoint_used: float
    oracle_error_estimate: float


def _vectorized(f):
    """Return a callable mapping ndarray -> ndarray, wrapping scalar f."""
    fn = as_function(f)
    probe = np.array([0.0, 1.0])
    try:
        out = fn(probe)
        if np.shape(out) == probe.shape:
            return fn
    except Exception:
        pass
    return np.vectorize(fn, otypes=[float])


def integrate(f, lo: float, hi: float, tol: float = DEFAULT_TOL,
              max_depth: int = DEFAULT_MAX_DEPTH):
    """Integrate f over [lo, hi] adaptively.

    Returns (value, err_est) with |value - true| <= err_est <= tol on
    success. Raises ToleranceNotReachedError when the recursion cap is hit
    before the local error criteria are met.
    """
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        raise InvalidIntervalError(f"need lo < hi, got [{lo!r}, {hi!r}]")
    if not tol > 0.0:
        raise ValueError(f"tolerance must be positive, got {tol!r}")
    fn = _vectorized(f)

    a = np.array([lo])
    h = np.array([hi - lo])
    v = np.asarray(fn(np.array([lo, lo + 0.5 * (hi - lo), hi])), dtype=float)
    _require_finite(v)
    fa, fm, fb = v[0:1].copy(), v[1:2].copy(), v[2:3].copy()
    s = h / 6.0 * (fa + 4.0 * fm + fb)
    tol_k = np.array([tol])
    depth = np.array([0])

    total = 0.0
    err_total = 0.0
    abs_scale = 0.0
    cap_hit = False

    while a.size:
        quarter = 0.25 * h
        xl = a + quarter
        xr = a + 3.0 * quarter
        fv = np.asarray(fn(np.concatenate([xl, xr])), dtype=float)
        _require_finite(fv)
        fml, fmr = fv[: a.size], fv[a.size:]
        half = 0.5 * h
        s_left = half / 6.0 * (fa + 4.0 * fml + fm)
        s_right = half / 6.0 * (fm + 4.0 * fmr + fb)
        s2 = s_left + s_right
        err = (s2 - s) / 15.0

        ok = np.abs(err) <= tol_k
        # a panel narrower than the local float grid cannot be refined
        collapsed = (xl <= a) | (xr >= a + h)
        capped = (depth >= max_depth) & ~ok & ~collapsed
        if np.any(capped):
            cap_hit = True
        done = ok | collapsed | capped

        if np.any(done):
            total += float(np.sum(s2[done] + err[done]))
            err_total += float(np.sum(np.abs(err[done])))
            abs_scale += float(np.sum(np.abs(s2[done])))

        keep = ~done
        if not np.any(keep):
            break
        right_a = (a + half)[keep]
        new_fa = np.concatenate([fa[keep], fm[keep]])
        new_fm = np.concatenate([fml[keep], fmr[keep]])
        new_fb = np.concatenate([fm[keep], fb[keep]])
        a = np.concatenate([a[keep], right_a])
        h = np.concatenate([half[keep], half[keep]])
        s = np.concatenate([s_left[keep], s_right[keep]])
        new_tol = 0.5 * tol_k[keep]
        tol_k = np.concatenate([new_tol, new_tol])
        new_depth = depth[keep] + 1
        depth = np.concatenate([new_depth, new_depth])
        fa, fm, fb = new_fa, new_fm, new_fb

    err_total += 5e-16 * abs_scale  # rounding floor of the panel sums
    if cap_hit:
        raise ToleranceNotReachedError(total, err_total)
    return total, err_total


def _require_finite(values: np.ndarray):
    if not np.all(np.isfinite(values)):
        raise InvalidIntervalError("integrand is not finite on the interval")


def simpson_midpoint(a: float, b: float, m: float,
                     variant: MidpointVariant) -> float:
    if variant == MidpointVariant.PRINTED:
        return 0.5 * (a + b)
    if variant == MidpointVariant.CORRECTED:
        return 0.5 * (a + m * b)
    raise ValueError(f"unresolved midpoint variant {variant!r}")


def simpson_defect(f, a: float, b: float, m: float = 1.0,
                   variant: MidpointVariant = MidpointVariant.CORRECTED,
                   tol: float = DEFAULT_TOL) -> Defect:
    """Signed defect of the three-point rule over [a, m*b].

    For m = 1 this is the classical Simpson defect on [a, b] and both
    midpoint variants coincide.
    """
    if not 0.0 < m <= 1.0:
        raise ValueError(f"m must lie in (0, 1], got {m!r}")
    variant = MidpointVariant(variant)
    hi = m * b
    if not a < hi:
        raise InvalidIntervalError(
            f"need a < m*b, got a={a!r}, m*b={hi!r} (m={m!r}, b={b!r})"
        )
    fn = as_function(f)
    mid = simpson_midpoint(a, b, m, variant)
    integral, err = integrate(fn, a, hi, tol)
    three_point = (hi - a) / 6.0 * (float(fn(a)) + 4.0 * float(fn(mid)) + float(fn(hi)))
    value = integral - three_point
    return Defect(
        value=value,
        abs_value=abs(value),
        interval=(a, hi),
        midpoint_used=mid,
        oracle_error_estimate=err,
    )


def sup_abs_derivative(e, order: int, lo: float, hi: float) -> float:
    """Estimated sup of |f^(order)| on [lo, hi], order 3 or 4.

    Deterministic: a 4097-point uniform grid scan followed by
    golden-section refinement around the three best grid points. The
    result is never below the plain grid maximum.
    """
    if order not in (3, 4):
        raise ValueError(f"order must be 3 or 4, got {order!r}")
    if not lo < hi:
        raise InvalidIntervalError(f"need lo < hi, got [{lo!r}, {hi!r}]")
    xs = np.linspace(lo, hi, _SUP_GRID_POINTS)
    values = np.abs(eval_jet(e, xs, order=order).derivative(order))
    grid_max = float(np.max(values))

    def target(x: float) -> float:
        return abs(float(eval_jet(e, x, order=order).derivative(order)))

    spacing = (hi - lo) / (_SUP_GRID_POINTS - 1)
    best = grid_max
    top = np.argsort(-values, kind="stable")[:3]
    for idx in sorted(int(i) for i in top):
        a = max(lo, xs[idx] - spacing)
        b = min(hi, xs[idx] + spacing)
        best = max(best, _golden_section_max(target, a, b))
    return max(best, grid_max)


def _golden_section_max(fn, a: float, b: float) -> float:
    """Golden-section maximisation with a fixed deterministic schedule."""
    if not a < b:
        return fn(a)
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(80):
        if b - a < 1e-14 * max(1.0, abs(a), abs(b)):
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = fn(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = fn(x1)
    return max(fn(a), f1, f2, fn(b))
