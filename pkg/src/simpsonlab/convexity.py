"""Grid certification of m-convexity, s-convexity and P-functions.

A certificate here is evidence, not proof: `certified` means no triple
on the (x, y, t) grid violates the defining inequality by more than the
tolerance, `refuted` ships a concrete witness triple that re-violates it
on recomputation. Grids are deterministic, so verdicts and witnesses are
reproducible run to run.

Class conventions:

* m-convex (domain [0, b_star]):  g(t*x + m*(1-t)*y) <= t*g(x) + m*(1-t)*g(y)
* s-convex, second sense ([a,b]): g(t*x + (1-t)*y) <= t^s g(x) + (1-t)^s g(y)
* P-function ([a,b], g >= 0):     g(t*x + (1-t)*y) <= g(x) + g(y)

Note the m < 1 cases force g(0) <= 0 (take t = 0, y = 0), so a
nonnegative g can only be m-convex for m < 1 when g(0) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .expr import parse
from .jets import eval_jet

DEFAULT_GRID_N = 64
DEFAULT_CERT_TOL = 1e-9
MIN_GRID_N = 8


@dataclass(frozen=True)
class ConvexityCertificate:
    kind: str                 # "m_convex" | "s_convex" | "p_function"
    param: Optional[float]    # m, s, or None for P-functions
    verdict: str              # "certified" | "refuted"
    witness: Optional[tuple]  # (x, y, t) with the largest violation
    violation: float          # size of the worst violation found
    grid_n: int
    tol: float

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    @property
    def class_tag(self) -> str:
        if self.param is None:
            return self.kind
        return f"{self.kind}({self.param:g})"


class ThirdDerivativePower:
    """Evaluable g(x) = |f'''(x)|**q built from an expression.

    abs and the power are applied to the jet's third coefficient as plain
    reals, so abs never needs differentiating.
    """

    def __init__(self, e, q: float = 1.0):
        if isinstance(e, str):
            e = parse(e)
        if not q >= 1.0:
            raise ValueError(f"power must be >= 1, got {q!r}")
        self.expr = e
        self.q = float(q)

    def __call__(self, x):
        third = eval_jet(self.expr, x, order=3).derivative(3)
        return np.abs(third) ** self.q


def build_g(e, q: float = 1.0) -> ThirdDerivativePower:
    """x -> |f'''(x)|**q for the expression e."""
    return ThirdDerivativePower(e, q)


def _validate_grid(grid_n: int):
    if grid_n < MIN_GRID_N:
        raise ValueError(f"grid_n must be at least {MIN_GRID_N}, got {grid_n!r}")


def _scan_combination(g, xs: np.ndarray, ts: np.ndarray, weight_x, weight_y,
                      point_fn):
    """Worst violation of g(point(t,x,y)) <= wx(t) g(x) + wy(t) g(y).

    Returns (violation, witness). The scan is vectorized over (t, x, y)
    blocks in ascending t order and keeps the first strictly-largest
    violation, so the witness is deterministic.
    """
    gx = np.asarray(g(xs), dtype=float)
    nx = xs.size
    worst = -np.inf
    witness = None
    # bound the (t, x, y) block to ~2e6 points to cap memory
    block = max(1, 2_000_000 // (nx * nx))
    for start in range(0, ts.size, block):
        tb = ts[start:start + block][:, None, None]
        points = point_fn(tb, xs[None, :, None], xs[None, None, :])
        lhs = np.asarray(g(points), dtype=float)
        viol = lhs - weight_x(tb) * gx[None, :, None] - weight_y(tb) * gx[None, None, :]
        idx = int(np.argmax(viol))
        value = float(viol.flat[idx])
        if value > worst:
            worst = value
            k, i, j = np.unravel_index(idx, viol.shape)
            witness = (float(xs[i]), float(xs[j]), float(tb[k, 0, 0]))
    return worst, witness


def _certificate(kind, param, worst, witness, grid_n, tol):
    if worst > tol:
        return ConvexityCertificate(kind, param, "refuted", witness, worst,
                                    grid_n, tol)
    return ConvexityCertificate(kind, param, "certified", None,
                                max(worst, 0.0), grid_n, tol)


def certify_m_convex(g, b_star: float, m: float,
                     grid_n: int = DEFAULT_GRID_N,
                     tol: float = DEFAULT_CERT_TOL) -> ConvexityCertificate:
    """Check Toader m-convexity of g on [0, b_star] over the full grid."""
    _validate_grid(grid_n)
    if not b_star > 0.0:
        raise ValueError(f"b_star must be positive, got {b_star!r}")
    if not 0.0 < m <= 1.0:
        raise ValueError(f"m must lie in (0, 1], got {m!r}")
    xs = np.linspace(0.0, b_star, grid_n + 1)
    ts = np.linspace(0.0, 1.0, grid_n + 1)
    worst, witness = _scan_combination(
        g, xs, ts,
        weight_x=lambda t: t,
        weight_y=lambda t: m * (1.0 - t),
        point_fn=lambda t, x, y: t * x + m * (1.0 - t) * y,
    )
    return _certificate("m_convex", m, worst, witness, grid_n, tol)


def certify_s_convex(g, a: float, b: float, s: float,
                     grid_n: int = DEFAULT_GRID_N,
                     tol: float = DEFAULT_CERT_TOL) -> ConvexityCertificate:
    """Check s-convexity in the second sense of g on [a, b]."""
    _validate_grid(grid_n)
    if not a < b:
        raise ValueError(f"need a < b, got [{a!r}, {b!r}]")
    if not 0.0 < s <= 1.0:
        raise ValueError(f"s must lie in (0, 1], got {s!r}")
    xs = np.linspace(a, b, grid_n + 1)
    ts = np.linspace(0.0, 1.0, grid_n + 1)
    worst, witness = _scan_combination(
        g, xs, ts,
        weight_x=lambda t: t**s,
        weight_y=lambda t: (1.0 - t) ** s,
        point_fn=lambda t, x, y: t * x + (1.0 - t) * y,
    )
    return _certificate("s_convex", s, worst, witness, grid_n, tol)


def certify_p_function(g, a: float, b: float,
                       grid_n: int = DEFAULT_GRID_N,
                       tol: float = DEFAULT_CERT_TOL) -> ConvexityCertificate:
    """Check the P-function property of g on [a, b]; g must be >= 0."""
    _validate_grid(grid_n)
    if not a < b:
        raise ValueError(f"need a < b, got [{a!r}, {b!r}]")
    xs = np.linspace(a, b, grid_n + 1)
    gx = np.asarray(g(xs), dtype=float)
    if np.any(gx < -tol):
        raise DomainError(
            "P-function certification requires g >= 0 on the grid; "
            f"min g = {float(np.min(gx)):.3e}"
        )
    ts = np.linspace(0.0, 1.0, grid_n + 1)
    worst, witness = _scan_combination(
        g, xs, ts,
        weight_x=lambda t: 1.0,
        weight_y=lambda t: 1.0,
        point_fn=lambda t, x, y: t * x + (1.0 - t) * y,
    )
    return _certificate("p_function", None, worst, witness, grid_n, tol)


def max_m(g, b_star: float, grid_n: int = DEFAULT_GRID_N,
          m_step: float = 0.1, tol: float = DEFAULT_CERT_TOL) -> float:
    """Largest m in {m_step, 2*m_step, ..., 1} whose certificate passes.

    Scans the grid from 1 downwards and returns the first certified m,
    or 0.0 when every tested m is refuted. Note the m = 1 check is plain
    convexity, which carries no g(0) <= 0 constraint, so e.g. x^2 + 1
    returns 1.0 even though it fails for every m < 1.
    """
    if not 0.0 < m_step <= 0.5:
        raise ValueError(f"m_step must lie in (0, 0.5], got {m_step!r}")
    steps = int(math.ceil(1.0 / m_step - 1e-12))
    ms = sorted({min(1.0, round(k * m_step, 12)) for k in range(1, steps + 1)} | {1.0})
    for m in reversed(ms):
        if certify_m_convex(g, b_star, m, grid_n=grid_n, tol=tol).certified:
            return m
    return 0.0
