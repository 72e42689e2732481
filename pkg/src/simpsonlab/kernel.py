"""The piecewise cubic Simpson kernel, its moments, and the kernel identity.

The kernel

    p(t) = t^2 (t - 1/2) / 6          on [0, 1/2]
    p(t) = (t-1)^2 (t - 1/2) / 6      on (1/2, 1]

is antisymmetric about 1/2 and has zero mean. Integrated against the
third derivative it reproduces the Simpson defect:

    defect(a, b, m) = (m*b - a)^4 * integral_0^1 p(t) f'''(t*a + m*(1-t)*b) dt

provided the three-point rule samples the CORRECTED midpoint (a + m*b)/2.
Whether the PRINTED midpoint (a+b)/2 also satisfies the identity for
m < 1 is not assumed anywhere: `adjudicate_variant` settles it against
the quadrature oracle, and the shipped fixture records the outcome.

Moment constants are evaluated through the Beta function,

    integral_0^(1/2) (t^2 (1/2 - t))^p dt
        = Gamma(2p+1) Gamma(p+1) / (2^(3p+1) Gamma(3p+2)),

exactly (rational arithmetic) for integer p and via log-Gamma otherwise.
Some printed statements of the Hoelder-route bound carry Gamma(3p+1) in
the denominator instead; GammaMode.AS_PRINTED reproduces that literal
constant, GammaMode.VALIDATED uses the Beta-derivation value that the
numerical cross-checks confirm.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import OutOfRangeError, SimpsonLabError
from .expr import Expr, as_function, parse
from .jets import eval_jet
from .quadrature import DEFAULT_TOL, MidpointVariant, integrate, simpson_defect

MAX_MOMENT_EXPONENT = 50.0

LEMMA_RESIDUAL_THRESHOLD = 1e-9

# small self-contained corpus used to adjudicate the midpoint variant
ADJUDICATION_CORPUS = (("x^4", 0.0, 1.0), ("exp(x)", 0.0, 1.0))
ADJUDICATION_M_VALUES = (0.25, 0.5, 0.75)

_ADJUDICATION_FIXTURE = "lemma_adjudication.json"


class GammaMode(str, Enum):
    VALIDATED = "validated"      # Gamma(3p+2) denominator (Beta derivation)
    AS_PRINTED = "as_printed"    # Gamma(3p+1) literal


def kernel(t):
    """Kernel value at t in [0, 1]; accepts floats or ndarrays."""
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise OutOfRangeError(f"kernel argument must lie in [0, 1], got {t!r}")
    # both branches vanish at t = 1/2, so the boundary assignment is moot
    out = np.where(
        arr <= 0.5,
        arr * arr * (arr - 0.5) / 6.0,
        (arr - 1.0) * (arr - 1.0) * (arr - 0.5) / 6.0,
    )
    if np.ndim(t) == 0:
        return float(out)
    return out


def log_gamma(x: float) -> float:
    """log Gamma(x); contract: 1e-13 relative accuracy on [1, 200]."""
    return math.lgamma(x)


def kernel_moment(p_exp: float) -> float:
    """integral_0^(1/2) (t^2 (1/2 - t))^p dt via the Beta closed form.

    Exact rational arithmetic for integer p (kernel_moment(1) == 1/192
    bit for bit); log-Gamma otherwise. Rejects p < 1 and p > 50.
    """
    p = float(p_exp)
    if not p >= 1.0:
        raise ValueError(f"moment exponent must be >= 1, got {p_exp!r}")
    if p > MAX_MOMENT_EXPONENT:
        raise ValueError(f"moment exponent {p_exp!r} too large (max 50)")
    if p.is_integer():
        n = int(p)
        return float(
            Fraction(
                math.factorial(2 * n) * math.factorial(n),
                2 ** (3 * n + 1) * math.factorial(3 * n + 1),
            )
        )
    log_val = (
        log_gamma(2.0 * p + 1.0)
        + log_gamma(p + 1.0)
        - (3.0 * p + 1.0) * math.log(2.0)
        - log_gamma(3.0 * p + 2.0)
    )
    return math.exp(log_val)


def gamma_ratio(p: float, mode: GammaMode = GammaMode.VALIDATED) -> float:
    """Gamma(2p+1) Gamma(p+1) / Gamma(3p+2)  (or /Gamma(3p+1) as printed)."""
    shift = 2.0 if GammaMode(mode) == GammaMode.VALIDATED else 1.0
    return math.exp(
        log_gamma(2.0 * p + 1.0) + log_gamma(p + 1.0) - log_gamma(3.0 * p + shift)
    )


def holder_kernel_factor(p: float, mode: GammaMode = GammaMode.VALIDATED) -> float:
    """gamma_ratio(p, mode) ** (1/p), computed in log space."""
    if not p > 1.0:
        raise ValueError(f"conjugate exponent p must exceed 1, got {p!r}")
    shift = 2.0 if GammaMode(mode) == GammaMode.VALIDATED else 1.0
    log_ratio = (
        log_gamma(2.0 * p + 1.0) + log_gamma(p + 1.0) - log_gamma(3.0 * p + shift)
    )
    return math.exp(log_ratio / p)


def weighted_moments():
    """(c_t, c_1mt) = (integral t^2(1/2-t) t dt, integral t^2(1/2-t)(1-t) dt).

    Both over [0, 1/2]; the exact values are 3/1920 and 7/1920 and their
    sum is kernel_moment(1) = 10/1920 = 1/192.
    """
    return 3.0 / 1920.0, 7.0 / 1920.0


# ---------------------------------------------------------------------------
# kernel identity verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LemmaResidual:
    """Both sides of the kernel identity and their absolute difference."""

    lhs: float
    rhs: float
    residual: float
    variant: MidpointVariant
    params: tuple  # (a, b, m)


def verify_lemma(e, a: float, b: float, m: float = 1.0,
                 variant: MidpointVariant = MidpointVariant.CORRECTED,
                 tol: float = DEFAULT_TOL) -> LemmaResidual:
    """Compare the defect against the kernel integral of f'''.

    The right-hand side is integrated piecewise over [0, 1/2] and
    [1/2, 1] so the kernel's curvature jump at 1/2 never sits inside a
    quadrature panel.
    """
    if isinstance(e, str):
        e = parse(e)
    variant = MidpointVariant(variant)
    lhs = simpson_defect(e, a, b, m, variant=variant, tol=tol).value

    scale = (m * b - a) ** 4

    def integrand(ts: np.ndarray) -> np.ndarray:
        points = ts * a + m * (1.0 - ts) * b
        third = eval_jet(e, points, order=3).derivative(3)
        return kernel(ts) * third

    piece_tol = tol / (2.0 * max(1.0, scale))
    left, _ = integrate(integrand, 0.0, 0.5, piece_tol)
    right, _ = integrate(integrand, 0.5, 1.0, piece_tol)
    rhs = scale * (left + right)
    return LemmaResidual(
        lhs=lhs,
        rhs=rhs,
        residual=abs(lhs - rhs),
        variant=variant,
        params=(a, b, m),
    )


def adjudicate_variant(tol: float = DEFAULT_TOL,
                       threshold: float = LEMMA_RESIDUAL_THRESHOLD):
    """Decide which midpoint variant satisfies the kernel identity.

    Runs verify_lemma over the adjudication corpus for every m < 1 and
    both variants. Returns (winner, residual table). Raises if neither
    variant passes everywhere, which would mean the identity itself is
    broken.
    """
    table = []
    max_residual = {v: 0.0 for v in MidpointVariant}
    for text, a, b in ADJUDICATION_CORPUS:
        e = parse(text)
        for m in ADJUDICATION_M_VALUES:
            for variant in MidpointVariant:
                res = verify_lemma(e, a, b, m, variant=variant, tol=tol)
                table.append((text, a, b, m, res))
                max_residual[variant] = max(max_residual[variant], res.residual)
    passing = [v for v in MidpointVariant if max_residual[v] < threshold]
    if not passing:
        raise SimpsonLabError(
            "midpoint adjudication failed: no variant satisfies the kernel "
            f"identity below {threshold:g} (residuals: {max_residual!r})"
        )
    if len(passing) == 1:
        return passing[0], table
    # both pass (should not happen for m < 1); prefer the tighter one
    return min(passing, key=lambda v: max_residual[v]), table


@lru_cache(maxsize=1)
def adjudicated_variant() -> MidpointVariant:
    """The midpoint variant that the oracle adjudication selects (cached)."""
    return adjudicate_variant()[0]


def load_adjudication_fixture() -> dict:
    """The committed adjudication record shipped with the package."""
    text = resources.files("simpsonlab.data").joinpath(
        _ADJUDICATION_FIXTURE
    ).read_text(encoding="utf-8")
    return json.loads(text)


def adjudication_record(tol: float = DEFAULT_TOL,
                        threshold: float = LEMMA_RESIDUAL_THRESHOLD) -> dict:
    """Adjudication outcome as a JSON-serialisable dict (fixture format)."""
    winner, table = adjudicate_variant(tol=tol, threshold=threshold)
    return {
        "winner": winner.value,
        "tol": tol,
        "threshold": threshold,
        "residuals": [
            {
                "function": text,
                "a": a,
                "b": b,
                "m": m,
                "variant": res.variant.value,
                "lhs": res.lhs,
                "rhs": res.rhs,
                "residual": res.residual,
            }
            for text, a, b, m, res in table
        ],
    }
