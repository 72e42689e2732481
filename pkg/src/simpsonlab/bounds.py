"""Right-hand-side bound formulas and their packaging against the defect.

Theorem tags name the bound families exposed by the CLI:

* classical -- sup|f''''| * (b-a)^5 / 2880
* thm21     -- Hoelder route, |f'''|^q m-convex on [0, b], interval [a, m*b]
* thm22     -- power-mean route, |f'''|^q m-convex, interval [a, m*b]
* thm11     -- Hoelder route, |f'''|^q s-convex (second sense) on [a, b]
* thm12     -- power-mean route, |f'''|^q s-convex on [a, b]
* thm13     -- |f'''| a P-function on [a, b]
* cor11/cor12/cor13 -- the fixed-parameter reductions of the above
  (s = 1 resp. m = 1, and cor13 additionally f'''((a+b)/2) = 0)

All Hoelder-route constants go through simpsonlab.kernel so the
Gamma-argument question has a single source of truth; the AS_PRINTED
gamma mode only affects thm21, whose commonly printed constant carries
Gamma(3p+1) where the Beta derivation yields Gamma(3p+2).

The m-route bounds (thm21/thm22) hold for the defect built on the
adjudicated midpoint; reports therefore record which variant produced
their defect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Union

from .convexity import (
    DEFAULT_CERT_TOL,
    DEFAULT_GRID_N,
    ConvexityCertificate,
    build_g,
    certify_m_convex,
    certify_p_function,
    certify_s_convex,
)
from .errors import InvalidIntervalError
from .expr import Expr, parse
from .jets import eval_jet
from .kernel import GammaMode, adjudicated_variant, holder_kernel_factor
from .quadrature import (
    DEFAULT_TOL,
    Defect,
    MidpointVariant,
    simpson_defect,
    sup_abs_derivative,
)

ADJUDICATE = "adjudicate"

MID_ZERO_TOL = 1e-9  # |f'''((a+b)/2)| below this counts as the cor13 case


class TheoremTag(str, Enum):
    CLASSICAL = "classical"
    THM11 = "thm11"
    THM12 = "thm12"
    THM13 = "thm13"
    THM21 = "thm21"
    THM22 = "thm22"
    COR11 = "cor11"
    COR12 = "cor12"
    COR13 = "cor13"


HOLDER_TAGS = (TheoremTag.THM11, TheoremTag.THM21, TheoremTag.COR11)
M_ROUTE_TAGS = (TheoremTag.THM21, TheoremTag.THM22)
S_ROUTE_TAGS = (TheoremTag.THM11, TheoremTag.THM12)


def resolve_variant(value) -> MidpointVariant:
    """Resolve 'printed' / 'corrected' / 'adjudicate' to a concrete variant."""
    if isinstance(value, MidpointVariant):
        return value
    if value == ADJUDICATE:
        return adjudicated_variant()
    return MidpointVariant(value)


@dataclass(frozen=True)
class BoundParams:
    """Every scalar a bound formula can consume.

    A, B, Mid are |f'''| at a, b and the (a+b)/2 midpoint; sup_f4 is the
    sup of |f''''| for the classical route. `evaluate` fills them from an
    expression, so hand-built instances only need the plain parameters.
    """

    a: float
    b: float
    m: float = 1.0
    q: float = 1.0
    s: float = 1.0
    A: float = 0.0
    B: float = 0.0
    Mid: float = 0.0
    sup_f4: float = 0.0
    gamma_mode: GammaMode = GammaMode.VALIDATED
    midpoint_variant: Union[MidpointVariant, str] = ADJUDICATE

    def __post_init__(self):
        if not self.a < self.b:
            raise InvalidIntervalError(f"need a < b, got [{self.a!r}, {self.b!r}]")
        if not 0.0 < self.m <= 1.0:
            raise ValueError(f"m must lie in (0, 1], got {self.m!r}")
        if not self.q >= 1.0:
            raise ValueError(f"q must be >= 1, got {self.q!r}")
        if not 0.0 < self.s <= 1.0:
            raise ValueError(f"s must lie in (0, 1], got {self.s!r}")
        for name in ("A", "B", "Mid", "sup_f4"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")
        object.__setattr__(self, "gamma_mode", GammaMode(self.gamma_mode))

    @property
    def p(self) -> Optional[float]:
        """Conjugate exponent q/(q-1); None at q = 1."""
        if self.q <= 1.0:
            return None
        return self.q / (self.q - 1.0)


@dataclass(frozen=True)
class BoundReport:
    defect_abs: float
    bound: float
    slack_ratio: float
    theorem: TheoremTag
    params: BoundParams
    certificate: Optional[ConvexityCertificate]
    certified: bool
    defect: Optional[Defect] = field(default=None, repr=False)


# ---------------------------------------------------------------------------
# the bound formulas
# ---------------------------------------------------------------------------


def _require_holder_q(q: float):
    if not q > 1.0:
        raise ValueError(
            "the Hoelder route requires q > 1 so the conjugate exponent "
            f"p = q/(q-1) exists; got q = {q!r} (power-mean bounds accept q = 1)"
        )


def classical_bound(sup_f4: float, a: float, b: float) -> float:
    """sup|f''''| (b-a)^5 / 2880; attained when f'''' is constant."""
    if not a < b:
        raise InvalidIntervalError(f"need a < b, got [{a!r}, {b!r}]")
    if sup_f4 < 0.0:
        raise ValueError("sup_f4 must be nonnegative")
    return sup_f4 * (b - a) ** 5 / 2880.0


def holder_m_bound(P: BoundParams) -> float:
    """Hoelder-route bound for |f'''|^q m-convex, over [a, m*b]."""
    _require_holder_q(P.q)
    width = P.m * P.b - P.a
    if not width > 0.0:
        raise InvalidIntervalError(
            f"need a < m*b, got a={P.a!r}, m*b={P.m * P.b!r}"
        )
    factor = holder_kernel_factor(P.p, P.gamma_mode)
    aq = P.A**P.q
    bq = P.B**P.q
    inv_q = 1.0 / P.q
    brackets = ((aq + 3.0 * P.m * bq) / 4.0) ** inv_q + (
        (3.0 * aq + P.m * bq) / 4.0
    ) ** inv_q
    return width**4 / 96.0 * factor * brackets


def powermean_m_bound(P: BoundParams) -> float:
    """Power-mean-route bound for |f'''|^q m-convex, over [a, m*b].

    Uses (m*b - a)^4; a commonly printed derivation carries (b-a)^4 in
    its intermediate lines, but the stated bound scales with the actual
    integration interval [a, m*b].
    """
    width = P.m * P.b - P.a
    if not width > 0.0:
        raise InvalidIntervalError(
            f"need a < m*b, got a={P.a!r}, m*b={P.m * P.b!r}"
        )
    aq = P.A**P.q
    bq = P.B**P.q
    inv_q = 1.0 / P.q
    brackets = ((3.0 * aq + 7.0 * P.m * bq) / 10.0) ** inv_q + (
        (7.0 * aq + 3.0 * P.m * bq) / 10.0
    ) ** inv_q
    return width**4 / 1152.0 * brackets


def holder_s_bound(P: BoundParams) -> float:
    """Hoelder-route bound for |f'''|^q s-convex (second sense) on [a, b].

    The kernel constant here is the Gamma(3p+2) form in both gamma
    modes; the printed statement of this bound already carries it.
    """
    _require_holder_q(P.q)
    width = P.b - P.a
    factor = holder_kernel_factor(P.p, GammaMode.VALIDATED)
    w_near = 1.0 / (2.0 ** (P.s + 1.0) * (P.s + 1.0))
    w_far = (2.0 ** (P.s + 1.0) - 1.0) * w_near
    aq = P.A**P.q
    bq = P.B**P.q
    inv_q = 1.0 / P.q
    brackets = (w_near * aq + w_far * bq) ** inv_q + (
        w_far * aq + w_near * bq
    ) ** inv_q
    return width**4 / 48.0 * 0.5 ** (1.0 / P.p) * factor * brackets


def powermean_s_weights(s: float):
    """(w1, w2): kernel moments against t^s and (1-t)^s on [0, 1/2].

    w1 = 2^(-4-s) / ((3+s)(4+s))
    w2 = 2^(-4-s) (34 + 2^(4+s)(s-2) + 11 s + s^2) / ((1+s)(2+s)(3+s)(4+s))

    At s = 1 they reduce to 3/1920 and 7/1920.
    """
    scale = 2.0 ** (-4.0 - s)
    w1 = scale / ((3.0 + s) * (4.0 + s))
    w2 = (
        scale
        * (34.0 + 2.0 ** (4.0 + s) * (s - 2.0) + 11.0 * s + s * s)
        / ((1.0 + s) * (2.0 + s) * (3.0 + s) * (4.0 + s))
    )
    return w1, w2


def powermean_s_bound(P: BoundParams) -> float:
    """Power-mean-route bound for |f'''|^q s-convex on [a, b]."""
    width = P.b - P.a
    w1, w2 = powermean_s_weights(P.s)
    aq = P.A**P.q
    bq = P.B**P.q
    inv_q = 1.0 / P.q
    brackets = (w1 * aq + w2 * bq) ** inv_q + (w2 * aq + w1 * bq) ** inv_q
    return width**4 / 6.0 * (1.0 / 192.0) ** (1.0 - inv_q) * brackets


def p_convex_bound(P: BoundParams) -> float:
    """(b-a)^4 (A + Mid + B) / 1152 for |f'''| a P-function."""
    width = P.b - P.a
    return width**4 * (P.A + P.Mid + P.B) / 1152.0


def cor11_bound(P: BoundParams) -> float:
    """s = 1 reduction of the Hoelder s-route (equals thm21 at m = 1)."""
    _require_holder_q(P.q)
    width = P.b - P.a
    factor = holder_kernel_factor(P.p, GammaMode.VALIDATED)
    aq = P.A**P.q
    bq = P.B**P.q
    inv_q = 1.0 / P.q
    brackets = (aq + 3.0 * bq) ** inv_q + (3.0 * aq + bq) ** inv_q
    return width**4 / 96.0 * 0.25**inv_q * factor * brackets


def cor12_bound(P: BoundParams) -> float:
    """m = 1 reduction of the power-mean route."""
    width = P.b - P.a
    aq = P.A**P.q
    bq = P.B**P.q
    inv_q = 1.0 / P.q
    brackets = ((3.0 * aq + 7.0 * bq) / 10.0) ** inv_q + (
        (7.0 * aq + 3.0 * bq) / 10.0
    ) ** inv_q
    return width**4 / 1152.0 * brackets


def cor13_bound(P: BoundParams) -> float:
    """P-function bound when f''' vanishes at the midpoint."""
    width = P.b - P.a
    return width**4 * (P.A + P.B) / 1152.0


_BOUND_FORMULAS = {
    TheoremTag.THM11: holder_s_bound,
    TheoremTag.THM12: powermean_s_bound,
    TheoremTag.THM13: p_convex_bound,
    TheoremTag.THM21: holder_m_bound,
    TheoremTag.THM22: powermean_m_bound,
    TheoremTag.COR11: cor11_bound,
    TheoremTag.COR12: cor12_bound,
    TheoremTag.COR13: cor13_bound,
}


def bound_value(P: BoundParams, theorem: TheoremTag) -> float:
    """Evaluate the tagged bound formula on already-completed parameters."""
    theorem = TheoremTag(theorem)
    if theorem == TheoremTag.CLASSICAL:
        return classical_bound(P.sup_f4, P.a, P.b)
    return _BOUND_FORMULAS[theorem](P)


# ---------------------------------------------------------------------------
# composition: expression -> report
# ---------------------------------------------------------------------------


def complete_params(e: Expr, P: BoundParams, theorem: TheoremTag) -> BoundParams:
    """Fill the derivative data (A, B, Mid, sup_f4) from the expression."""
    third = lambda x: abs(float(eval_jet(e, x, order=3).derivative(3)))  # noqa: E731
    updates = {
        "A": third(P.a),
        "B": third(P.b),
        "Mid": third(0.5 * (P.a + P.b)),
    }
    if theorem == TheoremTag.CLASSICAL:
        updates["sup_f4"] = sup_abs_derivative(e, 4, P.a, P.b)
    return replace(P, **updates)


def certificate_for(e: Expr, P: BoundParams, theorem: TheoremTag,
                     grid_n: int, cert_tol: float):
    """(certificate, certified) per the theorem's hypothesis class."""
    if theorem == TheoremTag.CLASSICAL:
        # hypotheses (C^4 with bounded f'''') are established by the jet
        # and sup evaluations having succeeded
        return None, True
    if theorem in M_ROUTE_TAGS:
        cert = certify_m_convex(build_g(e, P.q), b_star=P.b, m=P.m,
                                grid_n=grid_n, tol=cert_tol)
        return cert, cert.certified
    if theorem in S_ROUTE_TAGS:
        cert = certify_s_convex(build_g(e, P.q), P.a, P.b, P.s,
                                grid_n=grid_n, tol=cert_tol)
        return cert, cert.certified
    if theorem in (TheoremTag.COR11, TheoremTag.COR12):
        cert = certify_s_convex(build_g(e, P.q), P.a, P.b, 1.0,
                                grid_n=grid_n, tol=cert_tol)
        return cert, cert.certified
    if theorem == TheoremTag.THM13:
        cert = certify_p_function(build_g(e, 1.0), P.a, P.b,
                                  grid_n=grid_n, tol=cert_tol)
        return cert, cert.certified
    if theorem == TheoremTag.COR13:
        cert = certify_p_function(build_g(e, 1.0), P.a, P.b,
                                  grid_n=grid_n, tol=cert_tol)
        return cert, cert.certified and P.Mid <= MID_ZERO_TOL
    raise ValueError(f"unknown theorem tag {theorem!r}")


def slack_ratio(defect_abs: float, bound: float, zero_floor: float) -> float:
    """defect/bound, with the 0/0 cubic case defined as 0."""
    if bound > 0.0:
        return defect_abs / bound
    if defect_abs <= zero_floor:
        return 0.0
    return math.inf


def evaluate(e, P: BoundParams, theorem, tol: float = DEFAULT_TOL,
             grid_n: int = DEFAULT_GRID_N,
             cert_tol: float = DEFAULT_CERT_TOL) -> BoundReport:
    """Measure the defect, evaluate the tagged bound, attach the certificate.

    P's derivative data (A, B, Mid, sup_f4) is recomputed from the
    expression so reports are always self-consistent; the remaining
    parameters (a, b, m, q, s, modes) are taken from P as given.
    """
    if isinstance(e, str):
        e = parse(e)
    theorem = TheoremTag(theorem)
    P = complete_params(e, P, theorem)
    variant = resolve_variant(P.midpoint_variant)
    P = replace(P, midpoint_variant=variant)

    if theorem in M_ROUTE_TAGS:
        defect = simpson_defect(e, P.a, P.b, P.m, variant=variant, tol=tol)
    else:
        defect = simpson_defect(e, P.a, P.b, 1.0,
                                variant=MidpointVariant.CORRECTED, tol=tol)

    bound = bound_value(P, theorem)
    certificate, certified = certificate_for(e, P, theorem, grid_n, cert_tol)
    zero_floor = max(10.0 * defect.oracle_error_estimate, 1e-12)
    return BoundReport(
        defect_abs=defect.abs_value,
        bound=bound,
        slack_ratio=slack_ratio(defect.abs_value, bound, zero_floor),
        theorem=theorem,
        params=P,
        certificate=certificate,
        certified=certified,
        defect=defect,
    )
