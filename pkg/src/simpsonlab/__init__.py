"""simpsonlab: Simpson-type quadrature error bounds, verified numerically.

The package measures the Simpson defect of smooth functions against the
closed-form bounds that hold when |f'''|^q belongs to an m-convex,
s-convex or P-function class, certifies those hypotheses on grids, and
scans how sharp each bound is across parameter ranges.
"""

from .bounds import (
    BoundParams,
    BoundReport,
    TheoremTag,
    bound_value,
    classical_bound,
    cor11_bound,
    cor12_bound,
    cor13_bound,
    evaluate,
    holder_m_bound,
    holder_s_bound,
    p_convex_bound,
    powermean_m_bound,
    powermean_s_bound,
    resolve_variant,
)
from .config import (
    DEFAULT_CORPUS,
    CorpusEntry,
    RunConfig,
    default_config,
    load_config,
    parse_config,
)
from .convexity import (
    ConvexityCertificate,
    build_g,
    certify_m_convex,
    certify_p_function,
    certify_s_convex,
    max_m,
)
from .errors import (
    DomainError,
    ExpressionSyntaxError,
    InvalidIntervalError,
    NonSmoothPointError,
    OutOfRangeError,
    SimpsonLabError,
    ToleranceNotReachedError,
    UnknownIdentifierError,
)
from .expr import Expr, eval_value, parse, to_source
from .jets import Jet4, derivative, eval_jet
from .kernel import (
    GammaMode,
    LemmaResidual,
    adjudicate_variant,
    adjudicated_variant,
    kernel,
    kernel_moment,
    verify_lemma,
    weighted_moments,
)
from .quadrature import (
    Defect,
    MidpointVariant,
    integrate,
    simpson_defect,
    sup_abs_derivative,
)
from .scan import ScanRow, render_csv, render_json, run_scan, summarize

__version__ = "0.1.0"

__all__ = [
    "BoundParams",
    "BoundReport",
    "ConvexityCertificate",
    "CorpusEntry",
    "DEFAULT_CORPUS",
    "Defect",
    "DomainError",
    "Expr",
    "ExpressionSyntaxError",
    "GammaMode",
    "InvalidIntervalError",
    "Jet4",
    "LemmaResidual",
    "MidpointVariant",
    "NonSmoothPointError",
    "OutOfRangeError",
    "RunConfig",
    "ScanRow",
    "SimpsonLabError",
    "TheoremTag",
    "ToleranceNotReachedError",
    "UnknownIdentifierError",
    "adjudicate_variant",
    "adjudicated_variant",
    "bound_value",
    "build_g",
    "certify_m_convex",
    "certify_p_function",
    "certify_s_convex",
    "classical_bound",
    "cor11_bound",
    "cor12_bound",
    "cor13_bound",
    "default_config",
    "derivative",
    "eval_jet",
    "eval_value",
    "evaluate",
    "holder_m_bound",
    "holder_s_bound",
    "integrate",
    "kernel",
    "kernel_moment",
    "load_config",
    "max_m",
    "p_convex_bound",
    "parse",
    "parse_config",
    "powermean_m_bound",
    "powermean_s_bound",
    "render_csv",
    "render_json",
    "resolve_variant",
    "run_scan",
    "simpson_defect",
    "summarize",
    "sup_abs_derivative",
    "to_source",
    "verify_lemma",
    "weighted_moments",
]
