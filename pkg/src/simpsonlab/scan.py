"""Corpus-wide sharpness scans with deterministic CSV/JSON reporting.

One row per (function, interval, theorem, parameter) combination. Rows
are emitted in lexicographic order of (function, a, b, m, q, s, theorem)
with absent parameters sorting first, so identical configs render byte
identical artifacts. Parameter combinations that violate a theorem's
static preconditions (q = 1 on a Hoelder route, a >= m*b) are skipped:
they are not instances of the bound, so they are neither rows nor
errors. Runtime evaluation failures are recorded per row in the error
column.
"""

from __future__ import annotations

import csv
import io
import json
import statistics
from dataclasses import dataclass
from typing import Optional

from .bounds import (
    BoundParams,
    HOLDER_TAGS,
    M_ROUTE_TAGS,
    S_ROUTE_TAGS,
    TheoremTag,
    bound_value,
    certificate_for,
    resolve_variant,
    slack_ratio,
)
from .config import CorpusEntry, RunConfig
from .convexity import DEFAULT_CERT_TOL
from .errors import SimpsonLabError
from .expr import parse
from .jets import eval_jet
from .quadrature import MidpointVariant, simpson_defect, sup_abs_derivative

CSV_HEADER = (
    "function", "a", "b", "m", "q", "s", "theorem", "variant",
    "defect_abs", "bound", "slack_ratio", "certified", "error",
)


@dataclass(frozen=True)
class ScanRow:
    function: str
    a: float
    b: float
    m: Optional[float]
    q: Optional[float]
    s: Optional[float]
    theorem: TheoremTag
    variant: str
    defect: Optional[float]
    defect_abs: Optional[float]
    bound: Optional[float]
    slack_ratio: Optional[float]
    certified: Optional[bool]
    error: str = ""

    def sort_key(self):
        missing = -1.0
        return (
            self.function,
            self.a,
            self.b,
            self.m if self.m is not None else missing,
            self.q if self.q is not None else missing,
            self.s if self.s is not None else missing,
            self.theorem.value,
        )

    def as_dict(self) -> dict:
        return {
            "function": self.function,
            "a": self.a,
            "b": self.b,
            "m": self.m,
            "q": self.q,
            "s": self.s,
            "theorem": self.theorem.value,
            "variant": self.variant,
            "defect": self.defect,
            "defect_abs": self.defect_abs,
            "bound": self.bound,
            "slack_ratio": self.slack_ratio,
            "certified": self.certified,
            "error": self.error or None,
        }


def _param_tuples(theorem: TheoremTag, config: RunConfig, entry: CorpusEntry):
    """Applicable (m, q, s) combinations; None marks an unused parameter."""
    needs_holder_q = theorem in HOLDER_TAGS

    def q_values():
        return [q for q in config.q_grid if q > 1.0] if needs_holder_q \
            else list(config.q_grid)

    if theorem in (TheoremTag.CLASSICAL, TheoremTag.THM13, TheoremTag.COR13):
        return [(None, None, None)]
    if theorem in S_ROUTE_TAGS:
        return [(None, q, s) for q in q_values() for s in config.s_grid]
    if theorem in (TheoremTag.COR11, TheoremTag.COR12):
        return [(None, q, None) for q in q_values()]
    if theorem in M_ROUTE_TAGS:
        return [
            (m, q, None)
            for m in config.m_grid
            if entry.lo < m * entry.hi  # the shifted interval must be nonempty
            for q in q_values()
        ]
    raise ValueError(f"unknown theorem tag {theorem!r}")


class _EntryEvaluator:
    """Per-(function, interval) pipeline with defect/certificate caches."""

    def __init__(self, entry: CorpusEntry, config: RunConfig,
                 variant: MidpointVariant):
        self.entry = entry
        self.config = config
        self.variant = variant
        self.expr = parse(entry.text)
        self._derivs = None
        self._sup_f4 = None
        self._defects = {}
        self._certificates = {}

    def third_derivatives(self):
        if self._derivs is None:
            e, lo, hi = self.expr, self.entry.lo, self.entry.hi
            d3 = lambda x: abs(float(eval_jet(e, x, order=3).derivative(3)))  # noqa: E731
            self._derivs = (d3(lo), d3(hi), d3(0.5 * (lo + hi)))
        return self._derivs

    def sup_f4(self):
        if self._sup_f4 is None:
            self._sup_f4 = sup_abs_derivative(
                self.expr, 4, self.entry.lo, self.entry.hi
            )
        return self._sup_f4

    def defect(self, m_eff: float):
        key = (m_eff, self.variant)
        if key not in self._defects:
            self._defects[key] = simpson_defect(
                self.expr, self.entry.lo, self.entry.hi, m_eff,
                variant=self.variant, tol=self.config.tol,
            )
        return self._defects[key]

    def certificate(self, P: BoundParams, theorem: TheoremTag):
        if theorem in M_ROUTE_TAGS:
            key = ("m", P.m, P.q)
        elif theorem in S_ROUTE_TAGS:
            key = ("s", P.s, P.q)
        elif theorem in (TheoremTag.COR11, TheoremTag.COR12):
            key = ("s", 1.0, P.q)
        elif theorem in (TheoremTag.THM13, TheoremTag.COR13):
            key = ("p",)
        else:
            key = ("none",)
        if key not in self._certificates:
            self._certificates[key] = certificate_for(
                self.expr, P, theorem,
                grid_n=self.config.grid_n, cert_tol=DEFAULT_CERT_TOL,
            )[0]
        cert = self._certificates[key]
        if cert is None:
            return None, True
        certified = cert.certified
        if theorem == TheoremTag.COR13:
            certified = certified and P.Mid <= 1e-9
        return cert, certified

    def row(self, theorem: TheoremTag, m, q, s) -> ScanRow:
        entry = self.entry
        base = dict(
            function=entry.text, a=entry.lo, b=entry.hi,
            m=m, q=q, s=s, theorem=theorem, variant=self.variant.value,
        )
        try:
            A, B, Mid = self.third_derivatives()
            P = BoundParams(
                a=entry.lo, b=entry.hi,
                m=m if m is not None else 1.0,
                q=q if q is not None else 1.0,
                s=s if s is not None else 1.0,
                A=A, B=B, Mid=Mid,
                sup_f4=self.sup_f4() if theorem == TheoremTag.CLASSICAL else 0.0,
                gamma_mode=self.config.gamma_mode,
                midpoint_variant=self.variant,
            )
            m_eff = P.m if theorem in M_ROUTE_TAGS else 1.0
            defect = self.defect(m_eff)
            bound = bound_value(P, theorem)
            _, certified = self.certificate(P, theorem)
            zero_floor = max(10.0 * defect.oracle_error_estimate, 1e-12)
            return ScanRow(
                **base,
                defect=defect.value,
                defect_abs=defect.abs_value,
                bound=bound,
                slack_ratio=slack_ratio(defect.abs_value, bound, zero_floor),
                certified=certified,
            )
        except (SimpsonLabError, ValueError, OverflowError) as exc:
            return ScanRow(
                **base,
                defect=None, defect_abs=None, bound=None, slack_ratio=None,
                certified=None, error=f"{type(exc).__name__}: {exc}",
            )


def run_scan(config: RunConfig):
    """Evaluate the whole grid; returns (rows, summary) in emission order."""
    config.validate()
    variant = resolve_variant(config.variant)
    rows = []
    for entry in config.corpus:
        evaluator = _EntryEvaluator(entry, config, variant)
        for theorem in config.theorems:
            for m, q, s in _param_tuples(theorem, config, entry):
                rows.append(evaluator.row(theorem, m, q, s))
    rows.sort(key=ScanRow.sort_key)
    return rows, summarize(rows)


def summarize(rows) -> dict:
    """min/median/max slack per theorem over clean rows, plus counts."""
    summary = {}
    for theorem in TheoremTag:
        group = [r for r in rows if r.theorem == theorem]
        if not group:
            continue
        ok = [r for r in group if not r.error]
        slacks = [r.slack_ratio for r in ok
                  if r.slack_ratio is not None and r.slack_ratio == r.slack_ratio]
        entry = {
            "rows": len(group),
            "errors": len(group) - len(ok),
            "certified": sum(1 for r in ok if r.certified),
        }
        if slacks:
            entry["min_slack"] = min(slacks)
            entry["median_slack"] = statistics.median(slacks)
            entry["max_slack"] = max(slacks)
        summary[theorem.value] = entry
    return summary


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def render_csv(rows) -> str:
    """Fixed-schema CSV; floats carry 17 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([
            r.function, _fmt(r.a), _fmt(r.b), _fmt(r.m), _fmt(r.q), _fmt(r.s),
            r.theorem.value, r.variant, _fmt(r.defect_abs), _fmt(r.bound),
            _fmt(r.slack_ratio), _fmt(r.certified), r.error,
        ])
    return buf.getvalue()


def render_json(rows, summary) -> str:
    payload = {"rows": [r.as_dict() for r in rows], "summary": summary}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
