"""Run configuration for scans and lemma verification.

Config files are flat key=value text: '#' starts a comment, keys are
case-sensitive, and the `corpus` key may repeat, one entry per line:

    corpus = x^4 | 0 | 1
    corpus = exp(x) | 0.5 | 2
    m_grid = 0.25, 0.5, 0.75, 1
    q_grid = 1, 1.5, 2, 3
    s_grid = 0.5, 1
    theorems = classical, thm21, thm22
    tol = 1e-11
    grid_n = 64
    gamma = validated
    variant = adjudicate
    residual_threshold = 1e-9
    format = csv
    out = scan.csv

No nesting, trivially diffable. Unknown keys are errors.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

from .bounds import ADJUDICATE, TheoremTag
from .kernel import GammaMode
from .quadrature import DEFAULT_TOL, MidpointVariant

DEFAULT_INTERVALS = ((0.0, 1.0), (0.5, 2.0))
DEFAULT_FUNCTIONS = (
    "x^3",
    "x^4",
    "x^5",
    "x^6",
    "exp(x)",
    "sin(x)",
    "x*exp(x)",
    "log(1+x)",
)


@dataclass(frozen=True)
class CorpusEntry:
    text: str
    lo: float
    hi: float


DEFAULT_CORPUS: Tuple[CorpusEntry, ...] = tuple(
    CorpusEntry(text, lo, hi)
    for text in DEFAULT_FUNCTIONS
    for lo, hi in DEFAULT_INTERVALS
)

ALL_THEOREMS: Tuple[TheoremTag, ...] = tuple(TheoremTag)

VARIANT_POLICIES = (
    MidpointVariant.PRINTED.value,
    MidpointVariant.CORRECTED.value,
    ADJUDICATE,
)


@dataclass(frozen=True)
class RunConfig:
    corpus: Tuple[CorpusEntry, ...] = DEFAULT_CORPUS
    m_grid: Tuple[float, ...] = (0.25, 0.5, 0.75, 1.0)
    q_grid: Tuple[float, ...] = (1.0, 1.5, 2.0, 3.0)
    s_grid: Tuple[float, ...] = (0.5, 1.0)
    theorems: Tuple[TheoremTag, ...] = ALL_THEOREMS
    tol: float = DEFAULT_TOL
    grid_n: int = 64
    gamma_mode: GammaMode = GammaMode.VALIDATED
    variant: str = ADJUDICATE
    residual_threshold: float = 1e-9
    fmt: str = "csv"
    out: Optional[str] = None

    def validate(self) -> "RunConfig":
        if not self.corpus:
            raise ValueError("corpus must not be empty")
        for grid, name in ((self.m_grid, "m_grid"), (self.q_grid, "q_grid"),
                           (self.s_grid, "s_grid")):
            if not grid:
                raise ValueError(f"{name} must not be empty")
        if not self.theorems:
            raise ValueError("theorems must not be empty")
        if not self.tol > 0.0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if not self.residual_threshold > 0.0:
            raise ValueError("residual_threshold must be positive")
        if self.grid_n < 8:
            raise ValueError(f"grid_n must be at least 8, got {self.grid_n!r}")
        if self.variant not in VARIANT_POLICIES:
            raise ValueError(f"variant must be one of {VARIANT_POLICIES}")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.fmt!r}")
        for m in self.m_grid:
            if not 0.0 < m <= 1.0:
                raise ValueError(f"m grid value {m!r} outside (0, 1]")
        for q in self.q_grid:
            if not q >= 1.0:
                raise ValueError(f"q grid value {q!r} below 1")
        for s in self.s_grid:
            if not 0.0 < s <= 1.0:
                raise ValueError(f"s grid value {s!r} outside (0, 1]")
        return self


def _parse_corpus_entry(value: str) -> CorpusEntry:
    parts = [p.strip() for p in value.split("|")]
    if len(parts) != 3:
        raise ValueError(
            f"corpus entries are 'EXPR | lo | hi', got {value!r}"
        )
    text, lo, hi = parts
    entry = CorpusEntry(text, float(lo), float(hi))
    if not entry.lo < entry.hi:
        raise ValueError(f"corpus interval must have lo < hi, got {value!r}")
    return entry


def _parse_floats(value: str) -> Tuple[float, ...]:
    return tuple(float(p.strip()) for p in value.split(",") if p.strip())


def _parse_theorems(value: str) -> Tuple[TheoremTag, ...]:
    return tuple(TheoremTag(p.strip()) for p in value.split(",") if p.strip())


def parse_config(text: str) -> RunConfig:
    """Parse flat key=value config text into a validated RunConfig."""
    corpus = []
    fields: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            if key == "corpus":
                corpus.append(_parse_corpus_entry(value))
            elif key == "m_grid":
                fields["m_grid"] = _parse_floats(value)
            elif key == "q_grid":
                fields["q_grid"] = _parse_floats(value)
            elif key == "s_grid":
                fields["s_grid"] = _parse_floats(value)
            elif key == "theorems":
                fields["theorems"] = _parse_theorems(value)
            elif key == "tol":
                fields["tol"] = float(value)
            elif key == "grid_n":
                fields["grid_n"] = int(value)
            elif key == "gamma":
                fields["gamma_mode"] = GammaMode(value.replace("-", "_"))
            elif key == "variant":
                fields["variant"] = value
            elif key == "residual_threshold":
                fields["residual_threshold"] = float(value)
            elif key == "format":
                fields["fmt"] = value
            elif key == "out":
                fields["out"] = value
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if not corpus:
        raise ValueError("config defines no corpus entries")
    return RunConfig(corpus=tuple(corpus), **fields).validate()


def load_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_config(handle.read())


def default_config(**overrides) -> RunConfig:
    """The in-repo default corpus and grids, with keyword overrides."""
    return replace(RunConfig(), **overrides).validate()
