"""Command-line front end.

Subcommands:

* verify-lemma  -- kernel-identity residuals over a corpus, both variants
* certify       -- convexity-class certification of |f'''|^q
* bound         -- one defect/bound/slack report as single-line JSON
* scan          -- corpus-wide sharpness scan to CSV or JSON

Exit codes: 0 success, 1 property or threshold failure, 2 usage/config
error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .bounds import (
    ADJUDICATE,
    BoundParams,
    HOLDER_TAGS,
    M_ROUTE_TAGS,
    S_ROUTE_TAGS,
    TheoremTag,
    evaluate,
    resolve_variant,
)
from .config import RunConfig, default_config, load_config
from .convexity import (
    DEFAULT_CERT_TOL,
    build_g,
    certify_m_convex,
    certify_p_function,
    certify_s_convex,
)
from .errors import SimpsonLabError
from .expr import parse
from .kernel import verify_lemma
from .quadrature import MidpointVariant
from .scan import render_csv, render_json, run_scan

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _add_common_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--tol", type=float, default=None,
                     help="oracle integration tolerance")
    sub.add_argument("--grid-n", type=int, default=None,
                     help="certification grid resolution")
    sub.add_argument("--format", choices=("csv", "json"), default=None,
                     help="output format")
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    sub.add_argument("--gamma", choices=("validated", "as-printed"),
                     default=None, help="Gamma-argument mode for thm21")
    sub.add_argument("--variant",
                     choices=("printed", "corrected", "adjudicate"),
                     default=None, help="midpoint convention for m < 1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simpsonlab",
        description="Simpson-type quadrature error bounds: verification, "
                    "certification and sharpness scans.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_lemma = sub.add_parser(
        "verify-lemma",
        help="check the kernel identity over a corpus, both midpoint variants",
    )
    p_lemma.add_argument("--config", default=None, help="run config path")
    p_lemma.add_argument("--threshold", type=float, default=None,
                         help="residual pass threshold")
    _add_common_flags(p_lemma)

    p_cert = sub.add_parser(
        "certify",
        help="certify g = |f'''|^q of the given expression as m-convex, "
             "s-convex or a P-function",
    )
    p_cert.add_argument("--f", required=True, help="expression text")
    p_cert.add_argument("--class", dest="klass", required=True,
                        choices=("m", "s", "p"),
                        help="class: m-convex, s-convex or P-function")
    p_cert.add_argument("--q", type=float, default=1.0)
    p_cert.add_argument("--m", type=float, default=1.0)
    p_cert.add_argument("--s", type=float, default=1.0)
    p_cert.add_argument("--a", type=float, default=0.0)
    p_cert.add_argument("--b", type=float, required=True)
    p_cert.add_argument("--b-star", type=float, default=None,
                        help="m-convex domain endpoint (default: --b)")
    p_cert.add_argument("--cert-tol", type=float, default=DEFAULT_CERT_TOL)
    _add_common_flags(p_cert)

    p_bound = sub.add_parser(
        "bound", help="single defect/bound/slack report (one-line JSON)"
    )
    p_bound.add_argument("--f", required=True, help="expression text")
    p_bound.add_argument("--a", type=float, required=True)
    p_bound.add_argument("--b", type=float, required=True)
    p_bound.add_argument("--m", type=float, default=1.0)
    p_bound.add_argument("--q", type=float, default=1.0)
    p_bound.add_argument("--s", type=float, default=1.0)
    p_bound.add_argument("--theorem", required=True,
                         choices=[t.value for t in TheoremTag])
    _add_common_flags(p_bound)

    p_scan = sub.add_parser(
        "scan", help="sharpness scan over a corpus and parameter grids"
    )
    p_scan.add_argument("--config", default=None,
                        help="run config path (default: built-in corpus)")
    _add_common_flags(p_scan)

    return parser


def _load_run_config(args) -> RunConfig:
    config = load_config(args.config) if args.config else default_config()
    overrides = {}
    if args.tol is not None:
        overrides["tol"] = args.tol
    if getattr(args, "grid_n", None) is not None:
        overrides["grid_n"] = args.grid_n
    if args.format is not None:
        overrides["fmt"] = args.format
    if args.out is not None:
        overrides["out"] = args.out
    if args.gamma is not None:
        overrides["gamma_mode"] = args.gamma.replace("-", "_")
    if args.variant is not None:
        overrides["variant"] = args.variant
    if getattr(args, "threshold", None) is not None:
        overrides["residual_threshold"] = args.threshold
    if overrides:
        from dataclasses import replace

        config = replace(config, **overrides)
    return config.validate()


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------


def cmd_verify_lemma(args) -> int:
    config = _load_run_config(args)
    threshold = config.residual_threshold
    rows = []
    for entry in config.corpus:
        e = parse(entry.text)
        for m in config.m_grid:
            if not entry.lo < m * entry.hi:
                continue
            for variant in MidpointVariant:
                res = verify_lemma(e, entry.lo, entry.hi, m,
                                   variant=variant, tol=config.tol)
                rows.append({
                    "function": entry.text, "a": entry.lo, "b": entry.hi,
                    "m": m, "variant": variant.value,
                    "lhs": res.lhs, "rhs": res.rhs, "residual": res.residual,
                    "pass": res.residual < threshold,
                })
    if not rows:
        print("verify-lemma: no applicable (corpus, m) combinations",
              file=sys.stderr)
        return EXIT_USAGE

    worst = {v.value: 0.0 for v in MidpointVariant}
    for row in rows:
        worst[row["variant"]] = max(worst[row["variant"]], row["residual"])
    passing = [v for v, w in worst.items() if w < threshold]
    winner = min(passing, key=lambda v: worst[v]) if passing else None
    for row in rows:
        row["winner"] = row["variant"] == winner

    if config.fmt == "json":
        payload = {
            "winner": winner,
            "threshold": threshold,
            "max_residual": worst,
            "rows": rows,
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", config.out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["function", "a", "b", "m", "variant", "lhs", "rhs",
                         "residual", "pass", "winner"])
        for row in rows:
            writer.writerow([
                row["function"], f"{row['a']:.17g}", f"{row['b']:.17g}",
                f"{row['m']:.17g}", row["variant"], f"{row['lhs']:.17g}",
                f"{row['rhs']:.17g}", f"{row['residual']:.17g}",
                "true" if row["pass"] else "false",
                "true" if row["winner"] else "false",
            ])
        _emit(buf.getvalue(), config.out)
    print(
        f"verify-lemma: winner={winner or 'none'} "
        f"max_residual={{printed: {worst['printed']:.3e}, "
        f"corrected: {worst['corrected']:.3e}}} threshold={threshold:g}",
        file=sys.stderr,
    )
    return EXIT_OK if winner is not None else EXIT_FAIL


def cmd_certify(args) -> int:
    g = build_g(parse(args.f), args.q)
    grid_n = args.grid_n if args.grid_n is not None else 64
    if args.klass == "m":
        b_star = args.b_star if args.b_star is not None else args.b
        cert = certify_m_convex(g, b_star, args.m, grid_n=grid_n,
                                tol=args.cert_tol)
    elif args.klass == "s":
        cert = certify_s_convex(g, args.a, args.b, args.s, grid_n=grid_n,
                                tol=args.cert_tol)
    else:
        cert = certify_p_function(g, args.a, args.b, grid_n=grid_n,
                                  tol=args.cert_tol)
    payload = {
        "function": args.f,
        "q": args.q,
        "class": cert.class_tag,
        "verdict": cert.verdict,
        "witness": list(cert.witness) if cert.witness else None,
        "violation": cert.violation,
        "grid_n": cert.grid_n,
        "tol": cert.tol,
    }
    _emit(json.dumps(payload, sort_keys=True) + "\n", args.out)
    return EXIT_OK if cert.certified else EXIT_FAIL


def cmd_bound(args) -> int:
    theorem = TheoremTag(args.theorem)
    P = BoundParams(
        a=args.a, b=args.b, m=args.m, q=args.q, s=args.s,
        gamma_mode=(args.gamma or "validated").replace("-", "_"),
        midpoint_variant=args.variant or ADJUDICATE,
    )
    tol = args.tol if args.tol is not None else 1e-11
    grid_n = args.grid_n if args.grid_n is not None else 64
    report = evaluate(parse(args.f), P, theorem, tol=tol, grid_n=grid_n)
    payload = {
        "function": args.f,
        "a": args.a,
        "b": args.b,
        "m": args.m if theorem in M_ROUTE_TAGS else None,
        "q": args.q if theorem not in (TheoremTag.CLASSICAL, TheoremTag.THM13,
                                       TheoremTag.COR13) else None,
        "s": args.s if theorem in S_ROUTE_TAGS else None,
        "theorem": theorem.value,
        "variant": report.params.midpoint_variant.value,
        "defect": report.defect.value,
        "defect_abs": report.defect_abs,
        "bound": report.bound,
        "slack_ratio": report.slack_ratio,
        "certified": report.certified,
        "error": None,
    }
    _emit(json.dumps(payload, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    config = _load_run_config(args)
    rows, summary = run_scan(config)
    if config.fmt == "json":
        _emit(render_json(rows, summary), config.out)
    else:
        _emit(render_csv(rows), config.out)
        print(json.dumps({"summary": summary}, sort_keys=True), file=sys.stderr)
    errored = sum(1 for r in rows if r.error)
    if errored:
        print(f"scan: {errored} row(s) recorded errors", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already
        return int(exc.code or 0)
    try:
        if args.command == "verify-lemma":
            return cmd_verify_lemma(args)
        if args.command == "certify":
            return cmd_certify(args)
        if args.command == "bound":
            return cmd_bound(args)
        if args.command == "scan":
            return cmd_scan(args)
        parser.error(f"unknown command {args.command!r}")
    except (SimpsonLabError, ValueError, OSError) as exc:
        print(f"simpsonlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
