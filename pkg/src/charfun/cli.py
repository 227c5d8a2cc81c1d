"""Command-line front end: build a CF, invert it, emit a CSV or JSON table.

Examples::

    charfun bartlett --k 15 --nu 1,1,1,1,1,2,2,2,2,2,3,3,3,3,3 --probs 0.9,0.95,0.99 --xmin 0
    charfun wilks --p 10 --q 7 --n 30 --probs 0.9,0.95,0.99 --x 0:6:100 --xmin 0
    charfun qform --lambdas 2,1,0.5 --probs 0.95 --validate
    charfun validate wilks-cs --p 10 --n 30 --q 7

Exit status: 0 on success, 1 for computation errors, 2 for usage errors.
Errors are written to stderr as one JSON line ``{"error": kind, "message": ...}``.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from typing import Optional

import numpy as np

from .cf import StatisticSpec, chi2
from .errors import CharfunError
from .inversion import (
    InversionOptions,
    cf2dist,
    chi2_options,
    chi2_quantile,
    invert_cdf,
    wilks_chi2_approx_quantile,
)
from .oracle import SimulationConfig, ks_critical_value, ks_distance, simulate


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _probs(text: str) -> list[float]:
    values = _floats(text)
    if not values or any(not 0.0 < p < 1.0 for p in values):
        raise argparse.ArgumentTypeError("probabilities must lie strictly inside (0, 1)")
    return values


def _xgrid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, ValueError):
        raise argparse.ArgumentTypeError(f"expected MIN:MAX:COUNT, got {text!r}")
    if len(parts) != 3 or count < 1 or not hi >= lo:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX:COUNT with MAX >= MIN and COUNT >= 1, got {text!r}")
    return lo, hi, count


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


# ------------------------------------------------------------- parameters


def _add_statistic_args(name: str, p: argparse.ArgumentParser) -> None:
    if name == "bartlett":
        p.add_argument("--k", type=int, required=True, help="number of groups")
        p.add_argument("--nu", type=_floats, required=True, help="degrees of freedom per group")
    elif name in ("wilks", "wilks-cs"):
        p.add_argument("--p", type=_positive_int, required=True, help="dimension")
        p.add_argument("--n", type=_positive_int, required=True, help="total sample size (error df with --raw)")
        p.add_argument("--q", type=_positive_int, required=True, help="number of groups (hypothesis df with --raw)")
        if name == "wilks":
            p.add_argument("--raw", action="store_true", help="take (p, n, q) as Lambda(p, n, q) directly")
    elif name == "qform":
        p.add_argument("--lambdas", type=_floats, required=True, help="eigenvalues of the quadratic form")
    elif name in ("cvm", "ad"):
        p.add_argument("--terms", type=_positive_int, default=None, help="use the truncated product with this many terms")
    elif name == "log-beta":
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--beta", type=float, required=True)
        p.add_argument("--coef", type=float, default=1.0)
    elif name == "chi2-quantile":
        p.add_argument("--df", type=float, required=True, help="degrees of freedom")


def _add_common_args(p: argparse.ArgumentParser, validate_flag: bool = True) -> None:
    p.add_argument("--probs", type=_probs, default=None, help="comma-separated probabilities")
    p.add_argument("--x", type=_xgrid, default=None, metavar="MIN:MAX:COUNT", help="evaluation grid")
    p.add_argument("--n-nodes", type=int, default=None)
    p.add_argument("--xmin", type=float, default=None)
    p.add_argument("--xmax", type=float, default=None)
    p.add_argument("--sigma-rule", type=float, default=6.0)
    p.add_argument("--quantile-tol", type=float, default=1e-8)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default=None, help="output path (default: stdout)")
    p.add_argument("--seed", type=int, default=20261015, help="oracle seed")
    p.add_argument("--n-sim", type=_positive_int, default=100_000, help="oracle sample count")
    if validate_flag:
        p.add_argument("--validate", action="store_true", help="compare against the Monte Carlo oracle")


STATISTICS = ("bartlett", "wilks", "wilks-cs", "qform", "cvm", "ad", "log-beta", "chi2-quantile")
ORACLE_STATISTICS = ("bartlett", "wilks", "wilks-cs", "qform", "log-beta")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="charfun", description="Exact distributions by numerical CF inversion.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in STATISTICS:
        p = sub.add_parser(name)
        _add_statistic_args(name, p)
        _add_common_args(p, validate_flag=name in ORACLE_STATISTICS)
    val = sub.add_parser("validate", help="invert and check against the Monte Carlo oracle")
    vsub = val.add_subparsers(dest="statistic", required=True, parser_class=_Parser)
    for name in ORACLE_STATISTICS:
        p = vsub.add_parser(name)
        _add_statistic_args(name, p)
        _add_common_args(p, validate_flag=False)
    return parser


# ----------------------------------------------------------------- running


def _spec_for(name: str, args) -> tuple[StatisticSpec, dict]:
    """StatisticSpec plus CLI-level description (raw parameters, mapping, approximation)."""
    if name == "bartlett":
        spec = StatisticSpec("bartlett", {"k": args.k, "nu": args.nu})
        return spec, {"approx": f"chi2(df={args.k - 1})"}
    if name == "wilks":
        if args.raw:
            p, n, q = args.p, args.n, args.q
        else:
            p, n, q = args.p, args.n - args.q, args.q - 1
        spec = StatisticSpec("wilks", {"p": p, "n": n, "q": q})
        extra = {"manova": {"p": args.p, "n": args.n, "q": args.q}} if not args.raw else {}
        extra["approx"] = f"bartlett-rao chi2(df={p * q})"
        return spec, extra
    if name == "wilks-cs":
        return StatisticSpec("wilks_cs", {"p": args.p, "n": args.n, "q": args.q}), {}
    if name == "qform":
        return StatisticSpec("quadform", {"lambdas": args.lambdas}), {}
    if name in ("cvm", "ad"):
        params = {} if args.terms is None else {"terms": args.terms}
        return StatisticSpec(name, params), {}
    if name == "log-beta":
        return StatisticSpec("log_beta", {"alpha": args.alpha, "beta": args.beta, "coef": args.coef}), {}
    raise UsageError(f"unknown statistic {name!r}")


def _approx_quantiles(spec: StatisticSpec, probs) -> Optional[list[float]]:
    if spec.variant == "bartlett":
        return [chi2_quantile(p, spec.params["k"] - 1) for p in probs]
    if spec.variant == "wilks":
        pp = spec.params
        return [wilks_chi2_approx_quantile(p, pp["p"], pp["n"], pp["q"]) for p in probs]
    return None


def _options(args, base: Optional[InversionOptions] = None) -> InversionOptions:
    base = base or InversionOptions()
    return InversionOptions(
        n_nodes=args.n_nodes if args.n_nodes is not None else base.n_nodes,
        x_min=args.xmin if args.xmin is not None else base.x_min,
        x_max=args.xmax if args.xmax is not None else base.x_max,
        sigma_rule=args.sigma_rule,
        quantile_tol=args.quantile_tol,
        max_newton_iters=base.max_newton_iters,
        tail_epsilon=base.tail_epsilon,
    )


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.generic):
        return _clean(value.item())
    return value


def run(args) -> dict:
    """Execute a parsed request and return the output document."""
    command = args.command
    validate = command == "validate" or getattr(args, "validate", False)
    name = args.statistic if command == "validate" else command

    if name == "chi2-quantile":
        if not args.df > 0:
            raise UsageError("--df must be positive")
        cf = chi2(args.df)
        opts = _options(args, chi2_options(args.df))
        spec_doc = {"statistic": "chi2", "df": args.df}
        spec = None
    else:
        spec, extra = _spec_for(name, args)
        cf = spec.build()
        opts = _options(args)
        spec_doc = {"subcommand": name, **spec.describe(), **extra}

    if args.x is None and not args.probs:
        raise UsageError("need --x or --probs")
    x = None
    if args.x is not None:
        lo, hi, count = args.x
        x = np.linspace(lo, hi, count)
    probs = args.probs or []
    result = cf2dist(cf, x, probs, opts)
    g = result.grid

    quantiles = [{"p": p, "q": q} for p, q in result.quantiles]
    approx = _approx_quantiles(spec, probs) if spec is not None and probs else None
    if approx is not None:
        for entry, value in zip(quantiles, approx):
            entry["approx"] = value

    doc = {
        "spec": spec_doc,
        "grid": {
            "A": g.domain[0],
            "B": g.domain[1],
            "delta_t": g.delta_t,
            "n_nodes": opts.n_nodes,
            "T": g.T,
            "mean": g.mean,
            "std": g.std,
        },
        "x": result.x.tolist(),
        "pdf": result.pdf.tolist(),
        "cdf": result.cdf.tolist(),
        "quantiles": quantiles,
        "diagnostics": result.diagnostics,
    }
    if validate:
        sim = simulate(spec, SimulationConfig(args.n_sim, args.seed, spec))
        distance = ks_distance(sim.samples, lambda v: invert_cdf(cf, v, g))
        critical = ks_critical_value(args.n_sim, 0.01)
        doc["validation"] = {
            "n_sim": args.n_sim,
            "seed": args.seed,
            "ks_distance": distance,
            "critical_value_1pct": critical,
            "passed": bool(distance < critical),
            "sample_mean": sim.mean,
            "sample_std": sim.std,
        }
    return _clean(doc)


# --------------------------------------------------------------- rendering


def _fmt10(value) -> str:
    if value is None:
        return "nan"
    return repr(float(f"{value:.10g}"))


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def render_csv(doc: dict) -> str:
    out = io.StringIO()
    out.write("x,pdf,cdf\n")
    for xv, pv, cv in zip(doc["x"], doc["pdf"], doc["cdf"]):
        out.write(f"{_fmt10(xv)},{_fmt10(pv)},{_fmt10(cv)}\n")
    for entry in doc["quantiles"]:
        out.write(f"# quantile,{_fmt10(entry['p'])},{_fmt10(entry['q'])}\n")
    for entry in doc["quantiles"]:
        if "approx" in entry:
            out.write(f"# approx_quantile,{_fmt10(entry['p'])},{_fmt10(entry['approx'])}\n")
    val = doc.get("validation")
    if val:
        out.write(f"# validation,ks_distance,{_fmt10(val['ks_distance'])}\n")
        out.write(f"# validation,critical_value_1pct,{_fmt10(val['critical_value_1pct'])}\n")
        out.write(f"# validation,passed,{str(val['passed']).lower()}\n")
    return out.getvalue()


def _emit_error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        _emit_error("usage", str(exc))
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        doc = run(args)
    except UsageError as exc:
        _emit_error("usage", str(exc))
        return 2
    except CharfunError as exc:
        _emit_error(exc.kind, str(exc))
        return 1
    except (ArithmeticError, ValueError) as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 1
    text = render_csv(doc) if args.format == "csv" else render_json(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
