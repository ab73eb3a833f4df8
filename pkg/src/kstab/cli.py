"""``kstab`` command line.

    kstab toric analyze --input X.json --valuation 1,1
    kstab toric scan    --input X.json --height 2
    kstab toric oracle  --input X.json --valuation 1,0 --dilates 6
    kstab p1 analyze    --coeffs 1/3,1/3,1/3

The machine-readable report goes to stdout (or ``--out``), a short human
summary to stderr.  Rationals are always written as canonical "p/q" strings.
Negative valuations need the ``=`` form: ``--valuation=-1,0``.

Exit codes: 0 ok, 2 parse error, 3 invalid variety, 4 invalid valuation,
5 oracle disagreement, 6 invalid log pair.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import InvalidLogPair, InvalidValuation, InvalidVariety
from .filtration_oracle import cross_check
from .invariants import InvariantReport, report, scan
from .log_fano_p1 import GENERIC, P1LogPair, analyze
from .toric_fano import ToricFanoVariety, ToricValuation, as_valuation, build_variety

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VARIETY = 3
EXIT_VALUATION = 4
EXIT_ORACLE = 5
EXIT_LOG_PAIR = 6

log = logging.getLogger("kstab")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def q(x) -> str:
    """Canonical rational string: "p/q", or "p" when q = 1."""
    return str(Fraction(x))


def qvec(v) -> list[str]:
    return [q(x) for x in v]


def read_toric_input(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_PARSE, "cannot read %s: %s" % (path, exc)) from exc
    try:
        doc = json.loads(text, parse_float=_reject_float)
    except (ValueError, TypeError) as exc:
        raise CliError(EXIT_PARSE, "%s is not valid input JSON: %s" % (path, exc)) from exc
    if not isinstance(doc, dict) or "dim" not in doc or "rays" not in doc:
        raise CliError(EXIT_PARSE, "input must be an object with keys 'dim' and 'rays'")
    dim, rays = doc["dim"], doc["rays"]
    if not _is_int(dim) or not isinstance(rays, list) or not all(
            isinstance(r, list) and all(_is_int(c) for c in r) for r in rays):
        raise CliError(EXIT_PARSE, "'dim' must be an integer and 'rays' a list of integer lists")
    return {"dim": dim, "rays": rays}


def _reject_float(s):
    raise ValueError("floating point literal %s; use integers" % s)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def load_variety(record: dict) -> ToricFanoVariety:
    try:
        return build_variety(record["rays"], record["dim"])
    except InvalidVariety as exc:
        raise CliError(EXIT_VARIETY, "invalid variety (%s): %s" % (type(exc).__name__, exc)) from exc


def parse_valuation(text: str, X: ToricFanoVariety) -> ToricValuation:
    try:
        coords = [int(c) for c in text.split(",")]
    except ValueError as exc:
        raise CliError(EXIT_PARSE, "valuation must be comma-separated integers, got %r" % text) from exc
    try:
        return as_valuation(X, coords)
    except InvalidValuation as exc:
        raise CliError(EXIT_VALUATION, "invalid valuation (%s): %s" % (type(exc).__name__, exc)) from exc


def variety_json(X: ToricFanoVariety) -> dict:
    return {
        "dim": X.dimension,
        "rays": [list(r) for r in X.rays],
        "polytope_vertices": [qvec(v) for v in X.polytope.vertices],
        "gorenstein_denominator": X.gorenstein_denominator,
        "anticanonical_degree": q(X.degree),
        "barycenter": qvec(X.barycenter),
    }


def report_json(r: InvariantReport, with_volume: bool = True) -> dict:
    out = {
        "w": list(r.w),
        "A": q(r.A),
        "tau": q(r.tau),
        "beta": q(r.beta),
        "j": q(r.j),
        "ratio": q(r.ratio),
    }
    if with_volume:
        out["volume_function"] = {
            "breakpoints": qvec(r.volume_poly.breakpoints),
            "pieces": [qvec(p.coeffs) for p in r.volume_poly.pieces],
        }
    return out


def _envelope(command: str, inputs: dict) -> dict:
    return {"engine": {"name": "kstab", "version": __version__}, "command": command, "input": inputs}


def cmd_toric_analyze(args) -> tuple[dict, str, int]:
    record = read_toric_input(args.input)
    X = load_variety(record)
    v = parse_valuation(args.valuation, X)
    r = report(X, v)
    out = _envelope("toric analyze", dict(record, valuation=list(v.w)))
    out["variety"] = variety_json(X)
    out["report"] = report_json(r)
    summary = "w=%s  A=%s  tau=%s  beta=%s  j=%s  beta/j=%s" % (
        list(v.w), q(r.A), q(r.tau), q(r.beta), q(r.j), q(r.ratio))
    return out, summary, EXIT_OK


def cmd_toric_scan(args) -> tuple[dict, str, int]:
    if args.height < 1:
        raise CliError(EXIT_PARSE, "--height must be >= 1")
    record = read_toric_input(args.input)
    X = load_variety(record)
    s = scan(X, args.height)
    out = _envelope("toric scan", dict(record, height=args.height))
    out["variety"] = variety_json(X)
    out["scan"] = {
        "height": s.height,
        "verdict": s.verdict.value,
        "min_ratio": q(s.min_ratio),
        "destabilizer": list(s.destabilizer) if s.destabilizer is not None else None,
        "barycenter": qvec(s.barycenter),
        "conditional_on_equivariant_reduction": s.conditional_on_equivariant_reduction,
        "count": len(s.reports),
        "reports": [report_json(r, with_volume=False) for r in s.reports],
    }
    summary = "%s over %d valuations of height <= %d; min beta/j = %s%s" % (
        s.verdict.value, len(s.reports), s.height, q(s.min_ratio),
        "; destabilizer %s" % list(s.destabilizer) if s.destabilizer else "")
    return out, summary, EXIT_OK


def cmd_toric_oracle(args) -> tuple[dict, str, int]:
    record = read_toric_input(args.input)
    X = load_variety(record)
    v = parse_valuation(args.valuation, X)
    dilates = args.dilates if args.dilates is not None else X.dimension + 4
    if dilates < X.dimension + 4:
        raise CliError(EXIT_PARSE, "--dilates must be >= n+4 = %d" % (X.dimension + 4))
    c = cross_check(X, v, dilates)
    out = _envelope("toric oracle", dict(record, valuation=list(v.w), dilates=dilates))
    out["variety"] = variety_json(X)
    out["oracle"] = {
        "w": list(c.w),
        "df_oracle": q(c.df_oracle),
        "beta_over_vol": q(c.beta_over_vol),
        "agree": c.agree,
        "F0": q(c.fit.F0),
        "F1": q(c.fit.F1),
        "weight_poly": qvec(c.fit.weight_poly.coeffs),
        "dim_poly": qvec(c.fit.dim_poly.coeffs),
        "samples": [{"k": s.k, "dim": s.dim, "weight": q(s.weight)} for s in c.fit.samples],
    }
    summary = "DF (lattice points) = %s, beta/vol = %s: %s" % (
        q(c.df_oracle), q(c.beta_over_vol), "agree" if c.agree else "DISAGREE")
    return out, summary, EXIT_OK if c.agree else EXIT_ORACLE


def _point_label(which):
    return "GENERIC" if which is GENERIC else which


def cmd_p1_analyze(args) -> tuple[dict, str, int]:
    literals = [s.strip() for s in args.coeffs.split(",") if s.strip()]
    try:
        coeffs = [Fraction(s) for s in literals]
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(EXIT_PARSE, "coefficients must be rational literals p/q: %s" % exc) from exc
    if any("." in s or "e" in s.lower() for s in literals):
        raise CliError(EXIT_PARSE, "coefficients must be rational literals p/q, not decimals")
    try:
        pair = P1LogPair.from_coefficients(coeffs)
    except InvalidLogPair as exc:
        raise CliError(EXIT_LOG_PAIR, "invalid log pair (%s)" % exc) from exc
    rep = analyze(pair)
    out = _envelope("p1 analyze", {"coeffs": qvec(coeffs)})
    a = pair.coefficients
    out["p1"] = {
        "coefficients": qvec(a),
        "input_positions": [i + 1 for i in pair.input_positions],
        "degree": q(pair.degree),
        "verdict": rep.verdict.value,
        "margin": q(rep.margin),
        "destabilizer": _point_label(rep.destabilizer) if rep.destabilizer is not None else None,
        "largest_coefficient": q(a[0] if a else 0),
        "sum_of_others": q(sum(a[1:], Fraction(0))),
        "points": [
            {"point": _point_label(p.which), "coefficient": q(p.coefficient), "A": q(p.A),
             "tau": q(p.tau), "beta": q(p.beta), "j": q(p.j), "ratio": q(p.ratio)}
            for p in rep.points
        ],
    }
    summary = "(P1, %s): %s, margin %s" % (" + ".join("%s p" % q(x) for x in a) or "0",
                                          rep.verdict.value, q(rep.margin))
    return out, summary, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kstab", description="Valuative K-stability calculator")
    parser.add_argument("--version", action="version", version="kstab " + __version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    top = parser.add_subparsers(dest="family", required=True)

    toric = top.add_parser("toric", help="toric Q-Fano varieties")
    tsub = toric.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, help="JSON file {\"dim\": n, \"rays\": [[...], ...]}")
        p.add_argument("--out", help="write the JSON report here instead of stdout")

    p = tsub.add_parser("analyze", help="invariants of one valuation")
    common(p)
    p.add_argument("--valuation", required=True, help="comma-separated integers, e.g. 1,1")
    p.set_defaults(func=cmd_toric_analyze)

    p = tsub.add_parser("scan", help="all primitive valuations up to a height")
    common(p)
    p.add_argument("--height", type=int, default=2)
    p.set_defaults(func=cmd_toric_scan)

    p = tsub.add_parser("oracle", help="lattice-point Donaldson-Futaki cross-check")
    common(p)
    p.add_argument("--valuation", required=True)
    p.add_argument("--dilates", type=int, default=None, help="number of dilates (default n+4)")
    p.set_defaults(func=cmd_toric_oracle)

    p1 = top.add_parser("p1", help="log Fano pairs on P^1")
    psub = p1.add_subparsers(dest="command", required=True)
    p = psub.add_parser("analyze")
    p.add_argument("--coeffs", required=True, help="e.g. 1/3,1/3,1/3 (empty for bare P^1)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_p1_analyze)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        out, summary, code = args.func(args)
    except CliError as exc:
        print("kstab: error: %s" % exc, file=sys.stderr)
        return exc.code
    text = json.dumps(out, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
