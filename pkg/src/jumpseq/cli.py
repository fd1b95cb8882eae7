"""Command-line front end.

Every command reads JSON inputs, runs the corresponding library
operation and writes a deterministic JSON report (sorted keys, explicit
seed).  Exit codes: 0 success, 2 ladder contradiction, 3 insufficient
depth, 64 usage/parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import is_dataclass
from fractions import Fraction

from .blowup import initial_chart, monoidal_sequence, single_quadratic_transform
from .engine import (
    ValuationSpec,
    build_jumping_sequence,
    expand,
    extract_independent,
    value,
    verify_generating_sequence,
    verify_minimality,
)
from .errors import InsufficientDepthError, JumpseqError
from .euclid import bezout, euclid_data
from .extension import (
    MonomialExtension,
    build_dual_sequences,
    classify_toroidal_form,
    discrete_branch_report,
    ladder,
)
from .fields import Fp
from .poly import BivarPoly

EXIT_OK = 0
EXIT_CONTRADICTION = 2
EXIT_DEPTH = 3
EXIT_USAGE = 64


def _jsonable(obj):
    """Recursively convert library objects into plain JSON data."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Fp):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if hasattr(obj, "to_json"):
        return _jsonable(obj.to_json())
    if is_dataclass(obj):
        return {k: _jsonable(v) for k, v in vars(obj).items()}
    return str(obj)


def _emit(report, args) -> None:
    data = _jsonable(report)
    if getattr(args, "format", "json") == "text":
        out = _render_text(data)
    else:
        out = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _render_text(data, indent=0) -> str:
    pad = "  " * indent
    if isinstance(data, dict):
        lines = []
        for k in sorted(data):
            v = data[k]
            if isinstance(v, (dict, list)):
                lines.append("%s%s:" % (pad, k))
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append("%s%s: %s" % (pad, k, v))
        return "\n".join(lines) + ("\n" if indent == 0 else "")
    if isinstance(data, list):
        return "\n".join(_render_text(v, indent) for v in data)
    return "%s%s" % (pad, data)


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _load_spec(path) -> ValuationSpec:
    return ValuationSpec.from_json(_load_json(path))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_genseq(args):
    spec = _load_spec(args.spec)
    js = build_jumping_sequence(spec)
    ind = extract_independent(js)
    _emit({"sequence": js.to_json(), "independent": ind.to_json()}, args)
    return EXIT_OK


def cmd_eval(args):
    spec = _load_spec(args.spec)
    js = build_jumping_sequence(spec)
    f = BivarPoly.from_json(spec.field, _load_json(args.poly))
    v = value(f, js)
    _emit({"value": v}, args)
    return EXIT_OK


def cmd_expand(args):
    spec = _load_spec(args.spec)
    js = build_jumping_sequence(spec)
    f = BivarPoly.from_json(spec.field, _load_json(args.poly))
    _emit(expand(f, js), args)
    return EXIT_OK


def cmd_euclid(args):
    ed = euclid_data(args.p, args.q)
    a, b = bezout(args.p, args.q)
    _emit({"N": ed.N, "f": ed.f, "epsilon": ed.epsilon, "bezout": [a, b]}, args)
    return EXIT_OK


def cmd_blowup(args):
    spec = _load_spec(args.spec)
    js = build_jumping_sequence(spec)
    chart = initial_chart(spec.field, (Fraction(1), js.beta[1]))
    charts = [chart]
    for _ in range(args.steps):
        chart = single_quadratic_transform(chart, js=js)
        charts.append(chart)
    _emit({"charts": charts}, args)
    return EXIT_OK


def cmd_monoidal(args):
    spec = _load_spec(args.spec)
    js = build_jumping_sequence(spec)
    ind = extract_independent(js)
    depth = args.depth if args.depth is not None else ind.levels
    report = monoidal_sequence(js, ind, depth)
    _emit({"levels": report, "pass": all(r["pass"] for r in report)}, args)
    return EXIT_OK


def cmd_dual(args):
    ext = MonomialExtension.from_json(_load_json(args.ext))
    duals = build_dual_sequences(ext, k=args.depth)
    _emit(duals, args)
    return EXIT_OK


def cmd_ladder(args):
    ext = MonomialExtension.from_json(_load_json(args.ext))
    cert = ladder(ext, depth=args.depth)
    _emit(cert, args)
    if cert.outcome.get("kind") == "contradiction":
        return EXIT_CONTRADICTION
    return EXIT_OK


def cmd_verify(args):
    spec = _load_spec(args.spec)
    js = build_jumping_sequence(spec)
    gamma_max = Fraction(args.gamma_max)
    report = verify_generating_sequence(js, gamma_max, args.deg_bound,
                                        samples=args.samples, seed=args.seed)
    ind = extract_independent(js)
    minimality = []
    if spec.mode == "nondiscrete" and ind.levels:
        for k in range(ind.levels + 1):
            minimality.append(verify_minimality(ind, k))
    _emit({"checks": report, "minimality": minimality,
           "pass": all(r["pass"] for r in report)}, args)
    return EXIT_OK


def cmd_classify(args):
    ext = MonomialExtension.from_json(_load_json(args.ext))
    spec = ext.base_spec
    if spec.mode == "discrete":
        form = classify_toroidal_form({"discrete": True})
        report = {"form": form, "discrete_branch": discrete_branch_report(ext)}
    else:
        cert = ladder(ext)
        if cert.outcome.get("kind") == "contradiction":
            _emit({"outcome": cert.outcome}, args)
            return EXIT_CONTRADICTION
        js = build_jumping_sequence(spec)
        ind = extract_independent(js)
        minimal = ind.pbar[0] != 1
        form = classify_toroidal_form({}, cert.outcome, minimal)
        report = {"form": form, "ladder": cert}
    _emit(report, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jumpseq",
        description="Generating sequences of rational valuations: "
                    "construction, blow-up simulation, certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.add_argument("--out", default=None, help="write the report to a file")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("genseq", help="build a jumping-polynomial sequence")
    p.add_argument("spec")
    common(p)
    p.set_defaults(func=cmd_genseq)

    p = sub.add_parser("eval", help="value of a polynomial")
    p.add_argument("spec")
    p.add_argument("poly")
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("expand", help="standard-form expansion of a polynomial")
    p.add_argument("spec")
    p.add_argument("poly")
    common(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("euclid", help="Euclidean chain data and Bezout pair")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    common(p)
    p.set_defaults(func=cmd_euclid)

    p = sub.add_parser("blowup", help="iterate single quadratic transforms")
    p.add_argument("spec")
    p.add_argument("--steps", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_blowup)

    p = sub.add_parser("monoidal", help="chunk-boundary monomial certificates")
    p.add_argument("spec")
    p.add_argument("--depth", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_monoidal)

    p = sub.add_parser("dual", help="dual jumping sequences of an extension")
    p.add_argument("ext")
    p.add_argument("--depth", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("ladder", help="stable-form ladder certificate")
    p.add_argument("ext")
    p.add_argument("--depth", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_ladder)

    p = sub.add_parser("verify", help="generating-sequence verification battery")
    p.add_argument("spec")
    p.add_argument("--gamma-max", default="5")
    p.add_argument("--deg-bound", type=int, default=8)
    p.add_argument("--samples", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="toroidal-form classification")
    p.add_argument("ext")
    common(p)
    p.set_defaults(func=cmd_classify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0,) else 0
    try:
        return args.func(args)
    except InsufficientDepthError as e:
        sys.stdout.write(json.dumps(
            {"error": "insufficient-depth", "message": str(e),
             "extra_depth": e.extra_depth}, sort_keys=True, indent=2) + "\n")
        return EXIT_DEPTH
    except (OSError, json.JSONDecodeError, KeyError) as e:
        sys.stderr.write("input error: %s\n" % e)
        return EXIT_USAGE
    except JumpseqError as e:
        sys.stderr.write("error: %s\n" % e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
