"""Command-line interface.

Subcommands:
  classify      conjugacy class of a projective matrix
  simplify      reduce a group-ring element under a hypothesis set
  derive        run a derivation script (TOML) and print its log
  word-search   word certificate for a matrix over named generators
  numeric-check evaluate a relation on the level-11 eta-product newform
  verify-paper  rerun the bundled reference derivations against fixtures

Exit codes: 0 success, 1 verification or derivation failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cases import CASE_NAMES, report_json, report_text, run_all
from .groupring import GroupRingElement
from .hypotheses import HypothesisSet, reduce_element
from .matrices import classify, in_gamma0, tau
from .newform import (
    DEFAULT_POINTS,
    PointTooLow,
    UnresolvedSymbol,
    check_relation,
    eta_square_11,
    measure_fricke_sign,
)
from .scripts import ScriptParseError, StepFailed, parse_matrix_expr, run_script_file
from .words import membership_report, word_to_str

if sys.version_info >= (3, 11):
    from tomllib import TOMLDecodeError
else:
    from tomli import TOMLDecodeError


class CliError(Exception):
    """Bad input; message goes to stderr, exit code 2."""


def _parse_matrix_arg(text: str, level: int | None):
    try:
        return parse_matrix_expr(text, level if level is not None else 1)
    except (ValueError, KeyError) as exc:
        raise CliError(f"line 1, column 1: cannot parse matrix {text!r}: {exc}")


def _load_element(path: str) -> GroupRingElement:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        return GroupRingElement.from_json(text)
    except OSError as exc:
        raise CliError(str(exc))
    except (ValueError, KeyError, TypeError) as exc:
        if isinstance(exc, json.JSONDecodeError):
            raise CliError(
                f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
            )
        raise CliError(f"{path}: not a valid element file: {exc}")


def _hypotheses(level: int, invariant_names, depth: int | None) -> HypothesisSet:
    kw = {} if depth is None else {"search_depth": depth}
    hyp = HypothesisSet.initial(level, **kw)
    for name in invariant_names or []:
        if name in ("T", "H"):
            continue
        hyp = hyp.with_invariant(parse_matrix_expr(name, level), name)
    return hyp


def _emit(obj, as_json: bool, text: str):
    if as_json:
        print(json.dumps(obj, indent=2))
    else:
        print(text)


# -- subcommands --------------------------------------------------------------


def cmd_classify(args) -> int:
    m = _parse_matrix_arg(args.matrix, args.level)
    cls = classify(m)
    obj = {
        "matrix": str(m),
        "det": m.det,
        "trace": m.trace,
        "tau": str(tau(m)),
        "kind": cls.kind,
        "order": cls.order,
    }
    lines = [
        f"matrix: {m}",
        f"det = {m.det}, trace = {m.trace}, tau = {tau(m)}",
        f"class: {cls.kind}, order {cls.order}",
    ]
    if args.level is not None:
        obj["in_gamma0"] = in_gamma0(m, args.level)
        lines.append(f"in Gamma0({args.level}): {obj['in_gamma0']}")
    _emit(obj, args.json, "\n".join(lines))
    return 0


def cmd_simplify(args) -> int:
    x = _load_element(args.file)
    hyp = _hypotheses(args.level, args.invariant, args.depth)
    red = reduce_element(x, hyp, mode=args.mode)
    obj = {
        "input": str(x),
        "mode": args.mode,
        "reduced": str(red),
        "reduced_element": json.loads(red.to_json()),
        "is_zero": not red.terms,
    }
    _emit(obj, args.json, str(red) if red.terms else "0")
    return 0


def cmd_derive(args) -> int:
    try:
        log = run_script_file(args.script)
    except StepFailed as exc:
        print(f"derivation failed at {exc}", file=sys.stderr)
        return 1
    except (ScriptParseError, TOMLDecodeError, OSError) as exc:
        print(f"error: {args.script}: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(log.to_json())
    else:
        print(log.to_text())
    return 0


def cmd_word_search(args) -> int:
    m = _parse_matrix_arg(args.matrix, args.level)
    hyp = _hypotheses(args.level, args.invariant, args.depth)
    rep = membership_report(m, args.level, hyp, max_len=args.max_len)
    obj = {
        "matrix": str(m),
        "in_gamma0": rep.in_gamma0,
        "word": word_to_str(rep.word) if rep.word else None,
        "kind": rep.matrix_class.kind,
        "order": rep.matrix_class.order,
    }
    _emit(obj, args.json, str(rep))
    return 0 if rep.word is not None else 1


def cmd_numeric_check(args) -> int:
    if args.gamma is not None:
        m = _parse_matrix_arg(args.gamma, 11)
        x = GroupRingElement.one() - GroupRingElement.of(m)
    elif args.file is not None:
        x = _load_element(args.file)
    else:
        raise CliError("give an element file or --gamma MATRIX")
    f = eta_square_11()
    try:
        sign, dev = measure_fricke_sign(f)
        residual = check_relation(f, x, DEFAULT_POINTS)
    except (PointTooLow, UnresolvedSymbol) as exc:
        raise CliError(str(exc))
    ok = residual <= args.tol
    obj = {
        "element": str(x),
        "fricke_sign": sign,
        "fricke_deviation": dev,
        "residual": residual,
        "tol": args.tol,
        "ok": ok,
    }
    text = (
        f"element: {x}\n"
        f"measured Fricke sign: {sign} (deviation {dev:.2e})\n"
        f"max residual over {len(DEFAULT_POINTS)} points: {residual:.3e} "
        f"({'<=' if ok else '>'} tol {args.tol:g})"
    )
    _emit(obj, args.json, text)
    return 0 if ok else 1


def cmd_verify_paper(args) -> int:
    names = args.case or None
    for name in names or []:
        if name not in CASE_NAMES:
            raise CliError(
                f"unknown case {name!r}; known: {', '.join(CASE_NAMES)}"
            )
    reports = run_all(names)
    if args.json:
        print(report_json(reports, indent=2))
    else:
        print(report_text(reports, verbose=args.verbose))
    return 0 if all(r.passed for r in reports) else 1


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="heckelab", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    def add_json(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("classify", help="conjugacy class of a matrix")
    p.add_argument("matrix", help='matrix literal "[a b; c d]" (surds allowed)')
    p.add_argument("--level", type=int, default=None, help="also test Gamma0 membership")
    add_json(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("simplify", help="reduce a group-ring element")
    p.add_argument("file", help="element as JSON, or - for stdin")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--mode", choices=("minimize", "coset", "merge"), default="minimize")
    p.add_argument("--invariant", action="append", metavar="M",
                   help="extra known invariant (name like W, M2, or a literal); repeatable")
    p.add_argument("--depth", type=int, default=None, help="left-word search depth")
    add_json(p)
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser("derive", help="run a derivation script")
    p.add_argument("script", help="TOML script file")
    add_json(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("word-search", help="word certificate over generators")
    p.add_argument("matrix")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--invariant", action="append", metavar="M",
                   help="extra generator beyond T and H; repeatable")
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--depth", type=int, default=None)
    add_json(p)
    p.set_defaults(func=cmd_word_search)

    p = sub.add_parser("numeric-check",
                       help="evaluate a relation on the level-11 newform")
    p.add_argument("file", nargs="?", default=None, help="element as JSON, or - for stdin")
    p.add_argument("--gamma", default=None, metavar="MATRIX",
                   help="check 1 - MATRIX instead of reading a file")
    p.add_argument("--tol", type=float, default=1e-8)
    add_json(p)
    p.set_defaults(func=cmd_numeric_check)

    p = sub.add_parser("verify-paper", help="rerun the bundled reference derivations")
    p.add_argument("--case", action="append", metavar="NAME",
                   help=f"run one case (repeatable); known: {', '.join(CASE_NAMES)}")
    p.add_argument("--verbose", action="store_true", help="show passing checks too")
    add_json(p)
    p.set_defaults(func=cmd_verify_paper)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
