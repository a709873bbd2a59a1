"""Command-line front end.

Exit codes: 0 success (or identity confirmed), 1 numerical check failed,
2 usage error.  Every command prints one JSON document on stdout; ``--out``
writes the same bytes to a file as well.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import evaluator
from .algebra import verify_duality, verify_ohno, verify_sum_formula
from .indices import Index
from .montecarlo import mc_integral
from .report import fraction_text, sci
from .theorems import ParamVector, verify_elo, verify_eq_after, verify_theorem

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _digits(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"digits must be an integer, got {text!r}") from None
    if not 5 <= d <= 200:
        raise argparse.ArgumentTypeError("digits must be in [5, 200]")
    return d


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return v


def _common(p: argparse.ArgumentParser, digits=True):
    if digits:
        p.add_argument("--digits", type=_digits, default=30)
    p.add_argument("--out", help="also write the JSON report to this file")
    p.add_argument(
        "--cache",
        default=os.environ.get("MZVLAB_CACHE"),
        help="zeta value cache file (default: $MZVLAB_CACHE)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mzvlab", description="Verify weighted sum formulas for MZVs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("zeta", help="evaluate one MZV")
    p.add_argument("--index", required=True)
    p.add_argument("--cutoff", type=int, help="use the truncated-series oracle with this many terms")
    _common(p)

    p = sub.add_parser("verify", help="check an identity numerically")
    p.add_argument(
        "identity",
        choices=["t1", "t2", "eq-after", "elo", "sum-formula", "ohno", "duality"],
    )
    p.add_argument("--k", type=_nonneg)
    p.add_argument("--l", type=_nonneg)
    p.add_argument("--mu")
    p.add_argument("--xi")
    p.add_argument("--weight", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--index")
    p.add_argument("--c", type=_nonneg, default=1)
    _common(p)

    p = sub.add_parser("mc", help="Monte-Carlo estimate of the defining integral")
    p.add_argument("--k", type=_nonneg, default=0)
    p.add_argument("--l", type=_nonneg, default=0)
    p.add_argument("--pairs", type=int, required=True)
    p.add_argument("--mu")
    p.add_argument("--xi")
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    _common(p, digits=False)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--out", help="also write the JSON summary to this file")
    return parser


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    sys.stdout.write(text)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.identity} needs {', '.join(missing)}")


def _params(args, arity: int | None = None) -> ParamVector:
    if args.mu is None:
        raise UsageError("--mu is required")
    xi = args.xi if args.xi is not None else ",".join(["1"] * len(args.mu.split(",")))
    try:
        params = ParamVector.parse(args.mu, xi)
        if arity is not None:
            params.require(arity)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return params


def cmd_zeta(args) -> int:
    try:
        index = Index.parse(args.index)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not index.admissible:
        raise UsageError(f"index ({index}) is not admissible: last entry must be >= 2")
    if args.cutoff is not None:
        if args.cutoff < 1:
            raise UsageError("--cutoff must be positive")
        r = evaluator.zeta_naive(index, args.cutoff)
    else:
        r = evaluator.zeta(index, Fraction(1, 10**args.digits))
    payload = {
        "index": str(index),
        "digits": args.digits,
        "value": r.value.decimal(args.digits + 5),
        "err_bound": sci(r.abs_err),
    }
    if args.cutoff is not None:
        payload["cutoff"] = args.cutoff
    _emit(payload, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    which = args.identity
    try:
        if which in ("t1", "t2"):
            _need(args, "k", "l", "mu", "xi")
            report = verify_theorem(which.upper(), args.k, args.l, _params(args, 2 if which == "t1" else 3), args.digits)
        elif which == "eq-after":
            _need(args, "k", "l", "mu")
            mu = _params(args, 2).mu
            report = verify_eq_after(args.k, args.l, mu[0], mu[1], args.digits)
        elif which == "elo":
            _need(args, "k", "l")
            if args.k % 2:
                raise UsageError(f"elo needs even k, got {args.k}")
            report = verify_elo(args.k, args.l, args.digits)
        elif which == "sum-formula":
            _need(args, "weight", "depth")
            report = verify_sum_formula(args.weight, args.depth, args.digits)
        elif which == "ohno":
            _need(args, "index")
            report = verify_ohno(Index.parse(args.index), args.c, args.digits)
        else:
            _need(args, "index")
            report = verify_duality(Index.parse(args.index), args.digits)
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(report.to_dict(), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_mc(args) -> int:
    if args.pairs not in (2, 3):
        raise UsageError(f"--pairs must be 2 or 3, got {args.pairs}")
    if args.mu is None:
        args.mu = ",".join(["1"] * args.pairs)
    params = _params(args, args.pairs)
    try:
        r = mc_integral(args.k, args.l, args.pairs, params, args.samples, args.seed, args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = r.to_dict()
    payload["mu"] = [fraction_text(m) for m in params.mu]
    payload["xi"] = [fraction_text(x) for x in params.xi]
    _emit(payload, args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    results = run_all(echo=lambda line: print(line, file=sys.stderr))
    payload = {
        "criteria": [
            {"criterion": r.number, "title": r.title, "pass": r.passed, "seconds": round(r.seconds, 3), "detail": r.detail}
            for r in results
        ],
        "pass": all(r.passed for r in results),
    }
    _emit(payload, args.out)
    return EXIT_OK if payload["pass"] else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "cache", None):
            evaluator.configure_cache(args.cache)
        return {
            "zeta": cmd_zeta,
            "verify": cmd_verify,
            "mc": cmd_mc,
            "selftest": cmd_selftest,
        }[args.command](args)
    except UsageError as exc:
        sys.stdout.write(json.dumps({"error": str(exc)}) + "\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
