"""Line-oriented command-line interface.

Examples::

    stacksort sort 42513                 # one sorting pass -> 24135
    stacksort sort 42513 --passes 2      # iterate the operator
    stacksort complexity 231             # passes needed -> 2
    stacksort classify 2431              # first matching catalog row
    stacksort forbidden 23514            # obstruction report and bounds
    stacksort census --n 7 --out report.json --class-csv classes.csv
    stacksort verify --n 7               # formulas vs a fresh census
    stacksort fit --k 2 --data 4=8 --data 5=23

Exit status: 0 on success, 1 when a verification or fit check fails,
2 on usage errors or malformed input.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import census as census_mod
from . import formulas
from .forbidden import complexity_bounds, forbidden_report
from .patterns import builtin_catalog, certified_class, format_row
from .words import complexity, descents, format_word, parse_word, stack_sort_pass


def _word_arg(text: str):
    try:
        return parse_word(text)
    except ValueError as exc:
        raise SystemExit(f"stacksort: {exc}") from None


def _cmd_sort(args) -> int:
    w = _word_arg(args.word)
    if args.passes < 0:
        print("stacksort: --passes must be >= 0", file=sys.stderr)
        return 2
    for _ in range(args.passes):
        w = stack_sort_pass(w)
    print(format_word(w))
    return 0


def _cmd_complexity(args) -> int:
    w = _word_arg(args.word)
    try:
        print(complexity(w))
    except ValueError as exc:
        print(f"stacksort: {exc}", file=sys.stderr)
        return 2
    return 0


def _cmd_descents(args) -> int:
    print(descents(_word_arg(args.word)))
    return 0


def _fmt_witness(wit) -> str:
    if wit is None:
        return "none"
    b, c, a = wit
    return f"B={{{' '.join(map(str, b))}}} c={c} a={a}"


def _cmd_forbidden(args) -> int:
    w = _word_arg(args.word)
    rep = forbidden_report(w)
    lower, upper = complexity_bounds(w)
    print(f"word: {format_word(w)}")
    print(f"max_order: {rep.max_order}")
    print(f"max_uninterrupted_order: {rep.max_uninterrupted_order}")
    print(f"witness: {_fmt_witness(rep.witness)}")
    print(f"uninterrupted_witness: {_fmt_witness(rep.uninterrupted_witness)}")
    print(f"lower_bound: {lower}")
    print(f"upper_bound: {upper}")
    return 0


def _cmd_classify(args) -> int:
    w = _word_arg(args.word)
    try:
        label = builtin_catalog().classify(w)
    except ValueError as exc:
        print(f"stacksort: {exc}", file=sys.stderr)
        return 2
    if label is None:
        print("none")
    else:
        print(label)
        if args.explain:
            print(f"certified_complexity: {certified_class(label, len(w))}")
    return 0


def _cmd_catalog(args) -> int:
    for row in builtin_catalog().rows:
        print(format_row(row))
    return 0


def _run_or_load(args) -> census_mod.Census:
    if getattr(args, "census", None):
        c = census_mod.load_census(args.census)
        if args.n is not None and args.n != c.n:
            raise SystemExit(
                f"stacksort: census file has n={c.n}, but --n {args.n} was given")
        return c
    if args.n is None:
        raise SystemExit("stacksort: need --n or --census FILE")
    return census_mod.run_census(
        args.n,
        shard_count=getattr(args, "shards", None),
        jobs=getattr(args, "jobs", 1),
        checkpoint_dir=getattr(args, "checkpoint", None),
        resume=getattr(args, "resume", False),
    )


def _cmd_census(args) -> int:
    c = census_mod.run_census(
        args.n,
        shard_count=args.shards,
        jobs=args.jobs,
        checkpoint_dir=args.checkpoint,
        resume=args.resume,
    )
    print(f"n: {c.n}")
    for cls, v in enumerate(c.counts_by_complexity):
        print(f"class {cls}: {v}")
    print(f"total: {sum(c.counts_by_complexity)}")
    print(f"checksum: {c.checksum}")
    if args.out:
        report = formulas.verify_census(c)
        census_mod.save_report(c, args.out, verify=report)
        print(f"report: {args.out}")
    if args.class_csv:
        with open(args.class_csv, "w", encoding="utf-8") as fh:
            fh.write(census_mod.class_counts_csv(c))
        print(f"class_csv: {args.class_csv}")
    if args.row_csv:
        with open(args.row_csv, "w", encoding="utf-8") as fh:
            fh.write(census_mod.row_counts_csv(c))
        print(f"row_csv: {args.row_csv}")
    return 0


def _cmd_verify(args) -> int:
    c = _run_or_load(args)
    report = formulas.verify_census(c)
    for chk in report.checks:
        tag = " (conjectural)" if chk.conjectural else ""
        if chk.ok:
            print(f"PASS {chk.name}{tag}: {chk.actual} == {chk.expected}")
        else:
            print(f"FAIL {chk.name}{tag}: expected {chk.expected}, got {chk.actual}")
    bad = len(report.failures)
    print(f"checked {len(report.checks)} values for n={c.n}: "
          + ("all pass" if bad == 0 else f"{bad} FAILED"))
    return 0 if bad == 0 else 1


def _cmd_fit(args) -> int:
    data = {}
    for path in args.census or ():
        c = census_mod.load_census(path)
        if c.n < 2 * args.k:
            raise SystemExit(
                f"stacksort: census n={c.n} is below the k={args.k} "
                f"fit range (needs n >= {2 * args.k})")
        data[c.n] = c.counts_by_complexity[c.n - args.k]
    for item in args.data or ():
        try:
            left, right = item.split("=", 1)
            data[int(left)] = int(right)
        except ValueError:
            raise SystemExit(f"stacksort: bad --data {item!r}, want n=count")
    try:
        fit = formulas.fit_binomial(args.k, data, degree=args.degree)
    except ValueError as exc:
        raise SystemExit(f"stacksort: {exc}")
    print(f"k: {fit.k}")
    print(f"degree: {fit.degree}")
    print("data: " + " ".join(f"{n}={data[n]}" for n in fit.ns))
    print("coeffs: " + " ".join(str(a) for a in fit.coeffs))
    print(f"prefactor_exact: {'yes' if fit.prefactor_exact else 'no'}")
    print(f"consistent: {'yes' if fit.consistent else 'no'}")
    print(f"natural: {'yes' if fit.natural else 'no'}")
    if fit.consistent and fit.natural:
        terms = " + ".join(
            f"{a}*C(n-{2 * fit.k},{i})" for i, a in enumerate(fit.coeffs))
        print(f"formula: {fit.k - 1}! (n-{fit.k + 1})! / {2 * fit.k - 2}! * [{terms}]")
    return 0 if fit.consistent else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="stacksort",
        description="Stack-sorting complexity: operator, classifier, census.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sort", help="apply the stack-sorting operator")
    s.add_argument("word")
    s.add_argument("--passes", type=int, default=1)
    s.set_defaults(fn=_cmd_sort)

    s = sub.add_parser("complexity", help="number of passes to reach identity")
    s.add_argument("word")
    s.set_defaults(fn=_cmd_complexity)

    s = sub.add_parser("descents", help="count descents of a word")
    s.add_argument("word")
    s.set_defaults(fn=_cmd_descents)

    s = sub.add_parser("forbidden", help="obstruction report and bounds")
    s.add_argument("word")
    s.set_defaults(fn=_cmd_forbidden)

    s = sub.add_parser("classify", help="first matching catalog row")
    s.add_argument("word")
    s.add_argument("--explain", action="store_true",
                   help="also print the certified complexity")
    s.set_defaults(fn=_cmd_classify)

    s = sub.add_parser("catalog", help="print the built-in catalog rows")
    s.set_defaults(fn=_cmd_catalog)

    s = sub.add_parser("census", help="exhaustively tally all words of length n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--shards", type=int, default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", help="write a JSON report")
    s.add_argument("--checkpoint", help="directory for per-shard checkpoints")
    s.add_argument("--resume", action="store_true",
                   help="reuse matching checkpoint files")
    s.add_argument("--class-csv", dest="class_csv")
    s.add_argument("--row-csv", dest="row_csv")
    s.set_defaults(fn=_cmd_census)

    s = sub.add_parser("verify", help="check counting formulas against a census")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--census", help="verify a saved report instead of recomputing")
    s.add_argument("--shards", type=int, default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(fn=_cmd_verify)

    s = sub.add_parser("fit", help="fit counts to the binomial family shape")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--census", action="append",
                   help="take a data point from a saved report (repeatable)")
    s.add_argument("--data", action="append", metavar="N=COUNT",
                   help="explicit data point (repeatable)")
    s.add_argument("--degree", type=int, default=None)
    s.set_defaults(fn=_cmd_fit)

    return p


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 2
        raise
    except census_mod.CensusSoundnessError as exc:
        print(f"stacksort: soundness failure: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"stacksort: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
