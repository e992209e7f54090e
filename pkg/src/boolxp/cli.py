"""Command-line interface: ``boolxp analyze | construct | survey | bound``.

Exit codes: 0 success, 2 validation error, 3 capacity exceeded,
4 a constructed function failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .constructions import (
    ConstructionError,
    bound_exponent,
    build_default,
    build_i2,
    build_i5,
    lower_bound,
    m_for,
    n_for,
    verify,
)
from .issues import ISSUES, IssueReport, classify_issues
from .model import (
    MAX_ARITY,
    CapacityError,
    ExplanationProblem,
    Instance,
    ParseError,
    evaluate,
    mask_to_features,
    read_function,
    write_function,
)
from .search import SurveyScaleError, survey
from .shapley import phi_table, shapley_all
from .xplain import ExplanationSets, explain

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAPACITY = 3
EXIT_VERIFY = 4

# largest 2^e whose decimal expansion `bound` will print (about 315k digits)
BOUND_MAX_EXPONENT = 1 << 20


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_VALIDATION):
        super().__init__(message)
        self.code = code


def rational_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def decimal_str(x: Fraction, places: int = 3) -> str:
    """Round half to even at ``places`` decimals, exactly."""
    scaled = round(x * 10**places)  # Fraction.__round__ is exact banker's rounding
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


def parse_bits(text: str, m: int | None = None, what: str = "instance") -> tuple[int, ...]:
    text = text.strip()
    if not text or any(c not in "01" for c in text):
        raise CliError(f"{what} must be a string of 0/1 characters, got {text!r}")
    if m is not None and len(text) != m:
        raise CliError(f"{what} has {len(text)} bits, expected m={m} (feature 1 first)")
    return tuple(int(c) for c in text)


# --- report assembly -----------------------------------------------------------

def analysis(problem: ExplanationProblem) -> tuple[ExplanationSets, IssueReport]:
    sets = explain(problem)
    sv = shapley_all(problem, phi_table(problem))
    return sets, classify_issues(sv, sets.relevancy)


def build_report(
    command: str,
    problem: ExplanationProblem,
    sets: ExplanationSets,
    report: IssueReport,
    source: str,
    seconds: float,
) -> dict:
    f = problem.function
    witnesses = {}
    for name in ISSUES:
        w = report.witnesses[name]
        witnesses[name] = list(w) if isinstance(w, tuple) else w
    return {
        "command": command,
        "function": {"m": f.arity, "source": source, "ones": int(f.table.sum())},
        "instance": {"point": problem.instance.bits(), "prediction": problem.instance.prediction},
        "shapley": [
            {"feature": i, "exact": rational_str(s), "decimal": decimal_str(s)}
            for i, s in enumerate(report.shapley, 1)
        ],
        "axps": [list(mask_to_features(s)) for s in sets.axps],
        "cxps": [list(mask_to_features(s)) for s in sets.cxps],
        "relevancy": [label.value for label in sets.relevancy],
        "issues": report.flags,
        "witnesses": witnesses,
        "candidates": {
            name: [list(c) if isinstance(c, tuple) else c for c in report.candidates[name]]
            for name in ISSUES
        },
        "timing": {"seconds": round(seconds, 6)},
    }


def _fmt_family(family: list[list[int]]) -> str:
    if not family:
        return "(none)"
    return ", ".join("{" + ",".join(str(i) for i in s) + "}" for s in family)


def render_table(rep: dict) -> str:
    """Per-feature rows: Sv exact and rounded, relevancy, issues the feature takes part in."""
    marks: dict[int, list[str]] = {}
    for name, found in rep["candidates"].items():
        members = set()
        for c in found:
            members.update(c if isinstance(c, list) else [c])
        for i in members:
            marks.setdefault(i, []).append(name)
    inst = rep["instance"]
    lines = [
        f"m = {rep['function']['m']}   instance = {inst['point']} (feature 1 first)   "
        f"prediction = {inst['prediction']}",
        "",
        f"{'feature':>7}  {'Sv':>14}  {'Sv ~':>8}  {'relevancy':<10}  issues",
    ]
    for row, label in zip(rep["shapley"], rep["relevancy"]):
        i = row["feature"]
        lines.append(
            f"{i:>7}  {row['exact']:>14}  {row['decimal']:>8}  {label:<10}  "
            + ",".join(marks.get(i, []))
        )
    fired = [name for name, on in rep["issues"].items() if on]
    lines += [
        "",
        f"AXp's: {_fmt_family(rep['axps'])}",
        f"CXp's: {_fmt_family(rep['cxps'])}",
        f"issues: {', '.join(fired) if fired else '(none)'}",
    ]
    return "\n".join(lines)


def _emit(rep: dict, fmt: str, quiet: bool, extra: list[str] | None = None) -> None:
    if fmt == "json":
        print(json.dumps(rep, indent=2))
        return
    if quiet:
        fired = [name for name, on in rep["issues"].items() if on]
        print(f"issues: {', '.join(fired) if fired else '(none)'}")
    else:
        print(render_table(rep))
    for line in extra or []:
        print(line)


# --- subcommands ---------------------------------------------------------------

def cmd_analyze(args) -> int:
    try:
        f = read_function(args.function)
    except OSError as exc:
        raise CliError(f"cannot read {args.function}: {exc.strerror}") from exc
    except ParseError as exc:
        raise CliError(f"{args.function}: {exc}") from exc
    point = parse_bits(args.instance, f.arity)
    start = time.perf_counter()
    problem = ExplanationProblem(f, Instance(point, evaluate(f, point)))
    sets, report = analysis(problem)
    rep = build_report("analyze", problem, sets, report, args.function, time.perf_counter() - start)
    _emit(rep, args.format, args.quiet)
    return EXIT_OK


def _construct(args):
    issue = args.issue.upper()
    if (args.n is None) == (args.m is None):
        raise CliError("give exactly one of --n or --m")
    n = args.n if args.n is not None else n_for(issue, args.m)
    if n > MAX_ARITY:
        raise CliError(f"n={n} exceeds the arity cap {MAX_ARITY}", EXIT_CAPACITY)
    try:
        m = m_for(issue, n)
        if issue == "I5" and args.center is not None:
            return build_i5(m, parse_bits(args.center, m, "center"))
        if issue == "I2" and args.center is not None:
            return build_i2(m, radius=args.radius, center=parse_bits(args.center, m, "center"))
        if args.center is not None:
            raise CliError("--center applies to i2 and i5 only")
        if args.radius != 1 and issue != "I2":
            raise CliError("--radius applies to i2 only")
        return build_default(issue, n, radius=args.radius, seed_kind=args.seed_kind)
    except ConstructionError as exc:
        raise CliError(str(exc)) from exc


def cmd_construct(args) -> int:
    start = time.perf_counter()
    result = _construct(args)
    problem = result.problem
    sets, report = analysis(problem)
    source = args.out or "<constructed>"
    rep = build_report("construct", problem, sets, report, source, 0.0)
    passed = None
    if args.verify:
        passed, _ = verify(result)
    witness = result.expected_witness
    rep["construction"] = {
        "issue": result.target_issue,
        "builder": result.provenance["builder"],
        "n": result.n,
        "m": result.provenance["m"],
        "expected_witness": list(witness) if isinstance(witness, tuple) else witness,
        "verified": passed,
    }
    if args.out:
        write_function(
            result.function,
            args.out,
            comment=f"{result.provenance['builder']} n={result.n} "
            f"instance={result.instance.bits()} class={result.instance.prediction}",
        )
    rep["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    extra = [f"construction: {result.target_issue} via {result.provenance['builder']}, n = {result.n}"]
    if args.out:
        extra.append(f"wrote {args.out}")
    if passed is not None:
        extra.append(f"verification: {'pass' if passed else 'FAIL'}")
    _emit(rep, args.format, args.quiet, extra)
    if passed is False:
        return EXIT_VERIFY
    return EXIT_OK


def cmd_survey(args) -> int:
    try:
        result = survey(
            args.m,
            sample=args.sample,
            seed=args.seed,
            workers=args.workers,
            check_duality=args.check_duality,
        )
    except SurveyScaleError as exc:
        raise CliError(str(exc)) from exc
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    if args.format == "json":
        out = result.to_dict(timing=False)
        out["timing"] = {"seconds": round(result.elapsed, 6)}
        print(json.dumps(out, indent=2))
        return EXIT_OK
    kind = "exhaustive" if args.sample is None else f"sample={args.sample} seed={args.seed}"
    print(f"m = {result.m} ({kind}): {result.functions_scanned} functions, "
          f"{result.pairs_scanned} instances")
    print(f"{'issue':>5}  {'functions':>10}  {'pairs':>10}")
    for name in ISSUES:
        print(f"{name:>5}  {result.function_counts[name]:>10}  {result.pair_counts[name]:>10}")
    print(f"implication violations: {result.implication_violations}")
    if args.check_duality:
        print(f"duality checks: {result.duality_checked}, failures: {result.duality_failures}")
    print(f"elapsed: {result.elapsed:.3f}s")
    return EXIT_OK


def cmd_bound(args) -> int:
    try:
        e = bound_exponent(args.issue, args.n)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    if e > BOUND_MAX_EXPONENT:
        raise CliError(
            f"bound is about 2^{e}; printing is capped at 2^{BOUND_MAX_EXPONENT}", EXIT_CAPACITY
        )
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    print(lower_bound(args.issue, args.n))
    return EXIT_OK


# --- argument parsing ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="boolxp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="Shapley values, explanations and issues at one instance")
    p.add_argument("--function", required=True, help=".btt truth-table file")
    p.add_argument("--instance", required=True, help="bit string, feature 1 first")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--quiet", action="store_true", help="suppress the table rendering")
    p.set_defaults(func=cmd_analyze)

    issues = [name.lower() for name in ISSUES]
    p = sub.add_parser("construct", help="build a function exhibiting an issue")
    p.add_argument("--issue", required=True, choices=issues)
    p.add_argument("--n", type=int, help="number of features of the constructed function")
    p.add_argument("--m", type=int, help="arity of the seed function(s)")
    p.add_argument("--seed-kind", choices=("conjunction", "disjunction", "projection"),
                   help="seed k1 for i1/i3/i4 (default conjunction)")
    p.add_argument("--radius", type=int, choices=(1, 2), default=1, help="i2 Hamming radius")
    p.add_argument("--center", help="i2/i5 center point, feature 1 first")
    p.add_argument("--out", help="write the function as .btt")
    p.add_argument("--verify", action="store_true", help="exit 4 unless the issue fires")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("survey", help="count issue-exhibiting functions of small arity")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--sample", type=int, help="sample this many random tables instead")
    p.add_argument("--seed", type=int, help="RNG seed for --sample")
    p.add_argument("--workers", type=int, help="process count (default: $BOOLXP_WORKERS or all CPUs)")
    p.add_argument("--check-duality", action="store_true")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("bound", help="lower bound on the number of functions with an issue")
    p.add_argument("--issue", required=True, choices=("i1", "i2", "i3", "i4"))
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_bound)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"boolxp {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except CapacityError as exc:
        print(f"boolxp {args.command}: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
