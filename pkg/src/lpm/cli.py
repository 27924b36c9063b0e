"""Command line interface.

Subcommands: check, translate, analyze, stats. Data (reports, counts,
translated libraries without -o) goes to stdout; diagnostics go to stderr.

Exit codes: 0 success, 1 type error, 2 parse or I/O error, 3 input outside
the translatable fragment (strict mode), 4 step budget exceeded, 5 internal
defect (a translated library failed its own re-check).

The step budget is 10^7 head steps per operation, overridable with
--budget or the LPM_STEP_BUDGET environment variable.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .errors import (
    BudgetExceeded,
    FeatureViolation,
    KernelError,
    LiftCheckFailure,
    LowerCheckFailure,
    LpmError,
    ParseError,
    PatternError,
    SignatureError,
    TranslateError,
    UnknownConstant,
)
from .kernel import DEFAULT_STEP_BUDGET
from .signature import (
    Declaration,
    Definition,
    Entry,
    RuleEntry,
    SealedTheory,
    Theory,
    empty_theory,
    entry_name,
    validate_entry,
)
from .syntax import SourceFile, parse_library, print_file
from .terms import constants_in
from .theories import coc_theory, stt_theory
from .translate import classify_library, lift_library, lower_library

EXIT_OK = 0
EXIT_TYPE = 1
EXIT_PARSE = 2
EXIT_FRAGMENT = 3
EXIT_BUDGET = 4
EXIT_INTERNAL = 5


def _exit_code(err: Exception) -> int:
    if isinstance(err, BudgetExceeded):
        return EXIT_BUDGET
    if isinstance(err, (ParseError, PatternError, OSError)):
        return EXIT_PARSE
    if isinstance(err, (LiftCheckFailure, LowerCheckFailure)):
        return EXIT_INTERNAL
    if isinstance(err, FeatureViolation):
        return EXIT_FRAGMENT
    if isinstance(err, (KernelError, SignatureError, TranslateError)):
        return EXIT_TYPE
    return EXIT_INTERNAL


def _diag(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _resolve_budget(args) -> int | None:
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get("LPM_STEP_BUDGET")
    return int(env) if env else None


def _load_theory(spec: str, budget: int | None) -> SealedTheory:
    if spec == "stt":
        theory = stt_theory()
    elif spec == "coc":
        theory = coc_theory()
    elif spec == "empty":
        theory = empty_theory()
    else:
        src = parse_library(_read(spec), spec)
        theory = Theory(spec).add_entries(src.entries).seal()
    return theory.with_budget(budget) if budget is not None else theory


def _entry_refs(entry: Entry) -> set[str]:
    match entry:
        case Declaration(_, ty):
            return constants_in(ty)
        case Definition(_, ty, body):
            return constants_in(ty) | constants_in(body)
        case RuleEntry(rule):
            refs: set[str] = {rule.head} | set().union(
                *(constants_in(t) for _, t in rule.varctx), constants_in(rule.rhs)
            )
            from .rewriting import pattern_to_term

            return refs | constants_in(pattern_to_term(rule.lhs, rule.varctx))
    raise AssertionError(entry)


def _check_source_sequential(base: SealedTheory, src: SourceFile):
    """Yields (index, error or None); stops after the first error."""
    builder = Theory(src.path, base=base, step_budget=base.step_budget)
    for i, entry in enumerate(src.entries):
        try:
            builder.add_entry(entry)
        except LpmError as err:
            yield i, err
            return
        yield i, None


def _check_source_parallel(base: SealedTheory, src: SourceFile, jobs: int):
    """Same observable results as sequential checking, in waves of ready entries.

    An entry is ready once every earlier entry it references is settled and
    every earlier rule is in place (rules change conversion globally, so they
    act as barriers; a rule itself waits for its whole prefix). Checking runs
    against immutable snapshots; admission happens in file order afterwards,
    which keeps prefix discipline exact.
    """
    entries = src.entries
    n = len(entries)
    defined_at: dict[str, int] = {}
    for i, e in enumerate(entries):
        if not isinstance(e, RuleEntry) and e.name not in defined_at:
            defined_at[e.name] = i
    rule_indices = [i for i, e in enumerate(entries) if isinstance(e, RuleEntry)]
    refs = [_entry_refs(e) for e in entries]

    def blocked_on(i: int) -> set[int]:
        need = {r for r in rule_indices if r < i}
        if isinstance(entries[i], RuleEntry):
            need |= set(range(i))
        else:
            first = defined_at.get(entries[i].name)
            if first is not None and first < i:
                need.add(first)  # earlier entry with the same name settles first
        for name in refs[i]:
            j = defined_at.get(name)
            if j is not None and j < i:
                need.add(j)
        return need

    admitted: set[int] = set()
    failures: dict[int, LpmError] = {}
    remaining = set(range(n))
    builder = Theory(src.path, base=base, step_budget=base.step_budget)

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        while remaining:
            wave = sorted(i for i in remaining if not (blocked_on(i) & remaining))
            if not wave:
                break
            snapshot = builder.snapshot()

            def validate(i: int):
                if blocked_on(i) & failures.keys():
                    # a dependency failed; sequential checking never reaches i
                    return i, next(iter(failures.values()))
                for name in refs[i]:
                    j = defined_at.get(name)
                    if j is not None and j > i and snapshot.lookup_type(name) is not None:
                        # forward reference admitted out of order: sequential
                        # checking would not resolve this name yet
                        return i, UnknownConstant(name)
                try:
                    validate_entry(snapshot, entries[i])
                    return i, None
                except LpmError as err:
                    return i, err

            for i, err in pool.map(validate, wave):
                remaining.discard(i)
                if err is None:
                    try:
                        builder.admit_unchecked(entries[i])
                        admitted.add(i)
                    except LpmError as dup:
                        failures[i] = dup
                else:
                    failures[i] = err

    first_failure = min(failures) if failures else None
    for i in range(n):
        if first_failure is not None and i >= first_failure:
            yield i, failures[first_failure]
            return
        yield i, None


def cmd_check(args) -> int:
    budget = _resolve_budget(args)
    try:
        base = _load_theory(args.theory, budget)
    except LpmError as err:
        _diag(f"{args.theory}: {err}")
        return _exit_code(err)
    for path in args.files:
        try:
            src = parse_library(_read(path), path)
        except (OSError, LpmError) as err:
            _diag(f"{path}: {err}")
            return EXIT_PARSE
        results = (
            _check_source_parallel(base, src, args.jobs)
            if args.jobs > 1
            else _check_source_sequential(base, src)
        )
        for i, err in results:
            name = entry_name(src.entries[i], i)
            if err is None:
                print(f"{name} OK")
            else:
                print(f"{name} FAIL")
                _diag(f"{path}:{src.spans[i][0]}: {err}")
                return _exit_code(err)
    return EXIT_OK


def cmd_translate(args) -> int:
    budget = _resolve_budget(args)
    try:
        src = parse_library(_read(args.file), args.file)
    except (OSError, LpmError) as err:
        _diag(f"{args.file}: {err}")
        return EXIT_PARSE
    try:
        if args.direction == "stt2coc":
            out_entries = lift_library(src.entries, step_budget=budget)
            report = None
        else:
            result = lower_library(src.entries, best_effort=args.best_effort, step_budget=budget)
            report = result.report
            if not result.complete and not args.best_effort:
                sys.stdout.write(report.render(args.format))
                return EXIT_FRAGMENT
            out_entries = result.entries
    except (LiftCheckFailure, LowerCheckFailure) as err:
        _diag(str(err))
        return EXIT_INTERNAL
    except LpmError as err:
        _diag(f"{args.file}: {err}")
        return _exit_code(err)
    text = print_file(out_entries)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        if report is not None:
            sys.stdout.write(report.render(args.format))
    else:
        sys.stdout.write(text)
        if report is not None:
            sys.stderr.write(report.render(args.format))
    return EXIT_OK


def cmd_analyze(args) -> int:
    budget = _resolve_budget(args)
    theory = coc_theory().with_budget(budget) if budget is not None else coc_theory()
    try:
        src = parse_library(_read(args.file), args.file)
    except (OSError, LpmError) as err:
        _diag(f"{args.file}: {err}")
        return EXIT_PARSE
    try:
        Theory(args.file, base=theory).add_entries(src.entries)
        report = classify_library(src.entries, theory)
    except LpmError as err:
        _diag(f"{args.file}: {err}")
        return _exit_code(err)
    sys.stdout.write(report.render(args.format))
    return EXIT_OK


def _counts_line(entries) -> str:
    counts = (
        ("declarations", sum(isinstance(e, Declaration) for e in entries)),
        ("definitions", sum(isinstance(e, Definition) for e in entries)),
        ("rules", sum(isinstance(e, RuleEntry) for e in entries)),
    )
    parts = [f"{label}: {n}" for label, n in counts if n]
    if not parts:
        parts = [f"{label}: 0" for label, _ in counts]
    return ", ".join(parts)


def cmd_stats(args) -> int:
    budget = _resolve_budget(args)
    for path in args.files:
        try:
            src = parse_library(_read(path), path)
        except (OSError, LpmError) as err:
            _diag(f"{path}: {err}")
            return EXIT_PARSE
        prefix = f"{path}: " if len(args.files) > 1 else ""
        print(prefix + _counts_line(src.entries))
        if args.theory == "coc":
            theory = coc_theory().with_budget(budget) if budget is not None else coc_theory()
            try:
                Theory(path, base=theory).add_entries(src.entries)
            except LpmError as err:
                _diag(f"{path}: {err}")
                return _exit_code(err)
            report = classify_library(src.entries, theory)
            from .translate import Feature

            tallies = {
                "uses_pi": Feature.USES_PI,
                "dependent_arrow": Feature.DEPENDENT_ARROW,
                "dependent_imp": Feature.DEPENDENT_IMP,
            }
            line = ", ".join(
                f"{label}: {sum(1 for r in report if flag in r.direct)}" for label, flag in tallies.items()
            )
            print(prefix + line)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpm", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None, help="head step budget (default 10^7)")

    p = sub.add_parser("check", parents=[common], help="type check a library against a theory")
    p.add_argument("--theory", required=True, help="stt, coc, empty, or a path to a .lpm theory file")
    p.add_argument("--jobs", type=int, default=1, help="check independent entries concurrently")
    p.add_argument("files", nargs="+")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("translate", parents=[common], help="translate a library between the theories")
    p.add_argument("--direction", required=True, choices=["stt2coc", "coc2stt"])
    p.add_argument("--best-effort", action="store_true", help="coc2stt: emit the translatable subset")
    p.add_argument("--format", choices=["tsv", "text"], default="text", help="fragment report format")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("file")
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("analyze", parents=[common], help="report per-entry dependent-feature usage")
    p.add_argument("--format", choices=["tsv", "text"], default="text")
    p.add_argument("file")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("stats", parents=[common], help="count entries (and features with --theory coc)")
    p.add_argument("--theory", choices=["coc"], default=None)
    p.add_argument("files", nargs="+")
    p.set_defaults(fn=cmd_stats)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
