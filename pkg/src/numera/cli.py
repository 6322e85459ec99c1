"""Command-line front end.

Subcommands:

- ``analyze <system> <m>``: verification report for one modulus, as JSON.
- ``dot <system> <m|numlang>``: Graphviz source for the divisibility
  automaton at modulus m, or for the greedy-language automaton itself.
- ``sweep --systems ... --m-min A --m-max B``: one CSV row per (system, m).

A system is a preset name (``fibonacci``, ``lbonacci:<l>``, ``sqrt2plus1``)
or a path to a JSON definition; definitions carrying a
``bertrand_directive`` get their automaton built from the directive and
verified against the system before use.  Exit codes: 0 success, 1 bad
input, 2 a verified invariant failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from numera.automata import Dfa, canonical_form, to_dot
from numera.divisibility import build_divisibility_direct, verify_theorem
from numera.numeration import (
    InvalidSystemError,
    NumerationSystem,
    load_system_definition,
    word_to_string,
)
from numera.numlang import (
    InadmissibleDirectiveError,
    build_bertrand_automaton,
    preset_pair,
    verify_numeration_automaton,
)

DEFAULT_ORACLE_LENGTH = 12
ORACLE_LENGTH_ENV = "NUMERA_ORACLE_LEN"

CSV_COLUMNS = [
    "system",
    "m",
    "k",
    "smith",
    "S",
    "preperiod",
    "period",
    "predicted_infinite",
    "total_states",
    "infinite_states",
    "finite_states",
    "lower_bound",
    "h1",
    "h2",
    "purely_periodic",
    "cross_equivalent",
    "oracle_length",
    "error",
]


class InputError(ValueError):
    """Bad command-line input or system definition (exit code 1)."""


def _oracle_length(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get(ORACLE_LENGTH_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"{ORACLE_LENGTH_ENV} must be an integer, got {env!r}")
    return DEFAULT_ORACLE_LENGTH


def resolve_system(ref: str, verify_length: int) -> tuple[NumerationSystem, Dfa]:
    """Turn a system reference into a (system, greedy automaton) pair.

    Preset names map to their built-in automata.  JSON definitions must
    carry a ``bertrand_directive``; the directive automaton is checked
    against the system's greedy predicate before it is trusted.
    """
    try:
        if ref.startswith(("fibonacci", "lbonacci:", "sqrt2plus1")):
            return preset_pair(ref)
        path = Path(ref)
        if not path.exists():
            raise InputError(f"unknown preset or missing file: {ref}")
        system, directive = load_system_definition(path)
        if directive is None:
            raise InputError(
                f"{ref}: no automaton available; add a bertrand_directive "
                "or use a preset"
            )
        automaton = build_bertrand_automaton(*directive)
        if automaton.alphabet_size != system.alphabet_bound:
            raise InputError(
                f"{ref}: directive alphabet {automaton.alphabet_size} does not "
                f"match system alphabet {system.alphabet_bound}"
            )
        ok, witness = verify_numeration_automaton(automaton, system, verify_length)
        if not ok:
            raise InputError(
                f"{ref}: directive automaton disagrees with the greedy "
                f"predicate on word {word_to_string(witness)!r}"
            )
        return system, automaton
    except (InvalidSystemError, InadmissibleDirectiveError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc))


def _parse_modulus(text: str) -> int:
    try:
        m = int(text)
    except ValueError:
        raise InputError(f"modulus must be an integer, got {text!r}")
    if m < 2:
        raise InputError("modulus must be at least 2")
    return m


def cmd_analyze(args) -> int:
    oracle_length = _oracle_length(None)
    system, automaton = resolve_system(args.system, oracle_length)
    m = _parse_modulus(args.m)
    report = verify_theorem(system, automaton, m, oracle_length)
    print(json.dumps(report.to_json_dict(), indent=2))
    violations = report.violations()
    for violation in violations:
        print(f"violation: {violation}", file=sys.stderr)
    return 2 if violations else 0


def cmd_dot(args) -> int:
    oracle_length = _oracle_length(None)
    system, automaton = resolve_system(args.system, oracle_length)
    if args.target == "numlang":
        rendered = to_dot(canonical_form(automaton))
    else:
        m = _parse_modulus(args.target)
        rendered = to_dot(
            canonical_form(build_divisibility_direct(automaton, system, m))
        )
    if args.out:
        Path(args.out).write_text(rendered)
    else:
        sys.stdout.write(rendered)
    return 0


def _report_row(system_ref: str, report) -> dict:
    data = report.to_json_dict()
    return {
        "system": system_ref,
        "m": data["m"],
        "k": data["k"],
        "smith": ";".join(str(d) for d in data["smith"]),
        "S": data["S"],
        "preperiod": data["period"]["preperiod"],
        "period": data["period"]["period"],
        "predicted_infinite": data["predicted_infinite"],
        "total_states": data["total_states"],
        "infinite_states": data["infinite_states"],
        "finite_states": data["finite_states"],
        "lower_bound": data["lower_bound"],
        "h1": str(data["h1"]).lower(),
        "h2": str(data["h2"]).lower(),
        "purely_periodic": str(data["purely_periodic"]).lower(),
        "cross_equivalent": str(data["cross_equivalent"]).lower(),
        "oracle_length": data["oracle_length"],
        "error": "",
    }


def cmd_sweep(args) -> int:
    if args.m_min < 2:
        raise InputError("--m-min must be at least 2")
    oracle_length = _oracle_length(args.oracle_length)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    failed = False
    for ref in args.systems:
        try:
            system, automaton = resolve_system(ref, oracle_length)
        except InputError as exc:
            for m in range(args.m_min, args.m_max + 1):
                writer.writerow({"system": ref, "m": m, "error": str(exc)})
            failed = True
            continue
        for m in range(args.m_min, args.m_max + 1):
            try:
                report = verify_theorem(system, automaton, m, oracle_length)
                row = _report_row(ref, report)
                violations = report.violations()
                if violations:
                    row["error"] = "; ".join(violations)
                    failed = True
                writer.writerow(row)
            except Exception as exc:  # keep sweeping, record the failure
                writer.writerow({"system": ref, "m": m, "error": str(exc)})
                failed = True
    output = buffer.getvalue()
    if args.out:
        Path(args.out).write_text(output)
    else:
        sys.stdout.write(output)
    return 2 if failed else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="numera",
        description="Automata and state-count analysis for greedy "
        "linear numeration systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser(
        "analyze", help="verification report for one (system, m), as JSON"
    )
    analyze.add_argument("system", help="preset name or JSON definition path")
    analyze.add_argument("m", help="modulus (at least 2)")
    analyze.set_defaults(handler=cmd_analyze)

    dot = sub.add_parser("dot", help="Graphviz source for an automaton")
    dot.add_argument("system", help="preset name or JSON definition path")
    dot.add_argument(
        "target", help="a modulus for the divisibility automaton, or 'numlang'"
    )
    dot.add_argument("--out", help="write to a file instead of stdout")
    dot.set_defaults(handler=cmd_dot)

    sweep = sub.add_parser("sweep", help="CSV report over a modulus range")
    sweep.add_argument("--systems", nargs="+", required=True)
    sweep.add_argument("--m-min", type=int, required=True)
    sweep.add_argument("--m-max", type=int, required=True)
    sweep.add_argument(
        "--oracle-length",
        type=int,
        default=None,
        help=f"word-length bound for the oracle check "
        f"(default {DEFAULT_ORACLE_LENGTH}, env {ORACLE_LENGTH_ENV})",
    )
    sweep.add_argument("--out", help="write the CSV to a file instead of stdout")
    sweep.set_defaults(handler=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
