"""
Command line front end.

    python -m condbox check powerset --cases 500
    python -m condbox check powerset --mutant complement-no-support-fix
    python -m condbox eval session.cb --instance inst.json
    python -m condbox lp problem.json
    python -m condbox fuzz --rounds 3

Exit codes: 0 when everything holds, 1 when a law fails, 2 on usage or
input errors.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .base import CondError
from .config import get_settings, set_settings
from .dsl import evaluate_source
from .instance import read_instance
from .lp import LPProblem, lp_solve, verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="condbox",
        description="Exact conditional set theory over finite atomic Boolean algebras",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  condbox check all                          # every suite, default cases
  condbox check numbers --seed 7 --json      # one suite, JSON report
  condbox check functions --mutant preimage-on-one
  condbox eval session.cb --instance inst.json
  condbox lp problem.json
  condbox fuzz --rounds 5 --cases 50
        """,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="base seed (default: CONDBOX_SEED or 1)")
    common.add_argument("--cases", type=int, help="cases per suite (default: CONDBOX_CASES or 200)")
    common.add_argument("--atoms-max", type=int, help="largest algebra size (default: 3)")
    common.add_argument("--carrier-max", type=int, help="largest carrier per atom (default: 4)")
    common.add_argument("--digits", type=int, help="decimal digits for approximations (default: 12)")
    common.add_argument("--workers", type=int, help="worker threads (default: 4)")
    common.add_argument("--json", action="store_true", help="print machine-readable JSON")

    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    check = sub.add_parser("check", parents=[common], help="run a law suite (or all)")
    check.add_argument("suite", help="suite name, or 'all'")
    check.add_argument("--mutant", help="run against a named mutant; failures are expected")

    ev = sub.add_parser("eval", parents=[common], help="evaluate a DSL file against an instance")
    ev.add_argument("file", type=Path)
    ev.add_argument("--instance", type=Path, required=True, help="instance JSON")

    lp = sub.add_parser("lp", parents=[common], help="solve an LP given as JSON")
    lp.add_argument("file", type=Path)

    fuzz = sub.add_parser("fuzz", parents=[common], help="every suite over derived seeds")
    fuzz.add_argument("--rounds", type=int, default=3, help="number of derived seeds (default: 3)")

    sub.add_parser("suites", parents=[common], help="list suites and mutants")
    return parser


def _configure(args: argparse.Namespace) -> None:
    settings = get_settings().replace(
        seed=args.seed,
        cases=args.cases,
        atoms_max=args.atoms_max,
        carrier_max=args.carrier_max,
        digits=args.digits,
        workers=args.workers,
    )
    set_settings(settings)
    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _print_json(data) -> None:
    print(json.dumps(data, indent=2))


def _print_report(report, as_json: bool) -> None:
    if as_json:
        _print_json(report.to_dict())
        return
    parts = report.parts or [report]
    for part in parts:
        status = "ok" if part.ok else f"{part.failure_count} failing"
        print(f"{part.suite}: {part.cases} cases, {status}")
        for failure in part.failures:
            where = ", ".join(f"{k}={v}" for k, v in failure.params.to_dict().items() if k != "content_seed")
            print(f"  case {failure.index}: {', '.join(failure.laws)} ({where})")
            if failure.error:
                print(f"    {failure.error}")
    if report.mutant:
        print(f"mutant {report.mutant}: {'caught' if not report.ok else 'NOT caught'}")


def cmd_check(args: argparse.Namespace) -> int:
    from .suites import SuiteRunner

    report = SuiteRunner().run(args.suite, mutant=args.mutant)
    _print_report(report, args.json)
    return EXIT_OK if report.ok else EXIT_FAILURES


def cmd_fuzz(args: argparse.Namespace) -> int:
    from .suites import SuiteRunner

    if args.rounds < 1:
        raise CondError("--rounds must be at least 1")
    report = SuiteRunner().fuzz(args.rounds)
    if args.json:
        _print_json(report.to_dict())
    else:
        for round_report in report.parts:
            print(f"seed {round_report.seed}: {round_report.cases} cases, {round_report.failure_count} failing")
    return EXIT_OK if report.ok else EXIT_FAILURES


def cmd_eval(args: argparse.Namespace) -> int:
    instance = read_instance(args.instance)
    try:
        source = args.file.read_text()
    except OSError as e:
        raise CondError(f"cannot read {args.file}: {e}") from e
    results = evaluate_source(source, instance)
    if args.json:
        _print_json(results)
    else:
        for value in results:
            print(json.dumps(value))
    return EXIT_OK


def cmd_lp(args: argparse.Namespace) -> int:
    try:
        data = json.loads(args.file.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise CondError(f"cannot read {args.file}: {e}") from e
    problem = LPProblem.from_json(data)
    result = lp_solve(problem)
    out = result.to_json()
    out["verified"] = verify(problem, result)
    if args.json:
        _print_json(out)
    else:
        print(f"status: {result.status}")
        for key in ("objective", "x", "duals", "farkas", "ray"):
            if key in out:
                print(f"{key}: {out[key]}")
        print(f"certificate verified: {out['verified']}")
    return EXIT_OK if out["verified"] else EXIT_FAILURES


def cmd_suites(args: argparse.Namespace) -> int:
    from .suites import SuiteRegistry, MUTANTS

    info = {
        "suites": list(SuiteRegistry.get_all_info().values()),
        "mutants": [m.to_dict() for _, m in sorted(MUTANTS.items())],
    }
    if args.json:
        _print_json(info)
    else:
        for suite in info["suites"]:
            print(f"{suite['name']:<10} {suite['description']} ({len(suite['laws'])} laws)")
        for mutant in info["mutants"]:
            print(f"mutant {mutant['name']:<26} {mutant['target']} -> {mutant['suite']}")
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "eval": cmd_eval,
    "lp": cmd_lp,
    "fuzz": cmd_fuzz,
    "suites": cmd_suites,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _configure(args)
        return COMMANDS[args.command](args)
    except CondError as e:
        logger.debug(f"[CLI] {args.command} failed", exc_info=True)
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
