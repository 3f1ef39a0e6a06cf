"""
Command-line interface for the functional index coding toolkit.

Usage:
    ficoder validate --instance pentagon.json
    ficoder graph --instance pentagon.json --dot pentagon.dot
    ficoder color --instance pair_exchange_f2.json
    ficoder synthesize --instance majority_helper.json --output code.txt
    ficoder bounds --instance pentagon.json --n 2 --format json
    ficoder verify --instance pentagon.json --assignment code.txt
    ficoder ecc-concat --instance nonlinear_ecc.json --outer repetition --delta 1
    ficoder simulate --instance nonlinear_ecc.json --matrix m1.txt --delta 1
    ficoder --list-rules
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from ficoder.commands import COMMANDS, EXIT_USAGE, RunConfig, run_command
from ficoder.ecc import BUILTIN_CODES
from ficoder.exceptions import ProfileConfigError, ProfileNotFoundError
from ficoder.formatters import RichFormatter, render_report
from ficoder.models.report import ERROR_CODE_DESCRIPTIONS, severity_for_code
from ficoder.profiles import get_available_profiles, load_profile_config

logger = logging.getLogger("ficoder")


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    """One RichHandler on stderr for the whole package."""
    level = logging.DEBUG if verbose else logging.ERROR if quiet else logging.WARNING
    handler = RichHandler(console=Console(stderr=True), show_time=False, show_path=False)
    logger.handlers[:] = [handler]
    logger.setLevel(level)
    logger.propagate = False


def print_rules_list(fmt: str) -> None:
    rules = [
        {"code": code, "severity": severity_for_code(code).value, "description": desc}
        for code, desc in sorted(ERROR_CODE_DESCRIPTIONS.items())
    ]
    if fmt == "rich":
        RichFormatter().print_rules(rules)
        return
    print("Instance checks:")
    for rule in rules:
        print(f"  {rule['code']} ({rule['severity']}): {rule['description']}")


def print_profiles_list(fmt: str) -> None:
    profiles = []
    for name in get_available_profiles():
        try:
            description = load_profile_config(name).description
        except ProfileConfigError as e:
            description = f"invalid: {e}"
        profiles.append({"name": name, "description": description})
    if fmt == "rich":
        RichFormatter().print_profiles(profiles)
        return
    print("Available profiles:")
    for profile in profiles:
        print(f"  - {profile['name']}: {profile['description']}")


def parse_partition(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    return [int(part) for part in text.split(",") if part.strip()]


def write_artifacts(report, parsed: argparse.Namespace) -> None:
    targets = {"dot": parsed.dot, "output": parsed.output}
    for name, path in targets.items():
        if path is None:
            continue
        content = report.artifacts.get(name)
        if content is None:
            logger.warning("%s produces no %s artifact; %s not written", report.command, name, path)
            continue
        Path(path).write_text(content, encoding="utf-8")
        logger.info("wrote %s", path)


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    parser = argparse.ArgumentParser(
        prog="ficoder",
        description="Functional index coding: confusion graphs, optimal codes and error correction",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exit codes:
  0  success / verification passed
  1  verification failed
  2  usage or parse error
  3  search budget exhausted (bounds are still reported)

Examples:
  ficoder validate --instance fixtures/pentagon.json
  ficoder color --instance fixtures/two_receiver_majority.json --dot c.dot
  ficoder synthesize --instance fixtures/pentagon.json --partition 1,1
  ficoder bounds --instance fixtures/pentagon.json --n 2 --format json
  ficoder ecc-concat --instance fixtures/nonlinear_ecc.json --outer repetition
        """,
    )

    parser.add_argument("command", nargs="?", choices=COMMANDS, help="Command to run")
    parser.add_argument("--instance", "-i", type=Path, metavar="FILE", help="Instance file (JSON)")
    parser.add_argument("--n", type=int, default=1, metavar="INT", help="Block length (lift the instance)")
    parser.add_argument(
        "--budget",
        type=int,
        metavar="NODES",
        help="Search node budget (trial budget for simulate)",
    )
    parser.add_argument("--delta", type=int, metavar="INT", help="Number of symbol errors to correct")
    parser.add_argument("--outer", choices=BUILTIN_CODES, help="Outer code for concatenation")
    parser.add_argument("--assignment", "-a", type=Path, metavar="FILE", help="Code-export file")
    parser.add_argument("--matrix", "-m", type=Path, metavar="FILE", help="Encoding matrix file")
    parser.add_argument("--pattern", metavar="WORD", help="Single error pattern for simulate, e.g. 01000")
    parser.add_argument("--partition", metavar="SIZES", help="Sub-packet partition for synthesize, e.g. 1,1")
    parser.add_argument(
        "--format", "-f",
        choices=["text", "json", "rich"],
        default="text",
        help="Output format (default: text)",
    )
    parser.add_argument("--dot", type=Path, metavar="FILE", help="Write the confusion graph as DOT")
    parser.add_argument("--output", "-o", type=Path, metavar="FILE", help="Write the command artifact")
    parser.add_argument("--profile", "-p", default="default", metavar="NAME", help="Settings profile")
    parser.add_argument("--list-profiles", action="store_true", help="List available settings profiles")
    parser.add_argument("--list-rules", action="store_true", help="List instance checks")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging and notes")
    parser.add_argument("--quiet", "-q", action="store_true", help="Only output on failure")

    return parser


def main(args: list = None) -> int:
    """
    Main CLI entry point.

    Returns:
        Exit code (0 success, 1 verification failure, 2 usage error, 3 timeout)
    """
    parser = create_parser()
    try:
        parsed = parser.parse_args(args)
    except SystemExit as e:
        return int(e.code or 0)

    configure_logging(parsed.verbose, parsed.quiet)

    if parsed.list_profiles:
        print_profiles_list(parsed.format)
        return 0

    if parsed.list_rules:
        print_rules_list(parsed.format)
        return 0

    if parsed.command is None:
        parser.print_help()
        return EXIT_USAGE

    if parsed.instance is None:
        print(f"Error: {parsed.command} needs --instance", file=sys.stderr)
        return EXIT_USAGE

    try:
        config = RunConfig(
            command=parsed.command,
            instance=parsed.instance,
            n=parsed.n,
            budget=parsed.budget,
            delta=parsed.delta,
            outer=parsed.outer,
            assignment=parsed.assignment,
            matrix=parsed.matrix,
            pattern=parsed.pattern,
            partition=parse_partition(parsed.partition),
            dot=parsed.dot,
            output=parsed.output,
            profile=parsed.profile,
        )
    except (ValidationError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        config.settings()
    except (ProfileNotFoundError, ProfileConfigError) as e:
        print(f"Error: {e}", file=sys.stderr)
        print(f"Available profiles: {', '.join(get_available_profiles())}", file=sys.stderr)
        return EXIT_USAGE

    report, code = run_command(config)
    write_artifacts(report, parsed)

    if parsed.quiet and code == 0:
        return code
    if parsed.format == "rich":
        source = None
        if report.validation is not None:
            try:
                source = parsed.instance.read_text(encoding="utf-8")
            except OSError:
                source = None
        RichFormatter().print_report(report, source, parsed.verbose)
    else:
        sys.stdout.write(render_report(report, parsed.format).decode("utf-8"))
    return code


if __name__ == "__main__":
    sys.exit(main())
