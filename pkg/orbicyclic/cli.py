"""Command-line front end: ``orbicyclic <command>``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any

import colors as clr

from .config import JobConfig, MissingConfigValue, build_group, resolve_config
from .crossprod import (
    classes_report,
    findim_hc_report,
    findim_hh_report,
    hc_graded_report,
    hh_graded_report,
    hp_report,
)
from .exactla import InvariantViolation
from .groups import ActionKind, FiniteGroup, SizeLimitExceeded
from .report import dumps, format_report, format_weyl, report_to_dict, weyl_to_dict, write_json
from .selftest import format_results, run_selftest
from .weyl import CrossCheckMismatch, hp_weyl_formula, weyl_cross_check

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_SIZE = 3
EXIT_INVARIANT = 4


def _group(config: JobConfig) -> FiniteGroup:
    if config.action is None:
        raise MissingConfigValue("action (use --preset or --config)")
    return build_group(config.action, config.limits)


def _emit(doc: dict[str, Any], text: str, args: argparse.Namespace) -> None:
    print(text)
    if getattr(args, "json", None):
        write_json(doc, Path(args.json))
    logger.debug("report document:\n%s", dumps(doc))


def cmd_classes(config: JobConfig, args: argparse.Namespace) -> int:
    """Conjugacy classes, centralizer orders and fixed sets."""
    report = classes_report(_group(config))
    _emit(report_to_dict(report, "classes", config.echo()), format_report(report), args)
    return 0


def cmd_hh(config: JobConfig, args: argparse.Namespace) -> int:
    """Graded Hochschild homology per class."""
    G = _group(config)
    if G.kind is ActionKind.FINDIM:
        report = findim_hh_report(G, config.q_max, config.limits.block)
    else:
        report = hh_graded_report(G, config.q_max, config.D_max, oracle=config.oracle, limit=config.limits.block)
    _emit(report_to_dict(report, "hh", config.echo(), timings=args.timings), format_report(report), args)
    return 0


def cmd_hc(config: JobConfig, args: argparse.Namespace) -> int:
    """Graded cyclic homology per class; q_max bounds the cyclic degree."""
    G = _group(config)
    if G.kind is ActionKind.FINDIM:
        report = findim_hc_report(G, config.q_max, config.limits.block)
    else:
        report = hc_graded_report(G, config.q_max, config.D_max, oracle=config.oracle, limit=config.limits.block)
    _emit(report_to_dict(report, "hc", config.echo(), timings=args.timings), format_report(report), args)
    return 0


def cmd_hp(config: JobConfig, args: argparse.Namespace) -> int:
    """Periodic cyclic homology from fixed-set cohomology."""
    report = hp_report(_group(config))
    _emit(report_to_dict(report, "hp", config.echo(), timings=args.timings), format_report(report), args)
    return 0


def cmd_weyl(config: JobConfig, args: argparse.Namespace) -> int:
    """HP of C[Z^n ⋊ S_n] by partitions, optionally cross-checked."""
    formula = hp_weyl_formula(args.n)
    cross_check = weyl_cross_check(args.n, config.limits.weyl) if args.cross_check else None
    _emit(weyl_to_dict(args.n, formula, cross_check, config.echo()), format_weyl(args.n, formula, cross_check), args)
    if cross_check is False:
        raise CrossCheckMismatch(args.n, "see the per-λ table above")
    return 0


def cmd_selftest(config: JobConfig, args: argparse.Namespace) -> int:
    """Run the built-in checks."""
    results = run_selftest(quick=args.quick)
    print(format_results(results))
    return 0 if all(r.ok for r in results) else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    """Build the CLI argument parser."""
    parser = argparse.ArgumentParser(
        prog="orbicyclic",
        description="Hochschild, cyclic and periodic cyclic homology of crossed products O[X]⋊Γ",
        epilog=(
            "pyproject.toml config:\n"
            "  Defaults can also be set in [tool.orbicyclic]:\n"
            "\n"
            "    [tool.orbicyclic]\n"
            "    q_max = 3\n"
            "    D_max = 4\n"
            "\n"
            "  A --config JSON document overrides pyproject.toml, and CLI flags override both.\n"
            "\n"
            "exit codes: 0 ok, 2 config error, 3 size guard, 4 invariant violation"
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--config", type=Path, default=None, help="JSON job document")
    parser.add_argument("--preset", default=None, help="Named group action, e.g. S2-torus or M2-azumaya")
    parser.add_argument("--q-max", dest="q_max", type=int, default=None, help="Highest homological degree")
    parser.add_argument("--d-max", dest="D_max", type=int, default=None, help="Highest internal degree")
    parser.add_argument("--oracle", action="store_true", default=None, help="Cross-check against the twisted bar complex")
    parser.add_argument("--json", default=None, help="Write the report as JSON to this path")
    parser.add_argument("--timings", action="store_true", help="Include per-class seconds in the JSON report")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for debug output")

    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("classes", help="Conjugacy classes, centralizers and fixed sets")
    sub.add_parser("hh", help="Graded Hochschild homology per class")
    sub.add_parser("hc", help="Graded cyclic homology per class")
    sub.add_parser("hp", help="Periodic cyclic homology per class")

    weyl_p = sub.add_parser("weyl", help="HP of the extended affine Weyl group algebra of type A")
    weyl_p.add_argument("--n", type=int, required=True, help="Rank n ≥ 1")
    weyl_p.add_argument("--cross-check", dest="cross_check", action="store_true", help="Compare with the crossed-product report for S_n on T^n")

    selftest_p = sub.add_parser("selftest", help="Run the built-in invariant suite")
    selftest_p.add_argument("--quick", action="store_true", help="Skip the slow checks")

    return parser


COMMANDS = {
    "classes": cmd_classes,
    "hh": cmd_hh,
    "hc": cmd_hc,
    "hp": cmd_hp,
    "weyl": cmd_weyl,
    "selftest": cmd_selftest,
}


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def run(args: argparse.Namespace) -> int:
    """Resolve the config and dispatch; maps failures to exit codes."""
    try:
        overrides = {"preset": args.preset, "q_max": args.q_max, "D_max": args.D_max, "oracle": args.oracle}
        config = resolve_config(args.config, overrides)
        return COMMANDS[args.command](config, args)
    except SizeLimitExceeded as e:
        print(clr.red(f"Error: {e}"), file=sys.stderr)
        return EXIT_SIZE
    except InvariantViolation as e:
        print(clr.red(f"Error: {e}"), file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as e:
        print(clr.red(f"Error: {e}"), file=sys.stderr)
        return EXIT_CONFIG


def main(argv: list[str] | None = None) -> None:
    """Entry point for the CLI."""
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    raise SystemExit(run(args))


if __name__ == "__main__":
    main()
