"""Command line: ``lndkit <command> <scenario> [options]``.

``<scenario>`` is a path or the name of a bundled scenario.  Exit codes:
0 success, 1 mathematical verdict (including rejected input), 2 usage or
parse error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys

from ..errors import LNDError
from .report import Report, error_dict
from .runner import run_scenario
from .scenario import COMMANDS, Command, bundled_names, load_path_or_bundled

# subcommand -> options it accepts (mapped onto command parameters)
_OPTIONS = {
    "validate": [],
    "exp": ["derivation", "parameter"],
    "log": ["derivation", "map"],
    "preslice": ["index", "seed"],
    "minimize-q": ["index"],
    "fibers": [],
    "certify-dependence": ["alpha", "coefficients"],
    "crosscheck": ["alphas"],
    "improve-basis": [],
    "coordinatize": ["queries", "basis"],
    "fiber-chart": ["alpha", "queries"],
    "probe-question": ["alpha"],
}

_HELP = {
    "derivation": "derivation name or 1-based position (default 1)",
    "parameter": "adjoin a formal parameter with this name and return exp(parameter * D)",
    "map": "automorphism as 'y=expr; z=expr' (unlisted generators are fixed)",
    "index": "1-based derivation index",
    "seed": "seed element for the pre-slice construction",
    "alpha": "fiber value (rational, e.g. 0 or -3/2)",
    "coefficients": "comma-separated certificate to verify instead of searching",
    "alphas": "comma-separated fiber values (default -2,-1,0,1,2)",
    "queries": "comma-separated elements to express (default: the generators)",
    "basis": "original or improved",
}


_SUMMARY = {
    "validate": "check well-definedness, commuting, nilpotency, rank and the kernel generator",
    "exp": "exponential of a derivation, optionally with a formal parameter",
    "log": "logarithm of a unipotent map or of exp(D)",
    "preslice": "pre-slice from a seed, or every pre-slice from a bounded seed search",
    "minimize-q": "pre-slice with the smallest image polynomial q among searched candidates",
    "fibers": "degenerate fiber values from the rational roots of the q's",
    "certify-dependence": "search for or verify a dependency certificate on a fiber",
    "crosscheck": "compare the q-root test with direct certificates over several fibers",
    "improve-basis": "saturate the derivations to an improved module basis",
    "coordinatize": "global chart in the slices and f (needs constant q's)",
    "fiber-chart": "chart of the fiber f = alpha in the pre-slices",
    "probe-question": "experimental slice search on a degenerate fiber (needs --experimental)",
}


def _global_flags(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--bound", type=int, default=default, help="degree bound for bounded searches")
    parser.add_argument("--cap", type=int, default=default, help="iteration cap for nilpotency checks")
    parser.add_argument(
        "--experimental", action="store_true", default=argparse.SUPPRESS if suppress else False,
        help="enable experimental commands (probe-question)",
    )
    parser.add_argument(
        "--output", choices=("text", "machine"), default=argparse.SUPPRESS if suppress else "text",
        help="text for people, machine for stable JSON",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lndkit",
        description="Commuting locally nilpotent derivations: validation, pre-slices, fibers, charts.",
        epilog=f"bundled scenarios: {', '.join(bundled_names())}",
    )
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common], help=_SUMMARY[name])
        p.add_argument("scenario", help="scenario file or bundled name")
        for opt in _OPTIONS[name]:
            p.add_argument(f"--{opt}", help=_HELP[opt])
    p = sub.add_parser("run", parents=[common], help="run every command listed in a scenario")
    p.add_argument("scenario", help="scenario file or bundled name")
    return parser


def _emit(report, output, stream):
    stream.write(report.to_machine() if output == "machine" else report.to_text())


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        sc = load_path_or_bundled(args.scenario)
    except FileNotFoundError as exc:
        stderr.write(f"lndkit: {exc}\n")
        return 2
    except LNDError as exc:
        stderr.write(f"lndkit: {type(exc).__name__}: {exc}\n")
        if args.output == "machine":
            stdout.write(Report(args.scenario, {}, {"status": "rejected", "error": error_dict(exc)}).to_machine())
        return exc.exit_code
    if args.command == "run":
        commands = None
    else:
        params = {opt: getattr(args, opt) for opt in _OPTIONS[args.command] if getattr(args, opt) is not None}
        commands = [Command(args.command, params)]
    report = run_scenario(sc, commands, bound=args.bound, cap=args.cap, experimental=args.experimental)
    _emit(report, args.output, stdout)
    if report.validation.get("status") == "rejected":
        err = report.validation["error"]
        stderr.write(f"lndkit: scenario {sc.name} rejected: {err['message']}\n")
    return report.exit_code()


def entry_point():
    sys.exit(main())

