"""
fb/cli/app.py
─────────────
Command-line front end: argument parsing, dispatch to the verb handlers,
rendering and exit codes.

  0  success
  1  computational failure (cap exceeded, precondition, failed criterion)
  2  usage error (unknown verb or flag, malformed descriptor)
"""

import argparse
import logging
import sys
import time

from cli.commands import COMMANDS, Inputs
from cli.render import Report, render
from cli.verify import FAULTS, SUITES, run_suite
from core.config import (
    APP_NAME, APP_TAGLINE, APP_VERSION, DEFAULT_FORMAT, DEFAULT_SEED, EXIT_FAILURE,
    EXIT_OK, EXIT_USAGE, FORMATS, ORDER_CAP,
)
from core.errors import BurnsideError, DescriptorError

log = logging.getLogger("fb.app")

VERBS = {
    "marks": "table of marks of a group",
    "lattice": "subgroups with classes, normalizers and maximality",
    "classes": "F-conjugacy classes of subgroups and elements",
    "local": "automizers and Out_F of one subgroup",
    "essentials": "F-essential subgroups",
    "stable-basis": "Hermite basis of the stable lattice B(F)",
    "reeh-basis": "Reeh basis of B(F) and its marks",
    "units": "unit group of B(G)",
    "stable-units": "unit group of B(F)",
    "max-units": "units attached to maximal subgroups",
    "classify-maximals": "stable maximal units vs strongly closed maximals",
    "star": "star product a*b of B(G) with B(F)",
    "transfer": "transfer B(F) -> B(G)",
    "witness": "G-set restricting to a stable element, if any",
    "normalizer-report": "unit conditions comparing G with N_G(S)",
    "bouc-check": "restriction / tensor induction on units for a normal Sylow",
    "verify": "run the acceptance suite",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", help="catalog name, catalog:<name>, or JSON descriptor")
    common.add_argument("--fusion", help="frobenius:<group>:<p>, trivial:<group>, or JSON")
    common.add_argument("--subgroup", help="subgroup label such as V4#2")
    common.add_argument("--element", help="element expression such as 2*[C2] - alpha[1]")
    common.add_argument("--left", help="B(G) factor of the star product")
    common.add_argument("--format", choices=FORMATS, default=DEFAULT_FORMAT)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--cap", type=int, default=ORDER_CAP, help="largest group order")

    parser = argparse.ArgumentParser(prog=APP_NAME, description=APP_TAGLINE)
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="verb")
    for verb, text in VERBS.items():
        p = sub.add_parser(verb, parents=[common], help=text, description=text)
        if verb == "stable-units":
            p.add_argument("--ambient-check", action="store_true",
                           help="compare B(F)^x with B(S)^x and F with F_S(S)")
        if verb == "verify":
            p.add_argument("--suite", choices=SUITES, default="all")
            p.add_argument("--inject-fault", choices=FAULTS, default=None)
    return parser


def dispatch(args) -> Report:
    if args.verb == "verify":
        return run_suite(args.suite, seed=args.seed, fault=args.inject_fault)
    return COMMANDS[args.verb](Inputs(args))


def execute(argv: list[str]) -> str:
    """Parse, run and render without touching exit codes (used in-process)."""
    args = build_parser().parse_args(argv)
    return render(dispatch(args), args.format)


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    start = time.perf_counter()
    try:
        report = dispatch(args)
        text = render(report, args.format)
    except DescriptorError as exc:
        log.error("%s: bad input: %s", args.verb, exc)
        print(f"{APP_NAME} {args.verb}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BurnsideError as exc:
        log.error("%s failed: %s", args.verb, exc)
        print(f"{APP_NAME} {args.verb}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except Exception as exc:
        log.critical("%s crashed: %s", args.verb, exc, exc_info=True)
        print(f"{APP_NAME} {args.verb}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    sys.stdout.write(text)
    log.info("%s finished in %.2fs", args.verb, time.perf_counter() - start)
    if not report.ok:
        log.error("%s reported failures: %s", args.verb, report.flags.get("failed"))
        return EXIT_FAILURE
    return EXIT_OK
