"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 input error, 3 unsupported
operation, 4 numerical-quality refusal.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from . import scenario, validate
from .errors import (
    InputError,
    NumericalQualityError,
    QuadratureError,
    UnsupportedOperationError,
)
from .numerics import QuadratureSpec

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2
EXIT_UNSUPPORTED = 3
EXIT_NUMERICAL = 4

log = logging.getLogger("sonovac")


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tolerance", type=float, default=1e-10, metavar="REL",
                        help="relative tolerance of the time quadrature (default 1e-10)")
    parser.add_argument("--quiet", action="store_true", help="suppress diagnostics on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sonovac",
        description="Vacuum radiation from a collapsing dielectric bubble.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="write the closed-form spectrum table (model profile)")
    p.add_argument("--scenario", required=True, metavar="PATH")
    p.add_argument("--out", required=True, metavar="PATH", help="CSV destination")
    _common(p)

    p = sub.add_parser("energy", help="print the radiated-energy envelope")
    p.add_argument("--scenario", required=True, metavar="PATH")
    _common(p)

    p = sub.add_parser("sweep", help="energy envelope scalars over a parameter grid")
    p.add_argument("--scenario", required=True, metavar="PATH")
    p.add_argument("--sweep", required=True, metavar="KEY=START:STOP:COUNT[:log]")
    p.add_argument("--out", required=True, metavar="PATH", help="CSV destination")
    p.add_argument("--jobs", type=int, default=1, help="worker threads (row order is unaffected)")
    _common(p)

    p = sub.add_parser("validate", help="run the invariant suite")
    _common(p)
    return parser


def _spec(args: argparse.Namespace) -> QuadratureSpec:
    try:
        return QuadratureSpec(rel_tol=args.tolerance)
    except InputError:
        raise InputError(f"--tolerance must be positive, got {args.tolerance}") from None


def cmd_spectrum(args: argparse.Namespace) -> int:
    sf = scenario.load_scenario(args.scenario)
    if sf.profile != "model":
        raise UnsupportedOperationError(
            f"spectrum needs profile = model (got {sf.profile!r}); "
            "use 'sonovac energy' for tabulated or static trajectories"
        )
    envelope, rows = scenario.compute_spectrum(sf)
    scenario.write_spectrum_table(args.out, rows)
    print(scenario.render_json(envelope))
    return EXIT_OK


def cmd_energy(args: argparse.Namespace) -> int:
    sf = scenario.load_scenario(args.scenario)
    print(scenario.render_json(scenario.compute_energy(sf, _spec(args))))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    sf = scenario.load_scenario(args.scenario)
    key, grid = scenario.parse_sweep(args.sweep)
    if args.jobs < 1:
        raise InputError("--jobs must be >= 1")
    envelopes = scenario.run_sweep(sf, key, grid, _spec(args), jobs=args.jobs)
    scenario.write_sweep_table(args.out, key, grid, envelopes)
    warnings = sorted({w for env in envelopes for w in env["warnings"]})
    summary = {
        "inputs": sf.canonical(),
        "sweep": args.sweep,
        "rows": len(envelopes),
        "out": str(args.out),
        "warnings": warnings,
        "version": envelopes[0]["version"],
        "input_hash": sf.input_hash(),
    }
    print(scenario.render_json(summary))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    results = validate.run_checks()
    if not args.quiet:
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"validation failed: {failed[0].name}")
        return EXIT_VALIDATION
    print("all invariants passed")
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "energy": cmd_energy,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse usage errors exit with 2 already
        return int(exc.code or 0)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr, force=True)
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        log.error("input error: %s", exc)
        return EXIT_INPUT
    except UnsupportedOperationError as exc:
        log.error("unsupported: %s", exc)
        return EXIT_UNSUPPORTED
    except (NumericalQualityError, QuadratureError) as exc:
        log.error("numerical quality: %s", exc)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
