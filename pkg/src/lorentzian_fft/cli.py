"""Command line interface for the lattice field theory checks."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from . import schemas
from .domain.engine import (
    SUITES,
    ConfigValidationError,
    RunConfig,
    RunConfigLoader,
    VerificationEngine,
)
from .domain.lattice import (
    LiteralParseError,
    SpacetimeValidationError,
    parse_spacetime,
    spacetime_to_dict,
)
from .domain.scalars import RationalParseError

LOGGER = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2

_LEVELS = {
    "quiet": logging.WARNING,
    "normal": logging.INFO,
    "verbose": logging.DEBUG,
}


def _configure_logging(verbosity: str) -> None:
    logging.basicConfig(
        level=_LEVELS[verbosity],
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def resolve_config(args: argparse.Namespace) -> tuple[RunConfig, str]:
    """Preset, then ``--config`` file, then explicit flags."""

    loader = RunConfigLoader()
    loaded = loader.load_preset(args.preset)
    config = loaded.config
    if args.config is not None:
        config = loader.load_file(Path(args.config), base=config).config
    config = config.with_overrides(
        {
            "suite": args.command,
            "L": args.L,
            "T_max": args.t_max,
            "mass_squared": args.mass_squared,
            "seed": args.seed,
            "output": args.out,
            "verbosity": args.verbosity,
        }
    )
    return config, config.digest()


def run_command(args: argparse.Namespace) -> int:
    """Run one verification suite and emit its JSON report."""

    config, digest = resolve_config(args)
    _configure_logging(config.verbosity)
    engine = VerificationEngine(config, digest)
    report = engine.run()
    document = schemas.ReportModel.from_domain(report, config).dumps()
    if config.output:
        path = Path(config.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(document, encoding="utf-8")
        LOGGER.info("Report written to %s", path)
    else:
        sys.stdout.write(document)
    for failure in report.failures[:10]:
        LOGGER.error(
            "FAILED %s/%s on %s",
            failure.section,
            failure.check,
            failure.instance_key,
        )
    return EXIT_PASS if report.passed else EXIT_FAIL


def validate_command(args: argparse.Namespace) -> int:
    """Parse a spacetime literal and print its causal diagnostics."""

    text = Path(args.literal).read_text(encoding="utf-8")
    m = parse_spacetime(text)
    rows = [row.t0 for row in m.cauchy_rows]
    diagnostics: dict[str, Any] = {
        "spacetime": spacetime_to_dict(m),
        "sites": len(m.sites),
        "width": m.width,
        "interior": len(m.interior),
        "causally_convex": True,
        "cauchy_rows": rows,
        "globally_hyperbolic": bool(rows),
    }
    sys.stdout.write(json.dumps(diagnostics, indent=2, sort_keys=True) + "\n")
    return EXIT_PASS if rows else EXIT_FAIL


def _run_options() -> argparse.ArgumentParser:
    options = argparse.ArgumentParser(add_help=False)
    options.add_argument(
        "--preset",
        default="default",
        help="Packaged preset providing the base configuration",
    )
    options.add_argument(
        "--config", help="YAML, JSON or TOML file overriding the preset"
    )
    options.add_argument("--out", help="Write the JSON report to this path")
    options.add_argument("--seed", type=int, help="Random seed")
    options.add_argument(
        "--mass-squared",
        dest="mass_squared",
        help="Squared mass as an exact rational 'p/q'",
    )
    options.add_argument(
        "-L", dest="L", type=int, help="Spatial circumference (0 for 1D)"
    )
    options.add_argument(
        "--t-max", dest="t_max", type=int, help="Largest time extent"
    )
    _verbosity_options(options)
    return options


def _verbosity_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--verbose",
        dest="verbosity",
        action="store_const",
        const="verbose",
        help="Log per-law progress",
    )
    group.add_argument(
        "--quiet",
        dest="verbosity",
        action="store_const",
        const="quiet",
        help="Only log warnings and errors",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfft",
        description=(
            "Exact checks of lattice Klein-Gordon theory as an algebraic "
            "and a functorial field theory"
        ),
    )
    commands = parser.add_subparsers(dest="command", required=True)
    options = _run_options()
    descriptions = {
        "coherence": "Pseudo-category laws on generated instances",
        "adjunction": "The tau / iota adjunction",
        "bordism": "Companions, collars and gluing of lattice bordisms",
        "kg": "Green operators and the Poisson chain",
        "compare": "AQFT and FFT axioms and their comparison",
        "all": "Every suite",
    }
    for name in SUITES:
        command = commands.add_parser(
            name, parents=[options], help=descriptions[name]
        )
        command.set_defaults(handler=run_command)
    validate = commands.add_parser(
        "validate", help="Diagnose a spacetime literal file"
    )
    validate.add_argument("literal", help="Spacetime literal (text or JSON)")
    _verbosity_options(validate)
    validate.set_defaults(handler=validate_command)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, dispatch and map errors onto exit codes."""

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS
    _configure_logging(args.verbosity or "normal")
    try:
        return int(args.handler(args))
    except (
        ConfigValidationError,
        RationalParseError,
        LiteralParseError,
        SpacetimeValidationError,
        OSError,
    ) as exc:
        LOGGER.error("%s", exc)
        return EXIT_CONFIG


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":  # pragma: no cover - CLI entry point
    raise SystemExit(main())
