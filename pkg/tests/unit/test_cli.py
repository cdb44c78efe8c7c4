import json
from pathlib import Path

import pytest

from lorentzian_fft import cli
from lorentzian_fft.domain.lattice import (
    LatticeSpacetime,
    diamond,
    format_spacetime,
    spacetime_to_dict,
)


def test_parser_exposes_every_suite() -> None:
    parser = cli.build_parser()
    args = parser.parse_args(
        ["kg", "--seed", "4", "--mass-squared", "1/2", "--quiet"]
    )

    assert args.command == "kg"
    assert args.seed == 4
    assert args.mass_squared == "1/2"
    assert args.verbosity == "quiet"
    assert args.preset == "default"


def test_resolve_config_layers_flags_over_preset(tmp_path: Path) -> None:
    override = tmp_path / "run.yaml"
    override.write_text("T_max: 6\nseed: 9\n", encoding="utf-8")
    args = cli.build_parser().parse_args(
        [
            "bordism",
            "--preset",
            "smoke",
            "--config",
            str(override),
            "--seed",
            "11",
        ]
    )

    config, digest = cli.resolve_config(args)

    assert config.suite == "bordism"
    assert config.L == 4
    assert config.T_max == 6
    assert config.seed == 11
    assert digest == config.digest()


@pytest.mark.parametrize(
    "argv",
    [
        ["kg", "--no-such-flag"],
        ["kg", "--mass-squared", "one"],
        ["kg", "--mass-squared", "-1/2"],
        ["kg", "-L", "2"],
        ["kg", "--preset", "missing"],
        ["unknown-suite"],
    ],
)
def test_configuration_errors_exit_with_two(argv: list[str]) -> None:
    assert cli.run(argv) == cli.EXIT_CONFIG


def test_missing_config_file_exits_with_two(tmp_path: Path) -> None:
    missing = tmp_path / "absent.toml"

    assert cli.run(["kg", "--config", str(missing)]) == cli.EXIT_CONFIG


def test_validate_reports_cauchy_rows(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    literal = tmp_path / "diamond.txt"
    literal.write_text(format_spacetime(diamond(8, 2, 0, 2)), "utf-8")

    assert cli.run(["validate", str(literal)]) == cli.EXIT_PASS
    diagnostics = json.loads(capsys.readouterr().out)
    assert diagnostics["cauchy_rows"] == [2]
    assert diagnostics["globally_hyperbolic"] is True
    assert diagnostics["interior"] == 2


def test_validate_flags_regions_without_cauchy_rows(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    corner = LatticeSpacetime(8, frozenset({(0, 0), (0, 1), (1, 1)}))
    literal = tmp_path / "corner.json"
    literal.write_text(json.dumps(spacetime_to_dict(corner)), "utf-8")

    assert cli.run(["validate", str(literal)]) == cli.EXIT_FAIL
    assert json.loads(capsys.readouterr().out)["cauchy_rows"] == []


def test_validate_rejects_malformed_literals(tmp_path: Path) -> None:
    literal = tmp_path / "bad.txt"
    literal.write_text("L=8\nt=0 1..3\n", "utf-8")

    assert cli.run(["validate", str(literal)]) == cli.EXIT_CONFIG
    assert cli.run(["validate", str(tmp_path / "nope")]) == cli.EXIT_CONFIG
