import json
from pathlib import Path
from typing import Any

import pytest

from lorentzian_fft import cli
from lorentzian_fft.schemas import SCHEMA_VERSION

pytestmark = pytest.mark.e2e

SMALL_RUN = ["--preset", "smoke", "--t-max", "4", "--quiet"]


def _report(path: Path) -> dict[str, Any]:
    payload: dict[str, Any] = json.loads(path.read_text(encoding="utf-8"))
    return payload


@pytest.mark.parametrize("suite", ["coherence", "kg"])
def test_suite_writes_a_passing_report(tmp_path: Path, suite: str) -> None:
    out = tmp_path / "reports" / f"{suite}.json"

    code = cli.main([suite, *SMALL_RUN, "--out", str(out)])

    assert code == cli.EXIT_PASS
    report = _report(out)
    assert report["version"] == SCHEMA_VERSION
    assert report["suite"] == suite
    assert report["status"] == "pass"
    assert set(report) == {
        "checks",
        "config",
        "config_digest",
        "generated_at",
        "seed",
        "sections",
        "status",
        "suite",
        "version",
    }
    assert all(check["status"] == "pass" for check in report["checks"])


def test_reports_are_reproducible(tmp_path: Path) -> None:
    paths = [tmp_path / "first.json", tmp_path / "second.json"]
    for path in paths:
        argv = ["bordism", *SMALL_RUN, "--seed", "3", "--out", str(path)]
        assert cli.main(argv) == cli.EXIT_PASS

    first, second = (_report(path) for path in paths)
    first.pop("generated_at")
    second.pop("generated_at")
    assert first == second
    assert first["seed"] == 3


def test_report_goes_to_stdout_without_out(
    capsys: pytest.CaptureFixture[str],
) -> None:
    assert cli.main(["adjunction", *SMALL_RUN]) == cli.EXIT_PASS

    report = json.loads(capsys.readouterr().out)
    assert report["suite"] == "adjunction"
    assert report["sections"][0]["section"] == "adjunction"


def test_mass_flag_is_recorded(tmp_path: Path) -> None:
    out = tmp_path / "kg.json"

    argv = ["kg", *SMALL_RUN, "--mass-squared", "2/4", "--out", str(out)]
    assert cli.main(argv) == cli.EXIT_PASS
    report = _report(out)
    assert report["config"]["mass_squared"] == "1/2"
    assert any("m0^2=1/2" in c["instance_key"] for c in report["checks"])


@pytest.mark.slow
def test_compare_suite_on_the_line(tmp_path: Path) -> None:
    out = tmp_path / "compare.json"

    argv = ["compare", "--preset", "line", "--quiet", "--out", str(out)]
    assert cli.main(argv) == cli.EXIT_PASS
    report = _report(out)
    assert report["config"]["L"] == 0
    assert {s["section"] for s in report["sections"]} >= {"aqft", "fft"}
