from pathlib import Path

import pytest

from lorentzian_fft.domain.engine import (
    ConfigValidationError,
    RunConfig,
    RunConfigLoader,
)
from lorentzian_fft.domain.engine.config import build_config
from lorentzian_fft.domain.scalars import parse_rational


def test_defaults_match_packaged_default_preset(
    preset_loader: RunConfigLoader,
) -> None:
    loaded = preset_loader.load_preset("default")

    assert loaded.config == RunConfig()
    assert loaded.config.L == 8
    assert loaded.config.T_max == 12
    assert loaded.config.mass_squared == "0"
    assert loaded.digest == RunConfig().digest()


def test_available_presets(preset_loader: RunConfigLoader) -> None:
    assert list(preset_loader.available_presets()) == [
        "default",
        "line",
        "smoke",
    ]


def test_missing_preset_and_missing_directory(tmp_path: Path) -> None:
    loader = RunConfigLoader(base_path=tmp_path / "absent")

    assert list(loader.available_presets()) == []
    with pytest.raises(ConfigValidationError):
        loader.load_preset("default")


def test_masses_are_canonical_rationals() -> None:
    config = build_config({"mass_squared": "2/8", "masses": [0, "3/6"]})

    assert config.mass_squared == "1/4"
    assert config.masses == ("0", "1/2")
    assert config.mass == parse_rational("1/4")


@pytest.mark.parametrize(
    "payload",
    [
        {"L": 2},
        {"T_max": 3},
        {"mass_squared": "-1"},
        {"mass_squared": "1/0"},
        {"sample_size": 0},
        {"masses": []},
        {"masses": "0"},
        {"instance_heights": []},
        {"instance_heights": [0, -1]},
        {"suite": "everything"},
        {"unknown": 1},
    ],
)
def test_invalid_payloads_are_rejected(payload: dict[str, object]) -> None:
    with pytest.raises(ConfigValidationError):
        build_config(payload)


def test_one_dimensional_circumference_is_allowed() -> None:
    assert build_config({"L": 0}).L == 0


def test_overrides_ignore_missing_flags() -> None:
    config = RunConfig().with_overrides(
        {"seed": 5, "L": None, "mass_squared": "1"}
    )

    assert config.seed == 5
    assert config.L == 8
    assert config.mass_squared == "1"


def test_digest_ignores_output_and_verbosity() -> None:
    base = RunConfig()
    noisy = base.with_overrides({"output": "r.json", "verbosity": "quiet"})

    assert noisy.digest() == base.digest()
    assert base.with_overrides({"seed": 1}).digest() != base.digest()


@pytest.mark.parametrize(
    ("name", "text"),
    [
        ("run.yaml", "seed: 3\nL: 4\n"),
        ("run.json", '{"seed": 3, "L": 4}'),
        ("run.toml", "seed = 3\nL = 4\n"),
    ],
)
def test_load_file_formats_layer_over_base(
    tmp_path: Path, name: str, text: str
) -> None:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    base = RunConfig(T_max=6)

    loaded = RunConfigLoader(base_path=tmp_path).load_file(path, base=base)

    assert loaded.config.seed == 3
    assert loaded.config.L == 4
    assert loaded.config.T_max == 6
    assert loaded.source == str(path)


@pytest.mark.parametrize(
    ("name", "text"),
    [
        ("bad.yaml", "seed: [1\n"),
        ("bad.json", "{"),
        ("list.yaml", "- 1\n- 2\n"),
        ("run.ini", "seed=1"),
    ],
)
def test_load_file_errors(tmp_path: Path, name: str, text: str) -> None:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")

    with pytest.raises(ConfigValidationError):
        RunConfigLoader(base_path=tmp_path).load_file(path)


def test_load_file_missing(tmp_path: Path) -> None:
    with pytest.raises(ConfigValidationError):
        RunConfigLoader().load_file(tmp_path / "nope.yaml")
