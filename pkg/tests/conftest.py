"""Shared pytest fixtures for the lattice field theory test-suite."""

from pathlib import Path

import pytest

from lorentzian_fft.domain.engine import RunConfig, RunConfigLoader
from lorentzian_fft.domain.lattice import LatticeSpacetime, slab
from lorentzian_fft.domain.lbord import BoundedInstance


@pytest.fixture(scope="session")
def preset_loader() -> RunConfigLoader:
    base_path = (
        Path(__file__).resolve().parents[1]
        / "src"
        / "lorentzian_fft"
        / "presets"
    )
    return RunConfigLoader(base_path=base_path)


@pytest.fixture(scope="session")
def smoke_config(preset_loader: RunConfigLoader) -> RunConfig:
    return preset_loader.load_preset("smoke").config


@pytest.fixture(scope="session")
def bounded_instance() -> BoundedInstance:
    return BoundedInstance(3, padding=1, heights=(1,))


@pytest.fixture(scope="session")
def tower_instance() -> BoundedInstance:
    """Slabs of heights 0 and 1 on the one-point circle."""

    return BoundedInstance(0, padding=0, heights=(0, 1))


@pytest.fixture(scope="session")
def ring_slab() -> LatticeSpacetime:
    """Five full rows of a circle with four sites."""

    return slab(4, 0, 4)


@pytest.fixture(scope="session")
def line_slab() -> LatticeSpacetime:
    return slab(0, 0, 5)

