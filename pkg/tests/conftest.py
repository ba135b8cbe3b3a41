"""
Pytest configuration and shared fixtures for splurge-geomrep tests.

This module provides common test fixtures and configuration for all test modules.
"""

import json
import logging
import os
import tempfile
from collections.abc import Callable, Generator
from pathlib import Path
from typing import Any

import numpy as np
import pytest

from splurge_geomrep.algebra_core import AlgebraSpec, make_generator
from splurge_geomrep.gns import GnsData, State, SubGnsData, centralizer_subalgebra, gns_build, sub_gns
from splurge_geomrep.utils.sampling import random_density

# Test constants
TEST_SEED: int = 20251019
PACKAGE_ROOT = Path(__file__).resolve().parent.parent / "splurge_geomrep"
SAMPLES_DIR = PACKAGE_ROOT / "samples"
CONFIGS_DIR = PACKAGE_ROOT / "configs"


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Provide a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as temp_dir:
        yield Path(temp_dir)


@pytest.fixture(scope="session")
def samples_dir() -> Path:
    """Provide the shipped sample matrix directory."""
    return SAMPLES_DIR


@pytest.fixture(scope="session")
def configs_dir() -> Path:
    """Provide the shipped config directory."""
    return CONFIGS_DIR


@pytest.fixture
def rng() -> np.random.Generator:
    """Deterministic generator for a single test."""
    return make_generator(TEST_SEED)


@pytest.fixture
def m3m2() -> AlgebraSpec:
    """M_3 ⊕ M_2 with the default weights 3/5, 2/5."""
    return AlgebraSpec.from_dims([3, 2])


@pytest.fixture
def m3() -> AlgebraSpec:
    """The full matrix algebra M_3."""
    return AlgebraSpec.from_dims([3])


@pytest.fixture
def faithful_state(m3m2: AlgebraSpec) -> State:
    """Random faithful state on M_3 ⊕ M_2."""
    return State.from_density(m3m2, random_density(m3m2, make_generator(TEST_SEED + 1)))


@pytest.fixture
def state_factory() -> Callable[..., State]:
    """Factory fixture for states: tracial, corner, random faithful or of given rank."""

    def _create_state(spec: AlgebraSpec, kind: str = "random", rank: int | None = None, seed: int = TEST_SEED) -> State:
        if kind == "tracial":
            return State.tracial(spec)
        if kind == "corner":
            return State.corner(spec)
        return State.from_density(spec, random_density(spec, make_generator(seed), rank=rank))

    return _create_state


@pytest.fixture
def gns_factory() -> Callable[[State], tuple[GnsData, SubGnsData]]:
    """Factory fixture: GNS data and its compression to the centralizer of the state."""

    def _create(state: State) -> tuple[GnsData, SubGnsData]:
        gns = gns_build(state.spec, state)
        return gns, sub_gns(gns, centralizer_subalgebra(state.spec, state))

    return _create


@pytest.fixture
def temp_config_file_factory(tmp_path: Path) -> Callable[..., Path]:
    """Factory fixture for creating temporary experiment config files."""

    def _create_config_file(config_data: dict[str, Any] | str, filename: str = "config.json") -> Path:
        config_file = tmp_path / filename
        if isinstance(config_data, str):
            config_file.write_text(config_data, encoding="utf-8")
        else:
            config_file.write_text(json.dumps(config_data, indent=2), encoding="utf-8")
        return config_file

    return _create_config_file


@pytest.fixture
def temp_matrix_file_factory(tmp_path: Path) -> Callable[[str, str], Path]:
    """Factory fixture for creating temporary element files."""

    def _create_matrix_file(content: str, filename: str = "g.txt") -> Path:
        matrix_file = tmp_path / filename
        matrix_file.write_text(content, encoding="utf-8")
        return matrix_file

    return _create_matrix_file


@pytest.fixture
def sample_config_data() -> dict[str, Any]:
    """Provide a small valid experiment config."""
    return {
        "name": "small",
        "algebra": {"block_dims": [2, 1]},
        "state": "random",
        "subalgebra": "centralizer",
        "samples": {"points": 4, "vectors": 4, "unitaries": 4, "expectation_inputs": 10, "factorizations": 4},
        "seed": 5,
    }


@pytest.fixture(autouse=True)
def reset_logging() -> Generator[None, None, None]:
    """Reset the package logger before and after each test."""
    import splurge_geomrep.logging.core as core

    package_logger = logging.getLogger("splurge_geomrep")

    def _clear() -> None:
        for handler in package_logger.handlers[:]:
            package_logger.removeHandler(handler)
            handler.close()
        package_logger.propagate = True
        core._LOGGING_CONFIGURED = False
        core._LOGGING_CONFIG = {}

    _clear()
    yield
    _clear()


@pytest.fixture(autouse=True)
def reset_environment() -> Generator[None, None, None]:
    """Reset environment variables before each test."""
    # Store original environment
    original_env = os.environ.copy()
    os.environ.pop("SPLURGE_GEOMREP_TOLERANCE_PROFILE", None)

    yield

    # Restore original environment
    os.environ.clear()
    os.environ.update(original_env)
