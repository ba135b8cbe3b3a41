"""
Experiment configuration for splurge-geomrep.

Loads JSON experiment configs (from a path or by shipped name), applies CLI
overrides and validates dimensional consistency. All randomness of a run flows
from the single ``seed`` field.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from splurge_geomrep.config.constants import (
    DEFAULT_EXPECTATION_INPUTS,
    DEFAULT_FACTORIZATIONS,
    DEFAULT_SAMPLE_POINTS,
    DEFAULT_SAMPLE_UNITARIES,
    DEFAULT_SAMPLE_VECTORS,
)
from splurge_geomrep.config.logging_config import LoggingConfig
from splurge_geomrep.errors import ConfigFileError, ConfigParseError, ConfigValidationError
from splurge_geomrep.matrix_io import format_block_rows, parse_block_rows

_SHIPPED_PACKAGE: str = "splurge_geomrep"
_SHIPPED_DIR: str = "configs"
_MAX_SEED: int = 2**64 - 1

_STATE_KINDS: tuple[str, ...] = ("tracial", "corner", "random", "random_rank", "density")
_SUBALGEBRA_KINDS: tuple[str, ...] = ("full", "scalars", "centralizer", "explicit")
_CALL_PATTERN = re.compile(r"^\s*([a-z_]+)\s*\(\s*(\d+)\s*\)\s*$")


@dataclass
class AlgebraSection:
    block_dims: list[int]
    trace_weights: list[float] | None = None


@dataclass
class StateSection:
    kind: str = "tracial"
    parameter: int | None = None
    density: list[np.ndarray] | None = None


@dataclass
class SubalgebraSection:
    kind: str = "centralizer"
    basis: list[list[np.ndarray]] | None = None


@dataclass
class SampleSection:
    points: int = DEFAULT_SAMPLE_POINTS
    vectors: int = DEFAULT_SAMPLE_VECTORS
    unitaries: int = DEFAULT_SAMPLE_UNITARIES
    expectation_inputs: int = DEFAULT_EXPECTATION_INPUTS
    factorizations: int = DEFAULT_FACTORIZATIONS


@dataclass
class ExperimentConfig:
    """A complete, validated experiment description."""

    algebra: AlgebraSection
    state: StateSection
    subalgebra: SubalgebraSection
    seed: int
    samples: SampleSection = field(default_factory=SampleSection)
    tolerances: dict[str, float] = field(default_factory=dict)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    name: str | None = None

    # -------- Loading --------
    @classmethod
    def load(
        cls,
        source: str,
        cli_args: dict[str, Any] | None = None,
    ) -> ExperimentConfig:
        """Load a config from a file path or a shipped config name, then apply CLI overrides."""
        path = Path(source)
        if path.exists():
            config = cls.load_json_file(str(path))
        elif source in list_shipped_configs():
            config = cls.from_json_text(_read_shipped(source), name=source)
        else:
            raise ConfigFileError(
                f"Configuration not found: {source}. Shipped configs: {', '.join(list_shipped_configs())}",
                {"source": source},
            )

        if cli_args:
            config = cls._merge_cli(config, cli_args)

        cls._validate(config)
        return config

    @classmethod
    def load_json_file(cls, path: str) -> ExperimentConfig:
        """Load configuration from a JSON file."""
        file_path = Path(path)
        if not file_path.exists():
            raise ConfigFileError(f"Configuration file not found: {path}", {"path": path})
        try:
            text = file_path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigFileError(f"Failed to read config file: {e}", {"path": path}) from e
        return cls.from_json_text(text, name=file_path.stem)

    @classmethod
    def from_json_text(cls, text: str, name: str | None = None) -> ExperimentConfig:
        """Parse and validate JSON config text."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigParseError(f"Invalid JSON: {e.msg}", {"line": e.lineno, "column": e.colno}) from e
        if not isinstance(data, dict):
            raise ConfigParseError("Config root must be a JSON object", {"field": "<root>"})
        config = cls._parse_json_config(data, name=name)
        cls._validate(config)
        return config

    @classmethod
    def _parse_json_config(cls, data: dict[str, Any], name: str | None = None) -> ExperimentConfig:
        if "seed" not in data:
            raise ConfigParseError("Missing required field 'seed'", {"field": "seed"})
        if "algebra" not in data:
            raise ConfigParseError("Missing required field 'algebra'", {"field": "algebra"})

        logging_section = data.get("logging", {})
        if not isinstance(logging_section, dict):
            raise ConfigParseError("'logging' must be an object", {"field": "logging"})

        tolerances = data.get("tolerances", {})
        if not isinstance(tolerances, dict):
            raise ConfigParseError("'tolerances' must be an object", {"field": "tolerances"})

        return cls(
            algebra=_parse_algebra(data["algebra"]),
            state=_parse_state(data.get("state", "tracial")),
            subalgebra=_parse_subalgebra(data.get("subalgebra", "centralizer")),
            seed=_parse_seed(data["seed"]),
            samples=_parse_samples(data.get("samples", {})),
            tolerances=dict(tolerances),
            logging=LoggingConfig.from_dict(logging_section),
            name=data.get("name", name),
        )

    @classmethod
    def _merge_cli(cls, config: ExperimentConfig, cli_args: dict[str, Any]) -> ExperimentConfig:
        """Apply CLI overrides. Only explicitly provided values take effect."""
        seed = cli_args.get("seed")
        tolerances = dict(config.tolerances)
        tolerances.update(cli_args.get("tolerances") or {})
        return ExperimentConfig(
            algebra=config.algebra,
            state=config.state,
            subalgebra=config.subalgebra,
            seed=_parse_seed(seed) if seed is not None else config.seed,
            samples=config.samples,
            tolerances=tolerances,
            logging=config.logging,
            name=config.name,
        )

    @staticmethod
    def _validate(config: ExperimentConfig) -> None:
        dims = config.algebra.block_dims
        weights = config.algebra.trace_weights
        if weights is not None:
            if len(weights) != len(dims):
                raise ConfigValidationError(
                    "trace_weights must have one entry per block", {"field": "algebra.trace_weights"}
                )
            if any(w <= 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-12:
                raise ConfigValidationError(
                    "trace_weights must be positive and sum to 1", {"field": "algebra.trace_weights"}
                )

        state = config.state
        total = sum(dims)
        if state.kind == "corner":
            if len(dims) != 1 or dims[0] != state.parameter:
                raise ConfigValidationError(
                    f"corner({state.parameter}) requires a single block of size {state.parameter}",
                    {"field": "state"},
                )
        elif state.kind == "random_rank":
            if state.parameter is None or not 1 <= state.parameter <= total:
                raise ConfigValidationError(f"random_rank needs 1 <= k <= {total}", {"field": "state"})
        elif state.kind == "density":
            _check_blocks(state.density or [], dims, "state.density")

        if config.subalgebra.kind == "explicit":
            for i, element in enumerate(config.subalgebra.basis or []):
                _check_blocks(element, dims, f"subalgebra.basis[{i}]")

        for key, value in vars(config.samples).items():
            if value < 1:
                raise ConfigValidationError(f"samples.{key} must be positive", {"field": f"samples.{key}"})

    # -------- Serialization --------
    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary (the shape accepted by the loader)."""
        state: Any
        if self.state.kind == "density":
            state = {"density": [format_block_rows(b) for b in self.state.density or []]}
        elif self.state.parameter is not None:
            state = f"{self.state.kind}({self.state.parameter})"
        else:
            state = self.state.kind

        subalgebra: Any
        if self.subalgebra.kind == "explicit":
            subalgebra = {
                "basis": [[format_block_rows(b) for b in element] for element in self.subalgebra.basis or []]
            }
        else:
            subalgebra = self.subalgebra.kind

        algebra: dict[str, Any] = {"block_dims": list(self.algebra.block_dims)}
        if self.algebra.trace_weights is not None:
            algebra["trace_weights"] = list(self.algebra.trace_weights)

        return {
            "name": self.name,
            "algebra": algebra,
            "state": state,
            "subalgebra": subalgebra,
            "samples": dict(vars(self.samples)),
            "seed": self.seed,
            "tolerances": dict(self.tolerances),
            "logging": self.logging.to_dict(),
        }

    def config_hash(self) -> str:
        """SHA-256 over the canonical JSON of everything that affects results."""
        payload = self.to_dict()
        payload.pop("logging")
        payload.pop("name")
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def save(self, file_path: str) -> None:
        """Save configuration to a JSON file."""
        try:
            with open(file_path, "w", encoding="utf-8") as f:
                json.dump(self.to_dict(), f, indent=2, ensure_ascii=False)
        except OSError as e:
            raise ConfigFileError(f"Failed to save config file: {e}", {"path": file_path}) from e


def list_shipped_configs() -> list[str]:
    """Names of the configs shipped inside the package."""
    root = resources.files(_SHIPPED_PACKAGE).joinpath(_SHIPPED_DIR)
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def _read_shipped(name: str) -> str:
    return resources.files(_SHIPPED_PACKAGE).joinpath(_SHIPPED_DIR, f"{name}.json").read_text(encoding="utf-8")


def _parse_seed(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value <= _MAX_SEED:
        raise ConfigParseError("'seed' must be an unsigned 64-bit integer", {"field": "seed"})
    return value


def _parse_positive_int(value: Any, field_path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigParseError("Expected a positive integer", {"field": field_path})
    return value


def _parse_algebra(section: Any) -> AlgebraSection:
    if not isinstance(section, dict):
        raise ConfigParseError("'algebra' must be an object", {"field": "algebra"})
    dims = section.get("block_dims")
    if not isinstance(dims, list) or not dims:
        raise ConfigParseError("'block_dims' must be a non-empty list", {"field": "algebra.block_dims"})
    block_dims = [_parse_positive_int(d, f"algebra.block_dims[{i}]") for i, d in enumerate(dims)]

    weights = section.get("trace_weights")
    trace_weights: list[float] | None = None
    if weights is not None:
        if not isinstance(weights, list) or not all(
            isinstance(w, (int, float)) and not isinstance(w, bool) for w in weights
        ):
            raise ConfigParseError("'trace_weights' must be a list of numbers", {"field": "algebra.trace_weights"})
        trace_weights = [float(w) for w in weights]
    return AlgebraSection(block_dims=block_dims, trace_weights=trace_weights)


def _parse_state(value: Any) -> StateSection:
    if isinstance(value, dict):
        if set(value) != {"density"}:
            raise ConfigParseError("State object must have exactly the key 'density'", {"field": "state"})
        blocks = value["density"]
        if not isinstance(blocks, list) or not blocks:
            raise ConfigParseError("'density' must be a list of blocks", {"field": "state.density"})
        return StateSection(
            kind="density",
            density=[parse_block_rows(b, field=f"state.density[{i}]") for i, b in enumerate(blocks)],
        )
    if not isinstance(value, str):
        raise ConfigParseError("State must be a string or an object", {"field": "state"})

    match = _CALL_PATTERN.match(value)
    if match:
        kind, parameter = match.group(1), int(match.group(2))
        if kind not in ("corner", "random_rank"):
            raise ConfigParseError(f"Unknown state shorthand '{value}'", {"field": "state"})
        return StateSection(kind=kind, parameter=parameter)

    kind = value.strip()
    if kind not in ("tracial", "random"):
        raise ConfigParseError(
            f"Unknown state '{value}'. Expected one of {', '.join(_STATE_KINDS)}", {"field": "state"}
        )
    return StateSection(kind=kind)


def _parse_subalgebra(value: Any) -> SubalgebraSection:
    if isinstance(value, dict):
        if set(value) != {"basis"}:
            raise ConfigParseError("Subalgebra object must have exactly the key 'basis'", {"field": "subalgebra"})
        elements = value["basis"]
        if not isinstance(elements, list) or not elements:
            raise ConfigParseError("'basis' must be a non-empty list", {"field": "subalgebra.basis"})
        basis: list[list[np.ndarray]] = []
        for i, element in enumerate(elements):
            if not isinstance(element, list) or not element:
                raise ConfigParseError("Basis element must be a list of blocks", {"field": f"subalgebra.basis[{i}]"})
            basis.append([parse_block_rows(b, field=f"subalgebra.basis[{i}][{j}]") for j, b in enumerate(element)])
        return SubalgebraSection(kind="explicit", basis=basis)
    if not isinstance(value, str) or value not in _SUBALGEBRA_KINDS[:-1]:
        raise ConfigParseError(
            f"Unknown subalgebra '{value}'. Expected full, scalars, centralizer or {{'basis': [...]}}",
            {"field": "subalgebra"},
        )
    return SubalgebraSection(kind=value)


def _parse_samples(section: Any) -> SampleSection:
    if not isinstance(section, dict):
        raise ConfigParseError("'samples' must be an object", {"field": "samples"})
    samples = SampleSection()
    for key, value in section.items():
        if not hasattr(samples, key):
            raise ConfigParseError(f"Unknown sample count '{key}'", {"field": f"samples.{key}"})
        setattr(samples, key, _parse_positive_int(value, f"samples.{key}"))
    return samples


def _check_blocks(blocks: list[np.ndarray], dims: list[int], field_path: str) -> None:
    if len(blocks) != len(dims):
        raise ConfigValidationError(f"Expected {len(dims)} blocks, got {len(blocks)}", {"field": field_path})
    for i, (block, n) in enumerate(zip(blocks, dims)):
        if block.shape != (n, n):
            raise ConfigValidationError(
                f"Block {i} has shape {block.shape}, expected ({n}, {n})", {"field": f"{field_path}[{i}]"}
            )
