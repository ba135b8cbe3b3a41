"""
Tolerance profiles for residual checks.

A profile maps each named check to the tolerance it is judged against.
Profiles are selected by name (CLI flag or environment variable) and may be
refined per key by the ``tolerances`` map of an experiment config.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from __future__ import annotations

import os
from collections.abc import Mapping
from dataclasses import asdict, dataclass, fields, replace

from splurge_geomrep.config.constants import DEFAULT_CHECK_TOL, DEFAULT_TOLERANCE_PROFILE, TOLERANCE_PROFILE_ENV_VAR
from splurge_geomrep.errors import ConfigValidationError

_PROFILE_SCALES: dict[str, float] = {
    "default": 1.0,
    "strict": 0.1,
    "relaxed": 100.0,
}


@dataclass(frozen=True)
class ToleranceProfile:
    """Per-check tolerances. All values are absolute unless the check normalizes its residual."""

    name: str = DEFAULT_TOLERANCE_PROFILE
    algebra: float = 1e-10
    equivariance: float = 1e-11
    principal_angle: float = 1e-8
    homomorphism: float = 1e-10
    inner_product: float = 1e-10
    diagram: float = 1e-10
    projection: float = 1e-12
    expectation: float = 1e-8
    kernel_symmetry: float = 1e-12
    kernel_closed_form: float = 1e-10
    ev_factorization: float = 1e-11
    gram_psd: float = 1e-8
    reproducing: float = DEFAULT_CHECK_TOL
    evaluation_bound: float = 1e-10
    realization: float = DEFAULT_CHECK_TOL
    injectivity: float = 1e-8
    reconstruction: float = DEFAULT_CHECK_TOL
    unitarity: float = 1e-10
    parabolic: float = 1e-10
    qr_phase: float = 1e-8
    rho_tilde: float = DEFAULT_CHECK_TOL
    holomorphy: float = 1e-3

    @classmethod
    def from_name(cls, name: str) -> ToleranceProfile:
        """Create a named profile by scaling the defaults."""
        key = name.strip().lower()
        if key not in _PROFILE_SCALES:
            raise ConfigValidationError(
                f"Unknown tolerance profile: {name}. Must be one of {sorted(_PROFILE_SCALES)}",
                {"profile": name},
            )
        scale = _PROFILE_SCALES[key]
        base = cls()
        scaled = {f.name: getattr(base, f.name) * scale for f in fields(cls) if f.name != "name"}
        return cls(name=key, **scaled)

    def with_overrides(self, overrides: Mapping[str, float] | None) -> ToleranceProfile:
        """Return a copy with individual tolerances replaced."""
        if not overrides:
            return self
        known = {f.name for f in fields(self)} - {"name"}
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise ConfigValidationError(
                f"Unknown tolerance keys: {', '.join(unknown)}",
                {"field": "tolerances", "unknown": unknown},
            )
        values: dict[str, float] = {}
        for key, value in overrides.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)) or value < 0:
                raise ConfigValidationError(
                    f"Tolerance {key} must be a non-negative number",
                    {"field": f"tolerances.{key}"},
                )
            values[key] = float(value)
        return replace(self, **values)

    def to_dict(self) -> dict[str, float | str]:
        """Convert the profile to a dictionary."""
        return asdict(self)


def available_profiles() -> list[str]:
    """Names of the built-in profiles."""
    return sorted(_PROFILE_SCALES)


def resolve_profile_name(
    cli_value: str | None = None,
    environ: Mapping[str, str] | None = None,
) -> str:
    """Pick the profile name: explicit flag first, then the environment, then the default."""
    if cli_value:
        return cli_value
    env = os.environ if environ is None else environ
    from_env = env.get(TOLERANCE_PROFILE_ENV_VAR, "").strip()
    return from_env or DEFAULT_TOLERANCE_PROFILE
