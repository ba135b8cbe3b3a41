"""
Integration tests for configuration-driven runs.

Loads configs from disk and by shipped name, runs the full residual suite and
checks that tolerance profiles and seeds flow through to the report.
"""

import json
import math
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest

from splurge_geomrep.cli import cmd_verify
from splurge_geomrep.config.experiment_config import ExperimentConfig, list_shipped_configs
from splurge_geomrep.config.tolerance_config import ToleranceProfile
from splurge_geomrep.experiments import run_verify
from splurge_geomrep.result_models import CheckStatus, report_to_dict

ConfigFactory = Callable[..., Path]


class TestShippedConfigs:
    """Every shipped config verifies."""

    @pytest.mark.integration
    @pytest.mark.parametrize("name", list_shipped_configs())
    def test_shipped_config_passes(self, name: str) -> None:
        """No determined check fails."""
        report = cmd_verify(name)
        assert not report.failed_checks, [(c.name, c.residual) for c in report.failed_checks]

    @pytest.mark.integration
    def test_corner_with_scalars(self) -> None:
        """Scalars over a pure state give the full GNS space as fiber."""
        report = cmd_verify("corner4_scalars")
        assert report.metadata["pure"] is True
        assert report.metadata["dim_H"] == 4
        assert report.metadata["dim_Hphi"] == 1
        assert report.metadata["bundle_base"] == "U_A/T1"
        assert report.get("holomorphy.residual").status == CheckStatus.NOT_DETERMINED

    @pytest.mark.integration
    def test_explicit_basis(self) -> None:
        """The central basis of M_2 ⊕ M_2 verifies without an expectation."""
        report = cmd_verify("m2m2_explicit")
        assert report.metadata["dim_B"] == 2
        assert report.get("expectation.constructed").status == CheckStatus.NOT_DETERMINED
        assert report.get("gns.projection").passed


class TestConfigFromDisk:
    """Configs written to disk behave like shipped ones."""

    @pytest.mark.integration
    @pytest.mark.parametrize(
        "state,subalgebra",
        [
            ("tracial", "full"),
            ("tracial", "scalars"),
            ("random_rank(2)", "centralizer"),
            ("random", "scalars"),
        ],
    )
    def test_state_and_subalgebra_variants(
        self,
        temp_config_file_factory: ConfigFactory,
        sample_config_data: dict[str, Any],
        state: str,
        subalgebra: str,
    ) -> None:
        """Each state and subalgebra kind passes the suite."""
        sample_config_data["state"] = state
        sample_config_data["subalgebra"] = subalgebra
        report = cmd_verify(str(temp_config_file_factory(sample_config_data)))
        assert not report.failed_checks, [(c.name, c.residual) for c in report.failed_checks]

    @pytest.mark.integration
    def test_full_subalgebra_extension_purity(
        self, temp_config_file_factory: ConfigFactory, sample_config_data: dict[str, Any]
    ) -> None:
        """With B = A extension purity is decided: a faithful state is not pure."""
        sample_config_data["subalgebra"] = "full"
        report = cmd_verify(str(temp_config_file_factory(sample_config_data)))
        check = report.get("gns.extension_purity")
        assert check.status == CheckStatus.PASS

    @pytest.mark.integration
    def test_report_reproducible(
        self, temp_config_file_factory: ConfigFactory, sample_config_data: dict[str, Any]
    ) -> None:
        """Two runs of the same file give the same JSON."""
        path = str(temp_config_file_factory(sample_config_data))
        first = json.dumps(report_to_dict(cmd_verify(path)))
        second = json.dumps(report_to_dict(cmd_verify(path)))
        assert first == second

    @pytest.mark.integration
    def test_jobs_do_not_change_residuals(self) -> None:
        """Serial and threaded runs agree bit for bit."""
        config = ExperimentConfig.load("m3m2_random")
        serial, _ = run_verify(config, ToleranceProfile(), jobs=1)
        threaded, _ = run_verify(config, ToleranceProfile(), jobs=2)
        assert len(serial) == len(threaded)
        for a, b in zip(serial, threaded):
            assert a.name == b.name
            assert a.residual == b.residual or (math.isnan(a.residual) and math.isnan(b.residual))

    @pytest.mark.integration
    def test_relaxed_profile_scales_tolerances(self) -> None:
        """The relaxed profile multiplies every tolerance by 100."""
        default = cmd_verify("corner4_scalars")
        relaxed = cmd_verify("corner4_scalars", tolerance_profile="relaxed")
        check = "gns.multiplicative"
        assert relaxed.get(check).tolerance == pytest.approx(100 * default.get(check).tolerance)
        assert relaxed.metadata["tolerance_profile"] == "relaxed"
