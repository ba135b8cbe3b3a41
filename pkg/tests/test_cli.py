"""
Unit tests for CLI module.

Tests the command functions and real ``main`` invocations with captured output.
"""

import json
from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np
import pytest

import splurge_geomrep.cli as cli_module
from splurge_geomrep.algebra_core import AlgebraSpec
from splurge_geomrep.cli import (
    cmd_example_borel_weil,
    cmd_factorize,
    cmd_verify,
    main,
    parse_flag_spec,
)
from splurge_geomrep.errors import CliArgumentError, CliFileError, ConfigFileError, ConfigParseError
from splurge_geomrep.logging import generate_run_id, get_logging_config
from splurge_geomrep.matrix_io import read_element_file

ConfigFactory = Callable[..., Path]


class TestParseFlagSpec:
    """Test the --flag grammar."""

    @pytest.mark.unit
    def test_partition(self) -> None:
        """Blocks split on ';' and parts on ','."""
        flag = parse_flag_spec("2,1;1,1", AlgebraSpec.from_dims([3, 2]))
        assert flag.ranks == [3, 2]

    @pytest.mark.unit
    def test_full(self) -> None:
        """'full' is the complete coordinate flag."""
        flag = parse_flag_spec(" FULL ", AlgebraSpec.from_dims([3]))
        assert flag.ranks == [1, 1, 1]

    @pytest.mark.unit
    @pytest.mark.parametrize("text", ["2;1", "a,b", "2,1", "3;2;1", ""])
    def test_invalid(self, text: str) -> None:
        """Malformed or ill-fitting specs are argument errors."""
        with pytest.raises(CliArgumentError):
            parse_flag_spec(text, AlgebraSpec.from_dims([3, 2]))


class TestCommands:
    """Test the command functions."""

    @pytest.mark.unit
    def test_example_report(self) -> None:
        """The example report carries the config hash and seed."""
        report = cmd_example_borel_weil(2, 3)
        assert report.title == "Line-bundle example on M_2"
        assert report.seed == 3
        assert report.config_hash is not None and len(report.config_hash) == 64
        assert report.passed
        assert report.timings == {}

    @pytest.mark.unit
    def test_example_timings(self) -> None:
        """Timings are collected on request."""
        report = cmd_example_borel_weil(2, 3, timings=True)
        assert "gns" in report.timings

    @pytest.mark.unit
    def test_verify_seed_override(
        self, temp_config_file_factory: ConfigFactory, sample_config_data: dict[str, Any]
    ) -> None:
        """--seed replaces the config seed and changes the hash."""
        path = str(temp_config_file_factory(sample_config_data))
        base = cmd_verify(path)
        other = cmd_verify(path, seed=6)
        assert base.title == "Verification of small"
        assert base.seed == 5 and other.seed == 6
        assert base.config_hash != other.config_hash
        assert base.passed

    @pytest.mark.unit
    def test_verify_config_tolerances(
        self, temp_config_file_factory: ConfigFactory, sample_config_data: dict[str, Any]
    ) -> None:
        """Per-key tolerance overrides from the config reach the checks."""
        sample_config_data["tolerances"] = {"algebra": 0.0}
        report = cmd_verify(str(temp_config_file_factory(sample_config_data)))
        assert report.get("algebra.trace_property").tolerance == 0.0

    @pytest.mark.unit
    def test_verify_applies_logging_section(
        self, temp_config_file_factory: ConfigFactory, sample_config_data: dict[str, Any], temp_dir: Path
    ) -> None:
        """A logging section with a file receives the run's info messages."""
        log_file = temp_dir / "verify.log"
        sample_config_data["logging"] = {
            "level": "INFO",
            "enable_console": False,
            "enable_file": True,
            "log_file": str(log_file),
        }
        cmd_verify(str(temp_config_file_factory(sample_config_data)))
        assert "Verifying config small" in log_file.read_text(encoding="utf-8")

    @pytest.mark.unit
    def test_verify_log_lines_carry_run_id(
        self, temp_config_file_factory: ConfigFactory, sample_config_data: dict[str, Any], temp_dir: Path
    ) -> None:
        """Every line of the run, worker threads included, carries the run id."""
        log_file = temp_dir / "verify.log"
        sample_config_data["logging"] = {
            "level": "DEBUG",
            "enable_console": False,
            "enable_file": True,
            "log_file": str(log_file),
        }
        report = cmd_verify(str(temp_config_file_factory(sample_config_data)), jobs=3)
        run_id = generate_run_id(report.config_hash, report.seed)
        lines = log_file.read_text(encoding="utf-8").splitlines()
        assert any("Built experiment" in line for line in lines)
        assert any("Performance: holomorphy took" in line for line in lines)
        assert all(f"run={run_id}" in line for line in lines)

    @pytest.mark.unit
    def test_verify_log_level_override(
        self, temp_config_file_factory: ConfigFactory, sample_config_data: dict[str, Any]
    ) -> None:
        """The CLI level replaces the config level."""
        sample_config_data["logging"] = {"level": "INFO", "enable_console": False}
        cmd_verify(str(temp_config_file_factory(sample_config_data)), log_level="ERROR")
        assert get_logging_config()["log_level"] == "ERROR"

    @pytest.mark.unit
    def test_verify_missing_config(self) -> None:
        """Unknown sources raise a config error."""
        with pytest.raises(ConfigFileError):
            cmd_verify("does_not_exist")

    @pytest.mark.unit
    def test_factorize_sample(self, samples_dir: Path) -> None:
        """The M_3 ⊕ M_2 sample factors for a two-step flag."""
        report = cmd_factorize(str(samples_dir / "m3m2_block.txt"), "2,1;1,1")
        assert report.passed
        assert report.metadata["flag_ranks"] == [3, 2]
        assert "factorization.qr_phase" not in [c.name for c in report.checks]

    @pytest.mark.unit
    def test_factorize_full_flag_compares_qr(self, samples_dir: Path) -> None:
        """The complete flag adds the Householder comparison."""
        report = cmd_factorize(str(samples_dir / "sample_5x5.txt"), "full")
        assert report.passed
        assert report.get("factorization.qr_phase").passed

    @pytest.mark.unit
    def test_factorize_singular(self, samples_dir: Path) -> None:
        """Singular input fails the invertibility check only."""
        report = cmd_factorize(str(samples_dir / "singular_3x3.txt"), "full")
        assert not report.passed
        assert [c.name for c in report.checks] == ["factorization.invertible"]

    @pytest.mark.unit
    def test_factorize_output_dir(self, samples_dir: Path, temp_dir: Path) -> None:
        """Factors and the report are written; u q reproduces g."""
        out = temp_dir / "out"
        cmd_factorize(str(samples_dir / "m3m2_block.txt"), "2,1;1,1", output_dir=str(out))
        g = read_element_file(samples_dir / "m3m2_block.txt")
        u = read_element_file(out / "u.txt")
        q = read_element_file(out / "q.txt")
        for gb, ub, qb in zip(g, u, q):
            np.testing.assert_allclose(ub @ qb, gb, atol=1e-12)
            np.testing.assert_allclose(ub.conj().T @ ub, np.eye(len(ub)), atol=1e-12)
        data = json.loads((out / "report.json").read_text(encoding="utf-8"))
        assert data["passed"] is True

    @pytest.mark.unit
    def test_factorize_missing_input(self, temp_dir: Path) -> None:
        """Missing files raise CliFileError."""
        with pytest.raises(CliFileError):
            cmd_factorize(str(temp_dir / "absent.txt"), "full")

    @pytest.mark.unit
    def test_factorize_bad_matrix(self, temp_matrix_file_factory: Callable[..., Path]) -> None:
        """Grammar errors surface as parse errors."""
        with pytest.raises(ConfigParseError):
            cmd_factorize(str(temp_matrix_file_factory("block 2\n1,0\n")), "full")


class TestCliMain:
    """Test main() exit codes and output."""

    @pytest.mark.unit
    def test_module_docstring_has_usage(self) -> None:
        """Usage lines live in the module docstring, one per command."""
        doc = cli_module.__doc__ or ""
        assert doc.lstrip().startswith("Command-line interface for splurge-geomrep.")
        for command in ("example borel-weil", "verify --config", "factorize --input"):
            assert f"python -m splurge_geomrep {command}" in doc

    @pytest.mark.unit
    def test_example_text(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Passing runs exit 0 and print the summary."""
        assert main(["--no-emoji", "example", "borel-weil", "--n", "2", "--seed", "1"]) == 0
        out = capsys.readouterr().out
        assert "Line-bundle example on M_2" in out
        assert "[OK] All" in out

    @pytest.mark.unit
    def test_example_json(self, capsys: pytest.CaptureFixture[str]) -> None:
        """--json prints a parseable report."""
        assert main(["--json", "example", "borel-weil", "--n", "2"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["seed"] == 0
        assert data["passed"] is True
        assert data["metadata"]["n"] == 2

    @pytest.mark.unit
    def test_example_n_out_of_range(self, capsys: pytest.CaptureFixture[str]) -> None:
        """n = 1 is a usage error."""
        assert main(["--no-emoji", "example", "borel-weil", "--n", "1"]) == 2
        assert "[ERROR]" in capsys.readouterr().err

    @pytest.mark.unit
    def test_list_configs(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Shipped names are printed one per line."""
        assert main(["verify", "--list-configs"]) == 0
        assert capsys.readouterr().out.split() == ["corner4_scalars", "m2m2_explicit", "m3m2_random"]

    @pytest.mark.unit
    def test_verify_without_config(self, capsys: pytest.CaptureFixture[str]) -> None:
        """verify needs a config."""
        assert main(["verify"]) == 2
        assert "--config" in capsys.readouterr().err

    @pytest.mark.unit
    def test_verify_config_missing_seed(
        self,
        temp_config_file_factory: ConfigFactory,
        sample_config_data: dict[str, Any],
        capsys: pytest.CaptureFixture[str],
    ) -> None:
        """A config without a seed is a usage error naming the field."""
        sample_config_data.pop("seed")
        path = temp_config_file_factory(sample_config_data)
        assert main(["--no-emoji", "verify", "--config", str(path)]) == 2
        assert "field seed" in capsys.readouterr().err

    @pytest.mark.unit
    def test_verify_invalid_state(
        self,
        temp_config_file_factory: ConfigFactory,
        sample_config_data: dict[str, Any],
        capsys: pytest.CaptureFixture[str],
    ) -> None:
        """A density that is not a state is a usage error."""
        sample_config_data["state"] = {"density": [[["2,0", "0,0"], ["0,0", "2,0"]], [["2,0"]]]}
        path = temp_config_file_factory(sample_config_data)
        assert main(["--no-emoji", "verify", "--config", str(path)]) == 2
        assert "Invalid input" in capsys.readouterr().err

    @pytest.mark.unit
    def test_factorize_singular_exit(self, samples_dir: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Singular input exits 1 with a failed check."""
        code = main(["--no-emoji", "factorize", "--input", str(samples_dir / "singular_3x3.txt"), "--flag", "full"])
        assert code == 1
        assert "[ERROR] 1 of 1 checks failed" in capsys.readouterr().out

    @pytest.mark.unit
    def test_factorize_bad_flag(self, samples_dir: Path) -> None:
        """A flag that does not fit the input exits 2."""
        assert main(["factorize", "--input", str(samples_dir / "identity_5x5.txt"), "--flag", "2,2"]) == 2

    @pytest.mark.unit
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["bogus"],
            ["--tolerance-profile", "sloppy", "verify", "--list-configs"],
            ["example", "borel-weil"],
            ["factorize", "--flag", "full"],
        ],
    )
    def test_argument_errors(self, argv: list[str]) -> None:
        """argparse failures exit 2."""
        assert main(argv) == 2

    @pytest.mark.unit
    def test_help_exits_zero(self, capsys: pytest.CaptureFixture[str]) -> None:
        """--help is not an error."""
        assert main(["--help"]) == 0
        assert "Exit codes" in capsys.readouterr().out

    @pytest.mark.unit
    def test_bad_log_level(self) -> None:
        """Unknown log levels exit 2."""
        assert main(["--log-level", "loud", "verify", "--list-configs"]) == 2

    @pytest.mark.unit
    def test_bad_jobs(self) -> None:
        """--jobs must be positive."""
        assert main(["--jobs", "0", "verify", "--list-configs"]) == 2

    @pytest.mark.unit
    def test_environment_profile(
        self, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """The tolerance profile can come from the environment."""
        monkeypatch.setenv("SPLURGE_GEOMREP_TOLERANCE_PROFILE", "relaxed")
        assert main(["--json", "example", "borel-weil", "--n", "2"]) == 0
        assert json.loads(capsys.readouterr().out)["metadata"]["tolerance_profile"] == "relaxed"

    @pytest.mark.unit
    def test_unknown_environment_profile(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """An unknown profile in the environment is a usage error."""
        monkeypatch.setenv("SPLURGE_GEOMREP_TOLERANCE_PROFILE", "sloppy")
        assert main(["example", "borel-weil", "--n", "2"]) == 2
