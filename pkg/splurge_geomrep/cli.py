#!/usr/bin/env python3
"""
Command-line interface for splurge-geomrep.

Runs the line-bundle example, the residual suite for an experiment config and
the g = uq factorization of a matrix file, and prints a check report.

Usage:
    python -m splurge_geomrep example borel-weil --n 3 --seed 7
    python -m splurge_geomrep verify --config m3m2_random
    python -m splurge_geomrep factorize --input g.txt --flag "2,1;1,1"

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from splurge_geomrep.algebra_core import AlgebraSpec
from splurge_geomrep.cli_output import print_report, render_report, simple_table_format
from splurge_geomrep.config.constants import (
    DEFAULT_LOG_LEVEL,
    EXIT_CHECK_FAILURE,
    EXIT_OK,
    EXIT_USAGE_ERROR,
    MAX_BOREL_WEIL_N,
    MIN_BOREL_WEIL_N,
    TOLERANCE_PROFILE_ENV_VAR,
)
from splurge_geomrep.config.experiment_config import ExperimentConfig, list_shipped_configs
from splurge_geomrep.config.tolerance_config import ToleranceProfile, available_profiles, resolve_profile_name
from splurge_geomrep.errors import (
    CliArgumentError,
    CliFileError,
    ConfigurationError,
    FactorizationError,
    FlagError,
    SingularElementError,
    SplurgeGeomrepError,
    ValidationError,
)
from splurge_geomrep.experiments import borel_weil_config, run_borel_weil, run_verify
from splurge_geomrep.factorization import (
    Flag,
    qr_phase_residual,
    smallest_singular_value,
    uq_factorize,
    verify_factorization,
)
from splurge_geomrep.logging import (
    TimingRecorder,
    configure_module_logging,
    generate_run_id,
    performance_context,
    run_context,
)
from splurge_geomrep.logging.core import setup_logging
from splurge_geomrep.matrix_io import read_element_file, write_element_file
from splurge_geomrep.result_models import CheckResult, Report, report_to_dict

# Re-export API expected by tests
__all__ = [
    "simple_table_format",
    "render_report",
    "parse_flag_spec",
    "cmd_example_borel_weil",
    "cmd_verify",
    "cmd_factorize",
    "main",
]


_ERROR_EMOJI: str = "❌"
_INVERTIBILITY_CUTOFF: float = 1e-10


def parse_flag_spec(text: str, spec: AlgebraSpec) -> Flag:
    """
    Parse a per-block partition such as ``"2,1;1,1"`` into a coordinate flag.

    Blocks are separated by ``;`` and parts by ``,``. The single word ``full``
    selects the complete flag with rank-one parts.

    Raises:
        CliArgumentError: If the text is malformed or does not fit the algebra
    """
    if text.strip().lower() == "full":
        return Flag.rank_one(spec)
    try:
        partition = [[int(part) for part in block.split(",")] for block in text.split(";")]
    except ValueError as e:
        raise CliArgumentError(f"Invalid flag spec '{text}': expected e.g. '2,1;1,1'", {"flag": text}) from e
    try:
        return Flag.standard(spec, partition)
    except FlagError as e:
        raise CliArgumentError(f"Flag spec '{text}' does not fit block_dims {list(spec.block_dims)}: {e}") from e


def _is_complete(flag: Flag) -> bool:
    """Every projection has rank at most one inside each block, so Householder QR applies."""
    return all(round(float(np.trace(block).real)) <= 1 for e in flag.projections for block in e.blocks)


def _profile(cli_value: str | None, overrides: dict[str, float] | None = None) -> ToleranceProfile:
    return ToleranceProfile.from_name(resolve_profile_name(cli_value)).with_overrides(overrides)


def cmd_example_borel_weil(
    n: int,
    seed: int,
    *,
    tolerance_profile: str | None = None,
    jobs: int = 1,
    timings: bool = False,
) -> Report:
    """
    Natural representation of U(n) realized on sections of a line bundle over ℙ^{n−1}.

    Raises:
        CliArgumentError: If n is outside [MIN_BOREL_WEIL_N, MAX_BOREL_WEIL_N]
    """
    logger = configure_module_logging("cli.example")
    config_hash = borel_weil_config(n, seed).config_hash()
    with run_context(generate_run_id(config_hash, seed)):
        profile = _profile(tolerance_profile)
        recorder = TimingRecorder() if timings else None
        _, checks, metadata = run_borel_weil(n, seed, profile, jobs=jobs, recorder=recorder)
        logger.info(f"Line-bundle example n={n} produced {len(checks)} checks")
    return Report(
        title=f"Line-bundle example on M_{n}",
        seed=seed,
        config_hash=config_hash,
        checks=checks,
        metadata=metadata,
        timings=recorder.as_dict() if recorder else {},
    )


def cmd_verify(
    source: str,
    *,
    seed: int | None = None,
    tolerance_profile: str | None = None,
    jobs: int = 1,
    timings: bool = False,
    log_level: str | None = None,
) -> Report:
    """
    Run the full residual suite described by a config path or shipped config name.

    The config's logging section is applied first; ``log_level`` overrides its level.

    Raises:
        ConfigurationError: If the config is missing, malformed or inconsistent
    """
    logger = configure_module_logging("cli.verify")
    config = ExperimentConfig.load(source, cli_args={"seed": seed} if seed is not None else None)
    config.logging.apply(log_level)
    config_hash = config.config_hash()
    with run_context(generate_run_id(config_hash, config.seed)):
        profile = _profile(tolerance_profile, config.tolerances)
        recorder = TimingRecorder() if timings else None
        logger.info(f"Verifying config {config.name} with profile {profile.name}")
        checks, metadata = run_verify(config, profile, jobs=jobs, recorder=recorder)
    return Report(
        title=f"Verification of {config.name or source}",
        seed=config.seed,
        config_hash=config_hash,
        checks=checks,
        metadata=metadata,
        timings=recorder.as_dict() if recorder else {},
    )


def cmd_factorize(
    input_path: str,
    flag_spec: str,
    *,
    output_dir: str | None = None,
    tolerance_profile: str | None = None,
    timings: bool = False,
) -> Report:
    """
    Factor the element in ``input_path`` as g = uq for the given flag.

    A singular input is reported through a failed ``factorization.invertible``
    check instead of an exception. With ``output_dir`` the factors are written
    as ``u.txt`` and ``q.txt`` next to ``report.json``.

    Raises:
        CliFileError: If the input cannot be read or the output cannot be written
        ConfigParseError: If the input does not follow the element grammar
        CliArgumentError: If the flag spec does not fit the input
    """
    logger = configure_module_logging("cli.factorize")
    blocks = read_element_file(input_path)
    digest = hashlib.sha256(Path(input_path).read_bytes() + b"\0" + flag_spec.encode("utf-8")).hexdigest()
    with run_context(generate_run_id(digest, 0)):
        spec = AlgebraSpec.from_dims([b.shape[0] for b in blocks])
        g = spec.element(blocks)
        flag = parse_flag_spec(flag_spec, spec)
        profile = _profile(tolerance_profile)
        recorder = TimingRecorder() if timings else None
        scale = g.norm()
        sigma = smallest_singular_value(g) / scale if scale > 0 else 0.0
        invertible = CheckResult.evaluate("factorization.invertible", sigma, _INVERTIBILITY_CUTOFF, minimum=True)
        report = Report(
            title=f"Factorization of {Path(input_path).name}",
            seed=None,
            config_hash=digest,
            checks=[invertible],
            metadata={"block_dims": list(spec.block_dims), "flag_ranks": flag.ranks, "flag": flag_spec},
        )

        try:
            with performance_context("factorize", recorder):
                result = uq_factorize(g, flag)
        except SingularElementError as e:
            logger.warning(f"Input is singular: {e}")
            return report
        except FactorizationError as e:
            logger.error(f"Factorization failed: {e}")
            report.extend([CheckResult.flag("factorization.completed", False)])
            return report

        report.extend(verify_factorization(g, flag, result, profile))
        if _is_complete(flag):
            report.extend(
                [CheckResult.evaluate("factorization.qr_phase", qr_phase_residual(g, result.u), profile.qr_phase)]
            )
        if recorder is not None:
            report.timings = recorder.as_dict()

        if output_dir:
            target = Path(output_dir)
            try:
                target.mkdir(parents=True, exist_ok=True)
                (target / "report.json").write_text(
                    json.dumps(report_to_dict(report), ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
                )
            except OSError as e:
                raise CliFileError(f"Failed to write output directory: {e}", {"path": str(target)}) from e
            write_element_file(target / "u.txt", result.u.blocks, header=f"unitary factor u of {input_path}")
            write_element_file(target / "q.txt", result.q.blocks, header=f"block-triangular factor q, flag {flag_spec}")
            logger.info(f"Wrote factors to {target}")
        return report


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splurge-geomrep",
        description="Verify GNS, reproducing-kernel and factorization identities for finite-dimensional C*-algebras",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"""
Examples:
  %(prog)s example borel-weil --n 3 --seed 7
  %(prog)s verify --config m3m2_random --json
  %(prog)s verify --list-configs
  %(prog)s factorize --input g.txt --flag "2,1;1,1" --output out/

Exit codes: {EXIT_OK} all checks pass, {EXIT_CHECK_FAILURE} a check failed, {EXIT_USAGE_ERROR} usage or config error.
The tolerance profile may also be set through {TOLERANCE_PROFILE_ENV_VAR}.
        """,
    )

    parser.add_argument(
        "--json",
        dest="output_json",
        action="store_true",
        help="Output the report as JSON (machine-readable)",
    )
    parser.add_argument(
        "--no-emoji",
        dest="no_emoji",
        action="store_true",
        help="Disable emoji in CLI output",
    )
    parser.add_argument(
        "--timings",
        action="store_true",
        help="Include per-group timings in the report (output is then no longer byte-reproducible)",
    )
    parser.add_argument(
        "--tolerance-profile",
        dest="tolerance_profile",
        choices=available_profiles(),
        help=f"Tolerance profile (default: ${TOLERANCE_PROFILE_ENV_VAR} or 'default')",
    )
    parser.add_argument(
        "--log-level",
        dest="log_level",
        default=None,
        help=f"Log level for stderr logging (default: {DEFAULT_LOG_LEVEL})",
    )
    parser.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="Worker threads for independent check groups (default: 1)",
    )

    commands = parser.add_subparsers(dest="command", required=True)

    example = commands.add_parser("example", help="Run a built-in worked example")
    examples = example.add_subparsers(dest="example", required=True)
    borel_weil = examples.add_parser("borel-weil", help="Line bundle over projective space from φ(a) = a_11 on M_n")
    borel_weil.add_argument(
        "--n",
        type=int,
        required=True,
        help=f"Matrix size, {MIN_BOREL_WEIL_N} <= n <= {MAX_BOREL_WEIL_N}",
    )
    borel_weil.add_argument("--seed", type=int, default=0, help="Run seed (default: 0)")

    verify = commands.add_parser("verify", help="Run the residual suite for an experiment config")
    verify.add_argument("--config", help="Config file path or shipped config name")
    verify.add_argument("--seed", type=int, default=None, help="Override the config seed")
    verify.add_argument(
        "--list-configs",
        dest="list_configs",
        action="store_true",
        help="List shipped config names and exit",
    )

    factorize = commands.add_parser("factorize", help="Factor a matrix file as g = uq")
    factorize.add_argument("--input", dest="input_path", required=True, help="Element file (see docs/FORMATS.md)")
    factorize.add_argument(
        "--flag",
        dest="flag_spec",
        required=True,
        help="Per-block partition, blocks separated by ';', e.g. '2,1;1,1', or 'full'",
    )
    factorize.add_argument("--output", dest="output_dir", help="Directory for u.txt, q.txt and report.json")
    return parser


def main(argv: list[str] | None = None) -> int:
    """Main CLI entry point. Returns the process exit code."""
    try:
        sys.stdout.reconfigure(encoding="utf-8")  # type: ignore[union-attr]
        sys.stderr.reconfigure(encoding="utf-8")  # type: ignore[union-attr]
    except AttributeError:
        pass

    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE_ERROR

    error_prefix = "[ERROR]" if args.no_emoji else _ERROR_EMOJI
    try:
        setup_logging(log_level=(args.log_level or DEFAULT_LOG_LEVEL).upper())
    except ConfigurationError as e:
        print(f"{error_prefix} {e}", file=sys.stderr)
        return EXIT_USAGE_ERROR
    logger = configure_module_logging("cli")
    logger.info("Starting splurge-geomrep CLI")

    if args.jobs < 1:
        print(f"{error_prefix} --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE_ERROR

    try:
        if args.command == "example":
            report = cmd_example_borel_weil(
                args.n,
                args.seed,
                tolerance_profile=args.tolerance_profile,
                jobs=args.jobs,
                timings=args.timings,
            )
        elif args.command == "verify":
            if args.list_configs:
                for name in list_shipped_configs():
                    print(name)
                return EXIT_OK
            if not args.config:
                print(f"{error_prefix} verify needs --config or --list-configs", file=sys.stderr)
                return EXIT_USAGE_ERROR
            report = cmd_verify(
                args.config,
                seed=args.seed,
                tolerance_profile=args.tolerance_profile,
                jobs=args.jobs,
                timings=args.timings,
                log_level=args.log_level,
            )
        else:
            report = cmd_factorize(
                args.input_path,
                args.flag_spec,
                output_dir=args.output_dir,
                tolerance_profile=args.tolerance_profile,
                timings=args.timings,
            )
    except (ConfigurationError, CliArgumentError, CliFileError) as e:
        logger.error(f"Usage error: {e}")
        print(f"{error_prefix} {e}", file=sys.stderr)
        return EXIT_USAGE_ERROR
    except ValidationError as e:
        logger.error(f"Invalid input: {e}")
        print(f"{error_prefix} Invalid input: {e}", file=sys.stderr)
        return EXIT_USAGE_ERROR
    except SplurgeGeomrepError as e:
        logger.error(f"Run failed: {e}")
        print(f"{error_prefix} Run failed: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILURE
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        print(f"{error_prefix} Unexpected error: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILURE

    print_report(report, output_json=args.output_json, no_emoji=args.no_emoji, include_timings=args.timings)
    if not report.passed:
        logger.warning(f"{len(report.failed_checks)} checks failed")
        return EXIT_CHECK_FAILURE
    return EXIT_OK
