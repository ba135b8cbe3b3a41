"""
Check-suite drivers behind the CLI subcommands.

An ``Experiment`` bundles the algebra, state, GNS data, subalgebra and
expectation built from a config. Check groups are independent functions of
(experiment, generator); each group owns one generator split off the run
seed, so the report is the same whether groups run in sequence or on a
thread pool.

Stream layout (index into ``spawn_generators(seed, STREAM_COUNT)``):

    0 state density      4 reproducing        8 algebra
    1 GNS                5 realization        9 rho_tilde
    2 expectation        6 factorization
    3 kernel             7 holomorphy

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np

from splurge_geomrep.algebra_core import (
    AlgebraElement,
    AlgebraSpec,
    centralizer,
    commutant,
    haar_unitary_from_rng,
    orbit_parametrization,
    principal_angle,
    spectral_decompose,
    tau_gram,
    theta_tau,
    theta_tau_matrix,
    trace_tau,
    unitary_from_selfadjoint,
)
from splurge_geomrep.bundle_kernel import (
    kernel_eval,
    kernel_gram,
    verify_gram,
    verify_kernel,
    verify_realization,
    verify_reproducing,
)
from splurge_geomrep.config.constants import (
    DEFAULT_HOLOMORPHY_STEP,
    DEFAULT_KERNEL_PAIRS,
    MAX_BOREL_WEIL_N,
    MIN_BOREL_WEIL_N,
    MIN_CONTROL_RESIDUAL,
    MIN_CONVERGENCE_ORDER,
)
from splurge_geomrep.config.experiment_config import ExperimentConfig, SampleSection
from splurge_geomrep.config.tolerance_config import ToleranceProfile
from splurge_geomrep.errors import ChartError, CliArgumentError, FactorizationError, SubalgebraError
from splurge_geomrep.factorization import (
    Flag,
    holomorphy_report,
    member_of_P,
    qr_phase_residual,
    random_parabolic,
    rho_tilde,
    unitary_parabolic_residual,
    uq_factorize,
    verify_factorization,
)
from splurge_geomrep.gns import (
    CondExpectation,
    GnsData,
    State,
    SubGnsData,
    centralizer_expectation,
    centralizer_subalgebra,
    extension_purity,
    full_subalgebra,
    gns_build,
    identity_expectation,
    is_pure,
    scalar_expectation,
    scalar_subalgebra,
    sub_gns,
    support_expectation,
    verify_expectation,
    verify_gns,
    verify_sub_gns,
)
from splurge_geomrep.logging import (
    TimingRecorder,
    configure_module_logging,
    get_run_id,
    performance_context,
    run_context,
)
from splurge_geomrep.result_models import CheckResult, CheckStatus, merge_worst
from splurge_geomrep.utils.sampling import (
    haar_unitaries,
    random_density,
    random_element,
    random_hermitian,
    random_invertible,
    random_vector,
    spawn_generators,
)

STREAM_COUNT: int = 10
(
    _STATE,
    _GNS,
    _EXPECTATION,
    _KERNEL,
    _REPRODUCING,
    _REALIZATION,
    _FACTORIZATION,
    _HOLOMORPHY,
    _ALGEBRA,
    _RHO_TILDE,
) = range(STREAM_COUNT)

_BUNDLE_BASES: dict[str, str] = {
    "full": "point",
    "scalars": "U_A/T1",
    "centralizer": "U_A/U_(A^phi)",
    "explicit": "U_A/U_B",
}

CheckGroup = Callable[["Experiment", np.random.Generator], list[CheckResult]]


@dataclass(frozen=True, eq=False)
class Experiment:
    """Everything a check group needs, built once per run."""

    spec: AlgebraSpec
    state: State
    gns: GnsData
    sub: SubGnsData
    subalgebra_kind: str
    expectation: CondExpectation | None
    samples: SampleSection
    profile: ToleranceProfile
    pure: bool

    @property
    def holomorphy_asserted(self) -> bool:
        """The section test has a known answer only for pure states compressed to the centralizer."""
        return self.pure and self.subalgebra_kind == "centralizer"


def _build_state(config: ExperimentConfig, spec: AlgebraSpec, rng: np.random.Generator) -> State:
    section = config.state
    if section.kind == "tracial":
        return State.tracial(spec)
    if section.kind == "corner":
        return State.corner(spec)
    if section.kind == "random":
        return State.from_density(spec, random_density(spec, rng))
    if section.kind == "random_rank":
        return State.from_density(spec, random_density(spec, rng, rank=section.parameter))
    return State.from_density(spec, spec.element(section.density or []))


def _build_subalgebra(
    config: ExperimentConfig, spec: AlgebraSpec, state: State
) -> tuple[list[AlgebraElement], CondExpectation | None]:
    kind = config.subalgebra.kind
    if kind == "full":
        return full_subalgebra(spec), identity_expectation(spec)
    if kind == "scalars":
        return scalar_subalgebra(spec), scalar_expectation(spec, state)
    if kind == "centralizer":
        return centralizer_subalgebra(spec, state), centralizer_expectation(spec, state)
    # an explicit B is only verified; no expectation onto it is constructed
    return [spec.element(blocks) for blocks in config.subalgebra.basis or []], None


def build_experiment(config: ExperimentConfig, profile: ToleranceProfile) -> Experiment:
    """
    Build the algebra, state, GNS data and subalgebra described by ``config``.

    Raises:
        StateError: If the configured density is not a state
        SubalgebraError: If an explicit basis does not span a unital *-subalgebra
    """
    logger = configure_module_logging("experiments")
    spec = AlgebraSpec.from_dims(config.algebra.block_dims, config.algebra.trace_weights)
    state = _build_state(config, spec, spawn_generators(config.seed, STREAM_COUNT)[_STATE])
    basis, expectation = _build_subalgebra(config, spec, state)
    gns = gns_build(spec, state)
    sub = sub_gns(gns, basis)
    logger.info(
        f"Built experiment block_dims={list(spec.block_dims)} state={config.state.kind} "
        f"subalgebra={config.subalgebra.kind} dim_H={gns.dim_H} dim_Hphi={sub.dim_Hphi}"
    )
    return Experiment(
        spec=spec,
        state=state,
        gns=gns,
        sub=sub,
        subalgebra_kind=config.subalgebra.kind,
        expectation=expectation,
        samples=config.samples,
        profile=profile,
        pure=is_pure(spec, state),
    )


def experiment_metadata(exp: Experiment) -> dict[str, Any]:
    """Structural facts echoed into the report."""
    orbit = orbit_parametrization(exp.spec, exp.state.functional)
    return {
        "block_dims": list(exp.spec.block_dims),
        "trace_weights": [round(w, 12) for w in exp.spec.trace_weights],
        "subalgebra": exp.subalgebra_kind,
        "dim_A": exp.spec.dim,
        "dim_B": exp.sub.b_dim,
        "dim_H": exp.gns.dim_H,
        "dim_Hphi": exp.sub.dim_Hphi,
        "centralizer_dim": orbit.centralizer_dim,
        "orbit_real_dim": orbit.orbit_real_dim,
        "pure": exp.pure,
        "faithful": exp.state.is_faithful(),
        "bundle_base": _BUNDLE_BASES[exp.subalgebra_kind],
        "tolerance_profile": exp.profile.name,
    }


# -------- Check groups --------


def algebra_checks(exp: Experiment, rng: np.random.Generator) -> list[CheckResult]:
    """Trace property, Θ^τ injectivity, centralizer = commutant, equivariance and the C*-identity."""
    spec, profile = exp.spec, exp.profile
    a = random_element(spec, rng)
    b = random_element(spec, rng)
    scale = a.norm() * b.norm()
    trace_gap = abs(trace_tau(spec, a @ b) - trace_tau(spec, b @ a)) / scale

    gram_min = float(np.linalg.eigvalsh(tau_gram(spec))[0])
    theta_min = float(np.linalg.svd(theta_tau_matrix(spec), compute_uv=False)[-1])

    angle = principal_angle(
        centralizer(spec, exp.state.functional), commutant(spec, [exp.state.density])
    )

    # Θ_{gag⁻¹}(b) = Θ_a(g⁻¹bg)
    g = random_invertible(spec, rng)
    g_inv = g.inverse()
    moved = theta_tau(spec, g @ a @ g_inv)
    original = theta_tau(spec, a)
    equivariance = max(
        abs(moved(x) - original(g_inv @ x @ g)) / (a.norm() * max(1.0, g.norm() * g_inv.norm()))
        for x in spec.canonical_basis()
    )

    c_star = abs((a.star() @ a).norm() - a.norm() ** 2) / a.norm() ** 2

    h = random_hermitian(spec, rng, norm=1.0)
    u = unitary_from_selfadjoint(h)
    one = spec.identity()
    unitary_span = max(
        (u @ u.star()).distance(one),
        h.distance((u + u.star()) * 0.5),
    )

    values, projections = spectral_decompose(exp.state.density)
    rebuilt = spec.zero()
    for lam, f in zip(values, projections):
        rebuilt = rebuilt + f * lam
    spectral = exp.state.density.distance(rebuilt) / max(1.0, exp.state.density.norm())

    return [
        CheckResult.evaluate("algebra.trace_property", trace_gap, profile.algebra),
        CheckResult.evaluate("algebra.tau_gram_pd", gram_min, profile.algebra, minimum=True),
        CheckResult.evaluate("algebra.theta_injective", theta_min, profile.algebra, minimum=True),
        CheckResult.evaluate("algebra.centralizer_commutant", angle, profile.principal_angle),
        CheckResult.evaluate("algebra.equivariance", equivariance, profile.equivariance),
        CheckResult.evaluate("algebra.c_star_identity", c_star, profile.algebra),
        CheckResult.evaluate("algebra.unitary_span", unitary_span, profile.algebra),
        CheckResult.evaluate("algebra.spectral", spectral, profile.algebra),
    ]


def gns_checks(exp: Experiment, rng: np.random.Generator) -> list[CheckResult]:
    checks = verify_gns(exp.gns, rng, exp.samples.points, exp.profile)
    checks.extend(verify_sub_gns(exp.sub, exp.expectation, rng, exp.samples.points, exp.profile))
    if exp.expectation is None:
        checks.append(CheckResult.not_determined("gns.extension_purity"))
    else:
        status = extension_purity(exp.spec, exp.expectation, exp.state)
        if status == CheckStatus.NOT_DETERMINED:
            checks.append(CheckResult.not_determined("gns.extension_purity"))
        else:
            checks.append(CheckResult.flag("gns.extension_purity", status == CheckStatus.PASS))
    return checks


def expectation_checks(exp: Experiment, rng: np.random.Generator) -> list[CheckResult]:
    if exp.expectation is None:
        return [CheckResult.not_determined("expectation.constructed")]
    checks = verify_expectation(
        exp.spec, exp.expectation, exp.state, rng, exp.samples.expectation_inputs, exp.profile
    )
    if exp.subalgebra_kind == "centralizer":
        support_form = support_expectation(exp.spec, exp.state)
        gap = float(np.linalg.norm(support_form.matrix - exp.expectation.matrix, 2))
        checks.append(CheckResult.evaluate("expectation.support_form", gap, exp.profile.expectation))
    return checks


def kernel_checks(exp: Experiment, rng: np.random.Generator) -> list[CheckResult]:
    points = haar_unitaries(exp.spec, rng, exp.samples.points)
    pair_count = min(DEFAULT_KERNEL_PAIRS, len(points) * len(points))
    pairs = [(points[k % len(points)], points[(k // len(points)) % len(points)]) for k in range(pair_count)]
    vectors = [random_vector(rng, exp.sub.dim_Hphi) for _ in points]
    rkhs = kernel_gram(exp.sub, points, vectors)
    checks = verify_kernel(exp.sub, pairs, exp.profile)
    checks.extend(verify_gram(rkhs, exp.profile))
    return checks


def reproducing_checks(exp: Experiment, rng: np.random.Generator) -> list[CheckResult]:
    points = haar_unitaries(exp.spec, rng, exp.samples.points)
    vectors = [random_vector(rng, exp.sub.dim_Hphi) for _ in points]
    rkhs = kernel_gram(exp.sub, points, vectors)
    return verify_reproducing(rkhs, exp.sub, rng, exp.samples.vectors, exp.profile)


def realization_checks(exp: Experiment, rng: np.random.Generator) -> list[CheckResult]:
    unitaries = haar_unitaries(exp.spec, rng, max(exp.samples.unitaries, 2 * exp.gns.dim_H))
    vectors = [random_vector(rng, exp.gns.dim_H) for _ in range(exp.samples.vectors)]
    return verify_realization(exp.sub, unitaries, vectors, rng, exp.profile)


def _halves(spec: AlgebraSpec) -> list[list[int]]:
    partition = []
    for n in spec.block_dims:
        first = (n + 1) // 2
        partition.append([first, n - first] if n > first else [first])
    return partition


def factorization_checks(exp: Experiment, rng: np.random.Generator) -> list[CheckResult]:
    """
    Random g against alternating flags.

    Even samples use the complete coordinate flag and are compared with
    Householder QR; odd samples use a Haar-rotated two-step flag.
    """
    spec, profile = exp.spec, exp.profile
    checks: list[CheckResult] = []
    for k in range(exp.samples.factorizations):
        g = random_invertible(spec, rng)
        flag = Flag.rank_one(spec) if k % 2 == 0 else Flag.random(spec, _halves(spec), rng)
        result = uq_factorize(g, flag)
        checks.extend(verify_factorization(g, flag, result, profile))
        if k % 2 == 0:
            phase = qr_phase_residual(g, result.u)
            checks.append(CheckResult.evaluate("factorization.qr_phase", phase, profile.qr_phase))

    flag = Flag.random(spec, _halves(spec), rng)
    u1 = haar_unitary_from_rng(spec, rng)
    d = flag.diagonal_part(random_hermitian(spec, rng)).apply_function(lambda x: np.exp(1j * x))
    u2 = u1 @ d.star()
    c = u2.star() @ u1
    membership = 0.0 if member_of_P(c, flag) else 1.0
    checks.append(
        CheckResult.evaluate(
            "factorization.unitary_parabolic",
            max(membership, unitary_parabolic_residual(c, flag)),
            profile.parabolic,
        )
    )
    return merge_worst(checks)


def rho_tilde_checks(exp: Experiment, rng: np.random.Generator) -> list[CheckResult]:
    """ρ̃ extends ρ_φ from the diagonal group and is multiplicative on P."""
    flag = Flag.from_state(exp.spec, exp.state)
    tol = exp.profile.rho_tilde
    extension = homomorphism = 0.0
    try:
        for _ in range(max(1, exp.samples.factorizations // 2)):
            d = flag.diagonal_part(random_invertible(exp.spec, rng))
            extension = max(
                extension,
                float(np.linalg.norm(rho_tilde(exp.sub, flag, d) - exp.sub.rho_phi(d), 2)) / max(1.0, d.norm()),
            )
            g1 = random_parabolic(flag, rng)
            g2 = random_parabolic(flag, rng)
            r1 = rho_tilde(exp.sub, flag, g1)
            r2 = rho_tilde(exp.sub, flag, g2)
            scale = max(1.0, float(np.linalg.norm(r1, 2) * np.linalg.norm(r2, 2)))
            homomorphism = max(
                homomorphism, float(np.linalg.norm(rho_tilde(exp.sub, flag, g1 @ g2) - r1 @ r2, 2)) / scale
            )
    except SubalgebraError:
        return [CheckResult.not_determined("rho_tilde.extension"), CheckResult.not_determined("rho_tilde.homomorphism")]
    return [
        CheckResult.evaluate("rho_tilde.extension", extension, tol),
        CheckResult.evaluate("rho_tilde.homomorphism", homomorphism, tol),
    ]


def holomorphy_checks(exp: Experiment, rng: np.random.Generator) -> list[CheckResult]:
    """
    Cauchy–Riemann test of z ↦ ι(h)(g(z)) along the chart of G/P.

    Asserted for pure states compressed to the centralizer; otherwise the
    residual is reported with status not determined.
    """
    names = ("holomorphy.residual", "holomorphy.order", "holomorphy.control")
    flag = Flag.from_state(exp.spec, exp.state)
    if flag.length < 2:
        return [CheckResult.not_determined(name) for name in names]
    h = random_vector(rng, exp.gns.dim_H)
    center = haar_unitary_from_rng(exp.spec, rng)
    try:
        section = holomorphy_report(exp.sub, flag, h, center, DEFAULT_HOLOMORPHY_STEP)
        control = holomorphy_report(exp.sub, flag, h, center, DEFAULT_HOLOMORPHY_STEP, conjugate=True)
    except SubalgebraError:
        return [CheckResult.not_determined(name) for name in names]
    except (ChartError, FactorizationError):
        return [CheckResult.flag("holomorphy.chart", False)]

    tol = exp.profile.holomorphy
    if exp.holomorphy_asserted:
        return [
            CheckResult.evaluate("holomorphy.residual", section.residual, tol),
            CheckResult.evaluate("holomorphy.order", section.order, MIN_CONVERGENCE_ORDER, minimum=True),
            CheckResult.evaluate("holomorphy.control", control.residual, MIN_CONTROL_RESIDUAL, minimum=True),
        ]
    return [CheckResult("holomorphy.residual", section.residual, tol, CheckStatus.NOT_DETERMINED)]


VERIFY_GROUPS: tuple[tuple[str, CheckGroup, int], ...] = (
    ("algebra", algebra_checks, _ALGEBRA),
    ("gns", gns_checks, _GNS),
    ("expectation", expectation_checks, _EXPECTATION),
    ("kernel", kernel_checks, _KERNEL),
    ("reproducing", reproducing_checks, _REPRODUCING),
    ("realization", realization_checks, _REALIZATION),
    ("factorization", factorization_checks, _FACTORIZATION),
    ("rho_tilde", rho_tilde_checks, _RHO_TILDE),
    ("holomorphy", holomorphy_checks, _HOLOMORPHY),
)


def run_groups(
    exp: Experiment,
    groups: Sequence[tuple[str, CheckGroup, np.random.Generator]],
    jobs: int = 1,
    recorder: TimingRecorder | None = None,
) -> list[CheckResult]:
    """
    Run check groups, possibly on a thread pool, and concatenate in group order.

    Each group receives its own generator, so scheduling does not change results.
    Workers log under the caller's run id.
    """
    run_id = get_run_id()

    def run(entry: tuple[str, CheckGroup, np.random.Generator]) -> list[CheckResult]:
        name, group, rng = entry
        with run_context(run_id), performance_context(name, recorder):
            return group(exp, rng)

    if jobs <= 1:
        results = [run(entry) for entry in groups]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(run, groups))
    return [check for group_checks in results for check in group_checks]


def _streams(
    seed: int, groups: Sequence[tuple[str, CheckGroup, int]]
) -> list[tuple[str, CheckGroup, np.random.Generator]]:
    generators = spawn_generators(seed, STREAM_COUNT)
    return [(name, group, generators[index]) for name, group, index in groups]


def run_verify(
    config: ExperimentConfig,
    profile: ToleranceProfile,
    jobs: int = 1,
    recorder: TimingRecorder | None = None,
) -> tuple[list[CheckResult], dict[str, Any]]:
    """Full residual suite for a config. Returns the checks and the metadata echo."""
    with performance_context("build", recorder):
        exp = build_experiment(config, profile)
    checks = run_groups(exp, _streams(config.seed, VERIFY_GROUPS), jobs, recorder)
    metadata = {"config": config.name, "state": config.state.kind, **experiment_metadata(exp)}
    return checks, metadata


# -------- Line-bundle example on M_n --------


def _borel_weil_structure(exp: Experiment, rng: np.random.Generator) -> list[CheckResult]:
    n = exp.spec.block_dims[0]
    orbit = orbit_parametrization(exp.spec, exp.state.functional)
    return [
        CheckResult.exact("borel_weil.dim_H", exp.gns.dim_H, n),
        CheckResult.exact("borel_weil.dim_Hphi", exp.sub.dim_Hphi, 1),
        CheckResult.flag("borel_weil.pure", exp.pure),
        CheckResult.exact("borel_weil.orbit_dimension", orbit.orbit_real_dim, 2 * (n - 1)),
    ]


def _borel_weil_kernel(exp: Experiment, rng: np.random.Generator) -> list[CheckResult]:
    """K(u_1, u_2) against the closed form (u_1†u_2)_11, and the rank of the section space."""
    n = exp.spec.block_dims[0]
    closed_form = 0.0
    pairs = []
    for _ in range(DEFAULT_KERNEL_PAIRS):
        u1, u2 = haar_unitaries(exp.spec, rng, 2)
        pairs.append((u1, u2))
        value = kernel_eval(exp.sub, u1, u2).matrix[0, 0]
        expected = (u1.blocks[0].conj().T @ u2.blocks[0])[0, 0]
        closed_form = max(closed_form, abs(value - expected))

    points = haar_unitaries(exp.spec, rng, 2 * n * n)
    rkhs = kernel_gram(exp.sub, points, [random_vector(rng, 1) for _ in points])

    checks = [
        CheckResult.evaluate("borel_weil.kernel_closed_form", closed_form, exp.profile.kernel_closed_form),
        CheckResult.exact("borel_weil.rkhs_rank", rkhs.rank(), n),
    ]
    checks.extend(verify_kernel(exp.sub, pairs, exp.profile))
    checks.extend(verify_gram(rkhs, exp.profile))
    return checks


BOREL_WEIL_GROUPS: tuple[tuple[str, CheckGroup, int], ...] = (
    ("structure", _borel_weil_structure, _ALGEBRA),
    ("gns", gns_checks, _GNS),
    ("kernel", _borel_weil_kernel, _KERNEL),
    ("reproducing", reproducing_checks, _REPRODUCING),
    ("realization", realization_checks, _REALIZATION),
    ("rho_tilde", rho_tilde_checks, _RHO_TILDE),
    ("holomorphy", holomorphy_checks, _HOLOMORPHY),
)


def borel_weil_config(n: int, seed: int) -> ExperimentConfig:
    """
    Config for M_n with φ(a) = a_11 compressed to its centralizer.

    Raises:
        CliArgumentError: If n is outside the supported range
    """
    if not MIN_BOREL_WEIL_N <= n <= MAX_BOREL_WEIL_N:
        raise CliArgumentError(
            f"n must lie in [{MIN_BOREL_WEIL_N}, {MAX_BOREL_WEIL_N}], got {n}", {"n": n}
        )
    return ExperimentConfig.from_json_text(
        f'{{"name": "borel_weil_{n}", "algebra": {{"block_dims": [{n}]}}, '
        f'"state": "corner({n})", "subalgebra": "centralizer", "seed": {seed}}}'
    )


def run_borel_weil(
    n: int,
    seed: int,
    profile: ToleranceProfile,
    jobs: int = 1,
    recorder: TimingRecorder | None = None,
) -> tuple[ExperimentConfig, list[CheckResult], dict[str, Any]]:
    """Line-bundle example: the natural representation of U(n) realized on sections over ℙ^{n−1}."""
    config = borel_weil_config(n, seed)
    with performance_context("build", recorder):
        exp = build_experiment(config, profile)
    checks = run_groups(exp, _streams(seed, BOREL_WEIL_GROUPS), jobs, recorder)
    metadata = {"n": n, **experiment_metadata(exp)}
    return config, checks, metadata
