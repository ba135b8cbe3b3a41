"""
Unitary × block-triangular factorization and holomorphy diagnostics.

A flag is an ordered family of orthogonal projections e_1, ..., e_n summing
to 𝟏, with cumulative projections p_j = e_1 + ... + e_j. The group P holds the
invertible g with e_k g e_j = 0 for j < k, i.e. g p_j = p_j g p_j.

Every invertible g factors as g = uq with u unitary and q ∈ P. With
r_j = l(gp_j) − l(gp_{j−1}) the unitary is the sum of partial isometries v_j
carrying e_j onto r_j, so u e_j u* = r_j and u maps range(p_j) onto
range(g p_j). For rank-one coordinate flags this is the QR decomposition.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from splurge_geomrep.algebra_core import AlgebraElement, AlgebraSpec, haar_unitary_from_rng, spectral_decompose
from splurge_geomrep.bundle_kernel import realization_iota
from splurge_geomrep.config.constants import (
    DEFAULT_MAX_CHART_DIRECTIONS,
    DEFAULT_PARABOLIC_TOL,
    DEFAULT_PROJECTION_TOL,
    DEFAULT_RANK_CUTOFF,
    DEFAULT_SUBALGEBRA_TOL,
    MAX_HOLOMORPHY_STEP,
    MIN_HOLOMORPHY_STEP,
)
from splurge_geomrep.config.tolerance_config import ToleranceProfile
from splurge_geomrep.errors import (
    ChartError,
    FactorizationError,
    FlagError,
    NotInParabolicError,
    RankMismatchError,
    ShapeMismatchError,
    SingularElementError,
    SubalgebraError,
    ValidationError,
)
from splurge_geomrep.gns import State, SubGnsData
from splurge_geomrep.logging import configure_module_logging
from splurge_geomrep.result_models import CheckResult, CheckStatus

_ROUNDOFF_FLOOR_FACTOR: float = 1e4


def _range_basis(block: np.ndarray) -> np.ndarray:
    """Orthonormal columns spanning the range of a projection block."""
    left, sing, _ = np.linalg.svd(block)
    return left[:, sing > 0.5]


@dataclass(frozen=True, eq=False)
class Flag:
    """An ordered resolution of the identity e_1 + ... + e_n = 𝟏 by orthogonal projections."""

    projections: tuple[AlgebraElement, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "projections", tuple(self.projections))
        self.validate()

    def validate(self, tol: float = DEFAULT_PROJECTION_TOL) -> None:
        """
        Raises:
            FlagError: If the projections are not orthogonal, idempotent and complete
        """
        if not self.projections:
            raise FlagError("A flag needs at least one projection")
        spec = self.projections[0].spec
        total = spec.zero()
        for j, e in enumerate(self.projections):
            if e.spec != spec:
                raise FlagError("Flag projections belong to different algebras", {"index": j})
            if not e.is_projection(tol):
                raise FlagError(f"Flag entry {j} is not an orthogonal projection", {"index": j})
            if e.rank() == 0:
                raise FlagError(f"Flag entry {j} is zero", {"index": j})
            total = total + e
        for i, ei in enumerate(self.projections):
            for j in range(i + 1, len(self.projections)):
                overlap = (ei @ self.projections[j]).norm()
                if overlap > tol:
                    raise FlagError(f"Flag entries {i} and {j} are not orthogonal", {"residual": overlap})
        completeness = total.distance(spec.identity())
        if completeness > tol:
            raise FlagError("Flag projections do not sum to 𝟏", {"residual": completeness})

    @property
    def spec(self) -> AlgebraSpec:
        return self.projections[0].spec

    @property
    def length(self) -> int:
        return len(self.projections)

    @property
    def cumulative(self) -> list[AlgebraElement]:
        """p_1 ≤ p_2 ≤ ... ≤ p_n = 𝟏."""
        partial = self.spec.zero()
        result = []
        for e in self.projections:
            partial = partial + e
            result.append(partial)
        return result

    @property
    def ranks(self) -> list[int]:
        return [e.rank() for e in self.projections]

    def diagonal_part(self, g: AlgebraElement) -> AlgebraElement:
        """Σ_j e_j g e_j."""
        total = self.spec.zero()
        for e in self.projections:
            total = total + e @ g @ e
        return total

    def conjugate(self, w: AlgebraElement) -> Flag:
        """The flag w e_j w*."""
        return Flag(tuple(w @ e @ w.star() for e in self.projections))

    @classmethod
    def from_projections(cls, projections: Sequence[AlgebraElement]) -> Flag:
        return cls(tuple(projections))

    @classmethod
    def standard(cls, spec: AlgebraSpec, partition: Sequence[Sequence[int]]) -> Flag:
        """
        Coordinate flag from a per-block partition.

        Part j of every block contributes to e_j; blocks with fewer parts
        contribute zero there. ``[[2, 1], [1, 1]]`` on M_3 ⊕ M_2 gives
        e_1 = diag(1,1,0) ⊕ diag(1,0) and e_2 = diag(0,0,1) ⊕ diag(0,1).
        """
        if len(partition) != spec.num_blocks:
            raise FlagError(
                f"Partition has {len(partition)} blocks, algebra has {spec.num_blocks}",
                {"block_dims": list(spec.block_dims)},
            )
        for i, (parts, n) in enumerate(zip(partition, spec.block_dims)):
            if not parts or any(int(p) < 1 for p in parts) or sum(parts) != n:
                raise FlagError(f"Partition of block {i} must be positive parts summing to {n}", {"block": i})
        length = max(len(parts) for parts in partition)
        projections = []
        for j in range(length):
            blocks = []
            for parts, n in zip(partition, spec.block_dims):
                diag = np.zeros(n, dtype=complex)
                if j < len(parts):
                    start = sum(parts[:j])
                    diag[start : start + parts[j]] = 1.0
                blocks.append(np.diag(diag))
            projections.append(spec.element(blocks))
        return cls(tuple(projections))

    @classmethod
    def rank_one(cls, spec: AlgebraSpec) -> Flag:
        """The complete coordinate flag: every part has size one."""
        return cls.standard(spec, [[1] * n for n in spec.block_dims])

    @classmethod
    def random(cls, spec: AlgebraSpec, partition: Sequence[Sequence[int]], rng: np.random.Generator) -> Flag:
        """Haar-rotated coordinate flag."""
        return cls.standard(spec, partition).conjugate(haar_unitary_from_rng(spec, rng))

    @classmethod
    def from_state(cls, spec: AlgebraSpec, phi: State) -> Flag:
        """
        Spectral flag of the density, eigenvalues in increasing order.

        With this order ρ_φ extends to P through P_{H_φ} ρ(c) = ρ̃(c) P_{H_φ};
        for φ(a) = a_11 the kernel 1 − p comes first and p last.
        """
        _, projections = spectral_decompose(phi.density)
        return cls(tuple(reversed(projections)))


@dataclass(frozen=True, eq=False)
class FactorizationResult:
    """g = uq with u unitary and q ∈ P."""

    u: AlgebraElement
    q: AlgebraElement
    partial_isometries: tuple[AlgebraElement, ...]
    supports: tuple[AlgebraElement, ...]

    @property
    def transported(self) -> list[AlgebraElement]:
        """r_j = l(gp_j) − l(gp_{j−1})."""
        previous = self.u.spec.zero()
        result = []
        for support in self.supports:
            result.append(support - previous)
            previous = support
        return result


def left_support(b: AlgebraElement, rank_cutoff: float = DEFAULT_RANK_CUTOFF) -> AlgebraElement:
    """Projection onto the range of b: singular values above ``rank_cutoff·‖b‖`` count."""
    scale = b.norm()
    blocks = []
    for block in b.blocks:
        if scale == 0:
            blocks.append(np.zeros_like(block))
            continue
        left, sing, _ = np.linalg.svd(block)
        cols = left[:, sing > rank_cutoff * scale]
        blocks.append(cols @ cols.conj().T)
    return AlgebraElement(b.spec, tuple(blocks))


def smallest_singular_value(g: AlgebraElement) -> float:
    return min(float(np.linalg.svd(block, compute_uv=False)[-1]) for block in g.blocks)


def _require_invertible(g: AlgebraElement) -> None:
    sigma_min = smallest_singular_value(g)
    if sigma_min <= DEFAULT_RANK_CUTOFF * g.norm():
        raise SingularElementError(
            "Element is numerically singular", {"smallest_singular_value": sigma_min, "norm": g.norm()}
        )


def _partial_isometry(e: AlgebraElement, r: AlgebraElement) -> AlgebraElement:
    """
    The partial isometry v with v*v = e and vv* = r.

    Per block v = R W C† where C, R are orthonormal range bases of e and r and W
    is the unitary polar factor of R†C. The result does not depend on the bases.
    """
    blocks = []
    for e_block, r_block in zip(e.blocks, r.blocks):
        cols = _range_basis(e_block)
        rows = _range_basis(r_block)
        if cols.shape[1] != rows.shape[1]:
            raise RankMismatchError(
                "Support rank differs from flag rank", {"flag_rank": cols.shape[1], "support_rank": rows.shape[1]}
            )
        if cols.shape[1] == 0:
            blocks.append(np.zeros_like(e_block))
            continue
        w, _ = scipy.linalg.polar(rows.conj().T @ cols)
        blocks.append(rows @ w @ cols.conj().T)
    return AlgebraElement(e.spec, tuple(blocks))


def uq_factorize(g: AlgebraElement, flag: Flag) -> FactorizationResult:
    """
    Factor g = uq with u unitary and q block-upper-triangular for the flag.

    Raises:
        ShapeMismatchError: If g and the flag live in different algebras
        SingularElementError: If g is numerically singular
        RankMismatchError: If some rank l(gp_j) − rank l(gp_{j−1}) differs from rank e_j
    """
    if g.spec != flag.spec:
        raise ShapeMismatchError("Element and flag belong to different algebras")
    _require_invertible(g)

    spec = g.spec
    supports = [left_support(g @ p) for p in flag.cumulative]
    previous = spec.zero()
    isometries = []
    for j, (e, support) in enumerate(zip(flag.projections, supports)):
        r = support - previous
        if r.rank() != e.rank():
            raise RankMismatchError(
                f"Rank of r_{j + 1} differs from rank of e_{j + 1}", {"flag_rank": e.rank(), "support_rank": r.rank()}
            )
        isometries.append(_partial_isometry(e, r))
        previous = support

    u = spec.zero()
    for v in isometries:
        u = u + v
    q = u.star() @ g

    logger = configure_module_logging("factorization")
    logger.debug(f"Factorized element over a flag of length {flag.length}")
    return FactorizationResult(u=u, q=q, partial_isometries=tuple(isometries), supports=tuple(supports))


def parabolic_residual(g: AlgebraElement, flag: Flag) -> float:
    """max_{j<k} ‖e_k g e_j‖."""
    worst = 0.0
    for j, ej in enumerate(flag.projections):
        for ek in flag.projections[j + 1 :]:
            worst = max(worst, (ek @ g @ ej).norm())
    return worst


def member_of_P(g: AlgebraElement, flag: Flag, tol: float = DEFAULT_PARABOLIC_TOL) -> bool:
    """True iff g is invertible and e_k g e_j vanishes for j < k."""
    if g.spec != flag.spec:
        return False
    scale = g.norm()
    if scale == 0 or smallest_singular_value(g) <= DEFAULT_RANK_CUTOFF * scale:
        return False
    return parabolic_residual(g, flag) <= tol * scale


def unitary_parabolic_residual(c: AlgebraElement, flag: Flag) -> float:
    """Block-diagonality residual max_{j≠k} ‖e_k c e_j‖; zero for unitaries in P."""
    worst = 0.0
    for j, ej in enumerate(flag.projections):
        for k, ek in enumerate(flag.projections):
            if j != k:
                worst = max(worst, (ek @ c @ ej).norm())
    return worst


def random_parabolic(flag: Flag, rng: np.random.Generator) -> AlgebraElement:
    """(Σ e_j X e_j)(𝟏 + Σ_{j<k} e_j Y e_k) for Ginibre X, Y."""
    spec = flag.spec

    def ginibre() -> AlgebraElement:
        return AlgebraElement(
            spec,
            tuple(
                (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
                for n in spec.block_dims
            ),
        )

    diagonal = flag.diagonal_part(ginibre())
    y = ginibre()
    unipotent = spec.identity()
    for j, ej in enumerate(flag.projections):
        for ek in flag.projections[j + 1 :]:
            unipotent = unipotent + ej @ y @ ek
    return diagonal @ unipotent


def rho_tilde(sub: SubGnsData, flag: Flag, g: AlgebraElement) -> np.ndarray:
    """
    ρ̃_φ(g) = ρ_φ(e_1 g e_1 + ... + e_n g e_n) on H_φ.

    Raises:
        NotInParabolicError: If g ∉ P
        SubalgebraError: If the diagonal part of g is not in B
    """
    if not member_of_P(g, flag):
        raise NotInParabolicError(
            "ρ̃ is only defined on the block-triangular group", {"residual": parabolic_residual(g, flag)}
        )
    diagonal = flag.diagonal_part(g)
    distance = sub.distance_to_b(diagonal)
    if distance > DEFAULT_SUBALGEBRA_TOL * max(1.0, float(np.linalg.norm(diagonal.to_vector()))):
        raise SubalgebraError("Diagonal part of g is not in the subalgebra B", {"residual": distance})
    return sub.rho_phi(diagonal)


def qr_phase_residual(g: AlgebraElement, u: AlgebraElement) -> float:
    """
    ‖u†Q − diag(phases)‖ against a Householder QR of each block.

    Meaningful for the complete coordinate flag, where u and Q agree up to a
    diagonal unitary.
    """
    worst = 0.0
    for g_block, u_block in zip(g.blocks, u.blocks):
        householder_q, _ = scipy.linalg.qr(g_block)
        overlap = u_block.conj().T @ householder_q
        phases = np.diag(overlap)
        off = overlap - np.diag(phases)
        worst = max(worst, float(np.linalg.norm(off, 2)), float(np.max(np.abs(np.abs(phases) - 1.0))))
    return worst


def verify_factorization(
    g: AlgebraElement,
    flag: Flag,
    result: FactorizationResult,
    tolerances: ToleranceProfile | None = None,
) -> list[CheckResult]:
    """Residuals of g = uq: reconstruction, unitarity, q ∈ P, monotone supports, rank equality and transport."""
    profile = tolerances or ToleranceProfile()
    spec = g.spec
    one = spec.identity()
    u, q = result.u, result.q
    scale = max(g.norm(), 1e-300)

    reconstruction = g.distance(u @ q) / scale
    unitarity = max((u @ u.star()).distance(one), (u.star() @ u).distance(one))
    parabolic = parabolic_residual(q, flag) / max(1.0, scale)

    monotone = 0.0
    for lower, upper in zip(result.supports, result.supports[1:]):
        monotone = max(monotone, (upper @ lower).distance(lower))
    rank_gap = sum(abs(s.rank() - p.rank()) for s, p in zip(result.supports, flag.cumulative))

    transport = 0.0
    isometry = 0.0
    for e, r, v in zip(flag.projections, result.transported, result.partial_isometries):
        transport = max(transport, (u @ e @ u.star()).distance(r))
        isometry = max(isometry, (v.star() @ v).distance(e), (v @ v.star()).distance(r))

    checks = [
        CheckResult.evaluate("factorization.reconstruction", reconstruction, profile.reconstruction),
        CheckResult.evaluate("factorization.unitarity", unitarity, profile.unitarity),
        CheckResult.evaluate("factorization.parabolic", parabolic, profile.parabolic),
        CheckResult.evaluate("factorization.monotone_supports", monotone, profile.reconstruction),
        CheckResult.exact("factorization.rank_equality", rank_gap, 0),
        CheckResult.evaluate("factorization.transport", transport, profile.reconstruction),
        CheckResult.evaluate("factorization.partial_isometries", isometry, profile.reconstruction),
    ]
    _log_failures(checks)
    return checks


# -------- Holomorphy --------


@dataclass(frozen=True)
class HolomorphyResult:
    """Cauchy–Riemann residual at ``step`` and its estimated convergence order under step halving."""

    residual: float
    order: float
    step: float


def cauchy_riemann_residual(func: Callable[[complex], np.ndarray], z0: complex, step: float) -> float:
    """
    ‖∂_x f + i ∂_y f‖ / (‖∂_x f‖ + ‖∂_y f‖) with central differences.

    Zero for holomorphic f up to O(step²), one for antiholomorphic f.
    A locally constant f gives 0.
    """
    dx = (np.asarray(func(z0 + step)) - np.asarray(func(z0 - step))) / (2 * step)
    dy = (np.asarray(func(z0 + 1j * step)) - np.asarray(func(z0 - 1j * step))) / (2 * step)
    scale = float(np.linalg.norm(dx) + np.linalg.norm(dy))
    if scale <= np.finfo(float).tiny:
        return 0.0
    return float(np.linalg.norm(dx + 1j * dy)) / scale


def _check_step(step: float) -> None:
    if not MIN_HOLOMORPHY_STEP <= step <= MAX_HOLOMORPHY_STEP:
        raise ValidationError(
            f"Finite-difference step must lie in [{MIN_HOLOMORPHY_STEP:g}, {MAX_HOLOMORPHY_STEP:g}]",
            {"step": step},
        )


def holomorphy_check(func: Callable[[complex], np.ndarray], z0: complex, step: float) -> HolomorphyResult:
    """
    CR residual at ``step`` and ``step/2`` with the order estimate log2(r(h)/r(h/2)).

    When both residuals sit at the rounding floor eps·‖f‖/(h·‖f'‖) the section
    is exact at this resolution and the order is reported as infinite.
    """
    _check_step(step)
    coarse = cauchy_riemann_residual(func, z0, step)
    fine = cauchy_riemann_residual(func, z0, step / 2)

    value = float(np.linalg.norm(np.asarray(func(z0))))
    dx = (np.asarray(func(z0 + step)) - np.asarray(func(z0 - step))) / (2 * step)
    slope = float(np.linalg.norm(dx))
    if slope <= np.finfo(float).tiny:
        return HolomorphyResult(coarse, float("inf"), step)
    floor = _ROUNDOFF_FLOOR_FACTOR * np.finfo(float).eps * max(value, slope) / ((step / 2) * slope)
    if (coarse <= floor and fine <= floor) or fine == 0.0:
        order = float("inf")
    elif coarse == 0.0:
        order = 0.0
    else:
        order = float(np.log2(coarse / fine))
    return HolomorphyResult(coarse, order, step)


def chart_directions(flag: Flag, max_directions: int = DEFAULT_MAX_CHART_DIRECTIONS) -> list[AlgebraElement]:
    """
    Coordinate directions of the big cell of G/P.

    Each direction is a rank-one X mapping range(e_j) into range(e_k) for k > j,
    inside a single algebra block; X² = 0.
    """
    spec = flag.spec
    bases = [[_range_basis(e.blocks[i]) for i in range(spec.num_blocks)] for e in flag.projections]
    directions: list[AlgebraElement] = []
    for block, n in enumerate(spec.block_dims):
        for j in range(flag.length):
            for k in range(j + 1, flag.length):
                source, target = bases[j][block], bases[k][block]
                for a in range(target.shape[1]):
                    for b in range(source.shape[1]):
                        blocks = [np.zeros((m, m), dtype=complex) for m in spec.block_dims]
                        blocks[block] = np.outer(target[:, a], source[:, b].conj())
                        directions.append(spec.element(blocks))
                        if len(directions) >= max_directions:
                            return directions
    return directions


def _expm(x: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(x.spec, tuple(scipy.linalg.expm(block) for block in x.blocks))


def holomorphic_section(
    sub: SubGnsData,
    flag: Flag,
    h: np.ndarray,
    chart_center: AlgebraElement,
    direction: AlgebraElement,
) -> Callable[[complex], np.ndarray]:
    """
    z ↦ ρ̃(q)⁻¹ ι(h)(u) for g(z) = chart_center·exp(zX) = uq.

    This is the section ι(h) in the trivialization over G/P. It equals
    P_{H_φ} ρ(g(z))⁻¹ h in embedded coordinates.

    Raises:
        ChartError: If g(z) leaves the open cell where the factorization exists
    """
    vec = np.asarray(h, dtype=complex).reshape(-1)

    def section(z: complex) -> np.ndarray:
        g = chart_center @ _expm(direction * z)
        try:
            result = uq_factorize(g, flag)
            frame = rho_tilde(sub, flag, result.q)
        except FactorizationError as e:
            raise ChartError("Chart point left the open cell", {"z": str(z)}) from e
        return np.linalg.solve(frame, realization_iota(sub, vec, result.u).f)

    return section


def holomorphy_residual(
    sub: SubGnsData,
    flag: Flag,
    h: np.ndarray,
    chart_center: AlgebraElement,
    step: float,
    conjugate: bool = False,
    max_directions: int = DEFAULT_MAX_CHART_DIRECTIONS,
) -> float:
    """Max CR residual of ι(h) along the chart directions. ``conjugate`` swaps in the antiholomorphic control."""
    return holomorphy_report(sub, flag, h, chart_center, step, conjugate, max_directions).residual


def holomorphy_report(
    sub: SubGnsData,
    flag: Flag,
    h: np.ndarray,
    chart_center: AlgebraElement,
    step: float,
    conjugate: bool = False,
    max_directions: int = DEFAULT_MAX_CHART_DIRECTIONS,
) -> HolomorphyResult:
    """Worst residual and worst order over all chart directions."""
    _check_step(step)
    residual = 0.0
    order = float("inf")
    for direction in chart_directions(flag, max_directions):
        section = holomorphic_section(sub, flag, h, chart_center, direction)
        func = (lambda z, s=section: np.conj(s(z))) if conjugate else section
        result = holomorphy_check(func, 0.0, step)
        residual = max(residual, result.residual)
        order = min(order, result.order)
    return HolomorphyResult(residual, order, step)


def _log_failures(checks: Sequence[CheckResult]) -> None:
    logger = configure_module_logging("factorization")
    for check in checks:
        if check.status == CheckStatus.FAIL:
            logger.warning(f"Check {check.name} failed: residual={check.residual:.3e} tolerance={check.tolerance:.1e}")
