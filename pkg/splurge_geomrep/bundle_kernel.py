"""
Homogeneous bundle, reproducing kernel and the realization operator.

Points of the bundle U_A ×_{U_B} H_φ are stored as explicit representatives
(u, f); two representatives are compared through ``fiber_equal`` and never
componentwise. Operators between fibers are written in the frames fixed by
the representatives, so

    K(u_1, u_2) = embed† ρ(u_1* u_2) embed,     ev_u = embed† ρ(u)†.

Sections on finite point sets are spans Σ c_j K(·, u_j) ξ_j; their Hilbert
space is the Gram quotient c ↦ c† G c.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from splurge_geomrep.algebra_core import AlgebraElement
from splurge_geomrep.config.constants import (
    DEFAULT_FIBER_TOL,
    DEFAULT_GRAM_CUTOFF,
    DEFAULT_SAMPLE_VECTORS,
    DEFAULT_UNITARY_TOL,
)
from splurge_geomrep.config.tolerance_config import ToleranceProfile
from splurge_geomrep.errors import NotUnitaryError, ShapeMismatchError
from splurge_geomrep.gns import SubGnsData
from splurge_geomrep.logging import configure_module_logging
from splurge_geomrep.result_models import CheckResult, CheckStatus
from splurge_geomrep.utils.sampling import haar_unitaries, random_vector


def _require_unitary(u: AlgebraElement, label: str = "u") -> None:
    if not u.is_unitary(DEFAULT_UNITARY_TOL):
        one = u.spec.identity()
        raise NotUnitaryError(
            f"Expected a unitary element for {label}",
            {"residual": max((u @ u.star()).distance(one), (u.star() @ u).distance(one))},
        )


@dataclass(frozen=True, eq=False)
class FiberVector:
    """A representative (u, f) of a point of U_A ×_{U_B} H_φ."""

    rep_unitary: AlgebraElement
    fiber_coeffs: np.ndarray

    def __post_init__(self) -> None:
        _require_unitary(self.rep_unitary, "rep_unitary")
        coeffs = np.array(self.fiber_coeffs, dtype=complex).reshape(-1)
        coeffs.flags.writeable = False
        object.__setattr__(self, "fiber_coeffs", coeffs)

    @property
    def u(self) -> AlgebraElement:
        return self.rep_unitary

    @property
    def f(self) -> np.ndarray:
        return self.fiber_coeffs


@dataclass(frozen=True, eq=False)
class KernelOperator:
    """K(s, t): (D)_t → (D)_s in the frames of the chosen representatives."""

    matrix: np.ndarray

    def apply(self, f: np.ndarray) -> np.ndarray:
        return self.matrix @ f

    def adjoint(self) -> KernelOperator:
        return KernelOperator(self.matrix.conj().T)


def _check_fiber(sub: SubGnsData, f: np.ndarray) -> None:
    if f.shape != (sub.dim_Hphi,):
        raise ShapeMismatchError(
            f"Fiber vector has shape {f.shape}, expected ({sub.dim_Hphi},)", {"dim_Hphi": sub.dim_Hphi}
        )


def fiber_distance(sub: SubGnsData, x: FiberVector, y: FiberVector) -> float:
    """
    ‖x.f − ρ_φ(v*) y.f‖ with v = y.u* x.u, or ∞ when v ∉ U_B.

    (u_1, f_1) ~ (u_2, f_2) iff u_1 = u_2 v and f_1 = ρ_φ(v⁻¹) f_2 for some v ∈ U_B.
    """
    v = y.u.star() @ x.u
    if not v.is_unitary(DEFAULT_FIBER_TOL) or sub.distance_to_b(v) >= DEFAULT_FIBER_TOL:
        return float("inf")
    return float(np.linalg.norm(x.f - sub.rho_phi(v.star()) @ y.f))


def fiber_equal(sub: SubGnsData, x: FiberVector, y: FiberVector, tol: float = DEFAULT_FIBER_TOL) -> bool:
    """Equality of bundle points, independent of the representatives."""
    return fiber_distance(sub, x, y) < tol


def group_act(uprime: AlgebraElement, x: FiberVector) -> FiberVector:
    """u'·[(u, f)] = [(u'u, f)]."""
    _require_unitary(uprime, "uprime")
    return FiberVector(uprime @ x.u, x.f)


def evaluation_operator(sub: SubGnsData, u: AlgebraElement) -> np.ndarray:
    """ev_u = embed† ρ(u)†: H → H_φ."""
    _require_unitary(u)
    return sub.embed.conj().T @ sub.parent.rho(u).conj().T


def realization_iota(sub: SubGnsData, h: np.ndarray, u: AlgebraElement) -> FiberVector:
    """ι(h)(uU_B) = [(u, P_{H_φ} ρ(u)⁻¹ h)]."""
    vec = np.asarray(h, dtype=complex).reshape(-1)
    if vec.shape[0] != sub.parent.dim_H:
        raise ShapeMismatchError(
            f"GNS vector has length {vec.shape[0]}, expected {sub.parent.dim_H}", {"dim_H": sub.parent.dim_H}
        )
    return FiberVector(u, evaluation_operator(sub, u) @ vec)


def kernel_eval(sub: SubGnsData, u1: AlgebraElement, u2: AlgebraElement) -> KernelOperator:
    """K(u_1 U_B, u_2 U_B) = embed† ρ(u_1* u_2) embed."""
    _require_unitary(u1, "u1")
    _require_unitary(u2, "u2")
    return KernelOperator(sub.embed.conj().T @ sub.parent.rho(u1.star() @ u2) @ sub.embed)


def kernel_symmetry_residual(sub: SubGnsData, u1: AlgebraElement, u2: AlgebraElement) -> float:
    """‖K(u_1,u_2) − K(u_2,u_1)†‖."""
    return float(np.linalg.norm(kernel_eval(sub, u1, u2).matrix - kernel_eval(sub, u2, u1).matrix.conj().T, 2))


def ev_factorization_residual(sub: SubGnsData, u1: AlgebraElement, u2: AlgebraElement) -> float:
    """‖K(u_1,u_2) − ev_{u_1} ev_{u_2}†‖."""
    product = evaluation_operator(sub, u1) @ evaluation_operator(sub, u2).conj().T
    return float(np.linalg.norm(kernel_eval(sub, u1, u2).matrix - product, 2))


def _kernel_row(sub: SubGnsData, u: AlgebraElement, points: Sequence[AlgebraElement]) -> np.ndarray:
    """K(u, t_j) for every point, shape (len(points), dim_Hphi, dim_Hphi)."""
    u_star = u.star()
    coeffs = np.stack([(u_star @ t).to_vector() for t in points])
    rho = np.einsum("pj,jkl->pkl", coeffs, sub.parent.rho_basis)
    return np.einsum("ka,pkl,lb->pab", sub.embed.conj(), rho, sub.embed)


@dataclass(frozen=True, eq=False)
class RkhsData:
    """
    Kernel sections on a finite point set.

    Attributes:
        sub: Bundle data
        points: Representatives u_j of the points t_j = u_j U_B
        vectors: Fiber vectors ξ_j ∈ H_φ in the frame of u_j
        gram: G_lj = ⟨K(u_l,u_j) ξ_j, ξ_l⟩
        cutoff: Relative eigenvalue cutoff for norms
    """

    sub: SubGnsData
    points: tuple[AlgebraElement, ...]
    vectors: tuple[np.ndarray, ...]
    gram: np.ndarray
    cutoff: float = DEFAULT_GRAM_CUTOFF

    @property
    def size(self) -> int:
        return len(self.points)

    @cached_property
    def _spectrum(self) -> tuple[np.ndarray, np.ndarray]:
        return np.linalg.eigh((self.gram + self.gram.conj().T) / 2)

    def gram_norm(self) -> float:
        return float(np.linalg.norm(self.gram, 2))

    def min_eigenvalue(self) -> float:
        return float(self._spectrum[0][0])

    def _retained(self) -> tuple[np.ndarray, np.ndarray]:
        values, vectors = self._spectrum
        keep = values > self.cutoff * self.gram_norm()
        return values[keep], vectors[:, keep]

    def rank(self) -> int:
        """Dimension of the span of the kernel sections."""
        return int(self._retained()[0].shape[0])

    def inner(self, c: np.ndarray, d: np.ndarray) -> complex:
        """(Θ_c | Θ_d) = d† G c."""
        return complex(np.vdot(d, self.gram @ c))

    def norm(self, c: np.ndarray) -> float:
        """‖Θ_c‖ with Gram eigenvalues below the cutoff treated as zero."""
        values, vectors = self._retained()
        weights = np.abs(vectors.conj().T @ c) ** 2
        return float(np.sqrt(max(0.0, float(np.sum(values * weights)))))

    def evaluate(self, c: np.ndarray, u: AlgebraElement) -> np.ndarray:
        """Θ_c(uU_B) = Σ_j c_j K(u, u_j) ξ_j in the frame of u."""
        total = np.zeros(self.sub.dim_Hphi, dtype=complex)
        for cj, t, xi in zip(c, self.points, self.vectors):
            total = total + cj * kernel_eval(self.sub, u, t).apply(xi)
        return total

    def translate(self, u: AlgebraElement) -> RkhsData:
        """u·Θ: the same vectors attached to the points u·u_j."""
        _require_unitary(u)
        return kernel_gram(self.sub, [u @ t for t in self.points], list(self.vectors), cutoff=self.cutoff)


def kernel_gram(
    sub: SubGnsData,
    points: Sequence[AlgebraElement],
    vectors: Sequence[np.ndarray],
    cutoff: float = DEFAULT_GRAM_CUTOFF,
) -> RkhsData:
    """
    Assemble the block Gram matrix of kernel sections.

    Rows are filled in point order, so the result does not depend on how the
    caller schedules work.

    Raises:
        ShapeMismatchError: If the lists are empty or differ in length
    """
    if not points or len(points) != len(vectors):
        raise ShapeMismatchError(
            "kernel_gram needs equally long, nonempty point and vector lists",
            {"points": len(points), "vectors": len(vectors)},
        )
    xis = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
    for xi in xis:
        _check_fiber(sub, xi)
    for t in points:
        _require_unitary(t, "point")

    stacked = np.stack(xis)
    gram = np.empty((len(points), len(points)), dtype=complex)
    for l, (u, xi_l) in enumerate(zip(points, xis)):
        row = _kernel_row(sub, u, points)
        gram[l, :] = np.einsum("a,pab,pb->p", xi_l.conj(), row, stacked)

    logger = configure_module_logging("bundle_kernel")
    logger.debug(f"Assembled kernel Gram over {len(points)} points")
    return RkhsData(sub, tuple(points), tuple(xis), gram, cutoff)


def iota_injectivity(sub: SubGnsData, unitaries: Sequence[AlgebraElement]) -> float:
    """Smallest singular value of h ↦ (ev_{u_j} h)_j; zero when there are too few rows."""
    stacked = np.vstack([evaluation_operator(sub, u) for u in unitaries])
    if stacked.shape[0] < stacked.shape[1]:
        return 0.0
    return float(np.linalg.svd(stacked, compute_uv=False)[-1])


def _unit(vec: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vec)
    return vec / norm if norm > 0 else vec


def verify_kernel(
    sub: SubGnsData,
    pairs: Sequence[tuple[AlgebraElement, AlgebraElement]],
    tolerances: ToleranceProfile | None = None,
) -> list[CheckResult]:
    """Hermitian symmetry, ev-factorization and the associativity form of kernel equivariance."""
    profile = tolerances or ToleranceProfile()
    symmetry = factorization = 0.0
    for u1, u2 in pairs:
        symmetry = max(symmetry, kernel_symmetry_residual(sub, u1, u2))
        factorization = max(factorization, ev_factorization_residual(sub, u1, u2))
    checks = [
        CheckResult.evaluate("kernel.symmetry", symmetry, profile.kernel_symmetry),
        CheckResult.evaluate("kernel.ev_factorization", factorization, profile.ev_factorization),
    ]
    _log_failures(checks)
    return checks


def verify_gram(rkhs: RkhsData, tolerances: ToleranceProfile | None = None) -> list[CheckResult]:
    """Positive semidefiniteness: λ_min(G) ≥ −tol·‖G‖, reported as max(0, −λ_min/‖G‖)."""
    profile = tolerances or ToleranceProfile()
    scale = rkhs.gram_norm()
    residual = max(0.0, -rkhs.min_eigenvalue() / scale) if scale > 0 else 0.0
    checks = [CheckResult.evaluate("kernel.gram_psd", residual, profile.gram_psd)]
    _log_failures(checks)
    return checks


def verify_reproducing(
    rkhs: RkhsData,
    sub: SubGnsData,
    rng: np.random.Generator,
    samples: int = DEFAULT_SAMPLE_VECTORS,
    tolerances: ToleranceProfile | None = None,
) -> list[CheckResult]:
    """
    Reproducing property (Θ | K_ξ) = (Θ(Π(ξ)) | ξ) and the evaluation bound.

    The left side comes from the Gram matrix of the point set augmented by ξ;
    the right side evaluates the section pointwise.
    """
    profile = tolerances or ToleranceProfile()
    reproducing = bound = 0.0
    for _ in range(samples):
        c = _unit(random_vector(rng, rkhs.size))
        t = haar_unitaries(sub.spec, rng, 1)[0]
        eta = random_vector(rng, sub.dim_Hphi)

        augmented = kernel_gram(sub, [*rkhs.points, t], [*rkhs.vectors, eta], cutoff=rkhs.cutoff)
        lhs = augmented.inner(np.append(c, 0.0), np.append(np.zeros(rkhs.size), 1.0))
        value = rkhs.evaluate(c, t)
        rhs = complex(np.vdot(eta, value))
        reproducing = max(reproducing, abs(lhs - rhs))

        k_tt = np.linalg.norm(kernel_eval(sub, t, t).matrix, 2)
        slack = float(np.linalg.norm(value)) - float(np.sqrt(k_tt)) * rkhs.norm(c)
        bound = max(bound, slack)

    checks = [
        CheckResult.evaluate("rkhs.reproducing", reproducing, profile.reproducing),
        CheckResult.evaluate("rkhs.evaluation_bound", max(0.0, bound), profile.evaluation_bound),
    ]
    _log_failures(checks)
    return checks


def verify_realization(
    sub: SubGnsData,
    unitaries: Sequence[AlgebraElement],
    vectors: Sequence[np.ndarray],
    rng: np.random.Generator,
    tolerances: ToleranceProfile | None = None,
) -> list[CheckResult]:
    """
    Properties of the realization operator ι.

    Reports the intertwining relation ι(ρ(v)h) = v·ι(h), the isometry of ι on
    H_φ together with ι(f) = K(·, 𝟏)f, unitarity of the induced action on
    kernel sections, kernel equivariance u*·K(u·t_1, t_2) = K(t_1, u*·t_2) and
    injectivity of ι over the sampled unitaries.
    """
    if not unitaries or not vectors:
        raise ShapeMismatchError("verify_realization needs sample unitaries and vectors")
    profile = tolerances or ToleranceProfile()
    spec = sub.spec
    one = spec.identity()
    rho = sub.parent.rho
    m = len(unitaries)

    intertwining = 0.0
    for k, h in enumerate(vectors):
        v = unitaries[k % m]
        u = unitaries[(k + 1) % m]
        lhs = realization_iota(sub, rho(v) @ h, u)
        rhs = group_act(v, realization_iota(sub, h, v.star() @ u))
        intertwining = max(intertwining, fiber_distance(sub, lhs, rhs))

    isometry = section = 0.0
    for k in range(len(vectors)):
        f = random_vector(rng, sub.dim_Hphi)
        single = kernel_gram(sub, [one], [f])
        isometry = max(isometry, abs(single.norm(np.ones(1)) - float(np.linalg.norm(f))))
        u = unitaries[k % m]
        value = realization_iota(sub, sub.embed @ f, u).f
        section = max(section, float(np.linalg.norm(value - kernel_eval(sub, u, one).apply(f))))

    xis = [random_vector(rng, sub.dim_Hphi) for _ in unitaries]
    c = _unit(random_vector(rng, m))
    theta = kernel_gram(sub, list(unitaries), xis)
    action = 0.0
    for u in unitaries:
        moved = theta.translate(u)
        action = max(action, abs(moved.norm(c) - theta.norm(c)))
        t = unitaries[0]
        action = max(action, float(np.linalg.norm(moved.evaluate(c, t) - theta.evaluate(c, u.star() @ t))))

    equivariance = 0.0
    for k, u in enumerate(unitaries):
        u1 = unitaries[(k + 1) % m]
        u2 = unitaries[(k + 2) % m]
        left = kernel_eval(sub, u @ u1, u2).matrix
        right = kernel_eval(sub, u1, u.star() @ u2).matrix
        equivariance = max(equivariance, float(np.linalg.norm(left - right, 2)))

    checks = [
        CheckResult.evaluate("realization.intertwining", intertwining, profile.realization),
        CheckResult.evaluate("realization.isometry", isometry, profile.realization),
        CheckResult.evaluate("realization.section_identity", section, profile.realization),
        CheckResult.evaluate("realization.action_unitarity", action, profile.realization),
        CheckResult.evaluate("realization.equivariance", equivariance, profile.realization),
        CheckResult.evaluate(
            "realization.injectivity", iota_injectivity(sub, unitaries), profile.injectivity, minimum=True
        ),
    ]
    _log_failures(checks)
    return checks


def _log_failures(checks: Sequence[CheckResult]) -> None:
    logger = configure_module_logging("bundle_kernel")
    for check in checks:
        if check.status == CheckStatus.FAIL:
            logger.warning(f"Check {check.name} failed: residual={check.residual:.3e} tolerance={check.tolerance:.1e}")
