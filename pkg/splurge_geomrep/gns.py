"""
GNS construction, subalgebra compression and conditional expectations.

A state φ(a) = τ(da) on A produces the Hilbert space H = A/N_φ with inner
product ⟨a, b⟩ = φ(b*a). H is realized as ℂ^r, r the numerical rank of the
Gram matrix [φ(b_i* b_j)], with an orthonormal basis fixed by descending Gram
eigenvalues.

For a unital *-subalgebra B the closure of the image of B is the subspace
H_φ with projection P and compressed representation ρ_φ. Conditional
expectations E: A → B act as dim A × dim A matrices on canonical coefficients.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from splurge_geomrep.algebra_core import (
    AlgebraElement,
    AlgebraSpec,
    Functional,
    basis_matrix,
    commutant,
    left_multiplication,
    right_multiplication,
    spectral_decompose,
    tau_orthonormalize,
    theta_tau,
    trace_tau,
)
from splurge_geomrep.config.constants import (
    DEFAULT_CLUSTER_TOL,
    DEFAULT_EXPECTATION_INPUTS,
    DEFAULT_GRAM_CUTOFF,
    DEFAULT_RANK_CUTOFF,
    DEFAULT_SAMPLE_POINTS,
    DEFAULT_STATE_TOL,
    DEFAULT_SUBALGEBRA_TOL,
)
from splurge_geomrep.config.tolerance_config import ToleranceProfile
from splurge_geomrep.errors import ShapeMismatchError, StateError, SubalgebraError
from splurge_geomrep.logging import configure_module_logging
from splurge_geomrep.result_models import CheckResult, CheckStatus
from splurge_geomrep.utils.sampling import random_element, random_vector


@dataclass(frozen=True, eq=False)
class State:
    """A state φ(a) = τ(da) stored through its density d."""

    spec: AlgebraSpec
    density: AlgebraElement

    def __post_init__(self) -> None:
        d = self.density
        if d.spec != self.spec:
            raise ShapeMismatchError("Density does not conform to the algebra spec")
        if not d.is_self_adjoint(DEFAULT_STATE_TOL):
            raise StateError("Density must be self-adjoint", {"residual": d.distance(d.star())})
        min_eig = min(float(np.linalg.eigvalsh((b + b.conj().T) / 2)[0]) for b in d.blocks)
        if min_eig < -DEFAULT_STATE_TOL:
            raise StateError("Density must be positive semidefinite", {"min_eigenvalue": min_eig})
        trace = trace_tau(self.spec, d)
        if abs(trace - 1.0) > DEFAULT_STATE_TOL:
            raise StateError("Density must satisfy τ(d) = 1", {"trace": trace.real})

    @classmethod
    def from_density(cls, spec: AlgebraSpec, density: AlgebraElement) -> State:
        return cls(spec, density)

    @classmethod
    def tracial(cls, spec: AlgebraSpec) -> State:
        """φ = τ (density 𝟏)."""
        return cls(spec, spec.identity())

    @classmethod
    def corner(cls, spec: AlgebraSpec) -> State:
        """φ(a) = a_11 on a single full block M_n; density n·E_11."""
        if spec.num_blocks != 1:
            raise StateError("The corner state needs a single-block algebra", {"block_dims": list(spec.block_dims)})
        n = spec.block_dims[0]
        block = np.zeros((n, n), dtype=complex)
        block[0, 0] = n
        return cls(spec, spec.element([block]))

    @classmethod
    def from_functional(cls, functional: Functional) -> State:
        """Invert Θ^τ: coefficients F_i = (w_i/n_i)·d_iᵀ per block."""
        spec = functional.spec
        blocks = [
            (n / w) * f.T for f, n, w in zip(functional.block_matrices(), spec.block_dims, spec.trace_weights)
        ]
        return cls(spec, spec.element(blocks))

    @cached_property
    def functional(self) -> Functional:
        """Θ^τ_d."""
        return theta_tau(self.spec, self.density)

    def evaluate(self, a: AlgebraElement) -> complex:
        return self.functional.evaluate(a)

    def __call__(self, a: AlgebraElement) -> complex:
        return self.evaluate(a)

    def support(self, rank_cutoff: float = DEFAULT_RANK_CUTOFF) -> AlgebraElement:
        """Support projection p of φ: the range projection of d, block by block."""
        scale = self.density.norm()
        blocks = []
        for b in self.density.blocks:
            left, sing, _ = np.linalg.svd(b)
            cols = left[:, sing > rank_cutoff * scale]
            blocks.append(cols @ cols.conj().T)
        return self.spec.element(blocks)

    def is_faithful(self) -> bool:
        return self.support().rank() == self.spec.total_dim


@dataclass(frozen=True, eq=False)
class GnsData:
    """
    The GNS triple (H, ρ, h_0) of a state.

    Attributes:
        spec: The algebra
        state: The state φ
        eigenvalues: Retained Gram eigenvalues λ_1 ≥ ... ≥ λ_r
        vectors: Matching Gram eigenvectors (dim A × r)
        rho_basis: ρ(b_j) for every canonical basis element, shape (dim A, r, r)
        cyclic_vector: h_0, the image of 𝟏
    """

    spec: AlgebraSpec
    state: State
    eigenvalues: np.ndarray
    vectors: np.ndarray
    rho_basis: np.ndarray
    cyclic_vector: np.ndarray

    @property
    def dim_H(self) -> int:
        return int(self.eigenvalues.shape[0])

    @property
    def basis_coeffs(self) -> np.ndarray:
        """Columns are algebra elements whose images form the orthonormal basis of H."""
        return self.vectors / np.sqrt(self.eigenvalues)

    def image(self, a: AlgebraElement) -> np.ndarray:
        """The class of a in H, in the orthonormal basis."""
        return np.sqrt(self.eigenvalues) * (self.vectors.conj().T @ a.to_vector())

    def rho(self, a: AlgebraElement) -> np.ndarray:
        if a.spec != self.spec:
            raise ShapeMismatchError("Element does not belong to the represented algebra")
        return np.einsum("j,jkl->kl", a.to_vector(), self.rho_basis)

    def inner(self, a: AlgebraElement, b: AlgebraElement) -> complex:
        """⟨a, b⟩ = φ(b*a)."""
        return complex(np.vdot(self.image(b), self.image(a)))


@dataclass(frozen=True, eq=False)
class SubGnsData:
    """
    Compression of a GNS representation to the subspace H_φ generated by B.

    Attributes:
        parent: GNS data of (A, φ)
        b_basis: Basis of the subalgebra B
        embed: Isometry H_φ → H (dim_H × dim_Hphi)
        P: Orthogonal projection onto H_φ inside H
    """

    parent: GnsData
    b_basis: tuple[AlgebraElement, ...]
    embed: np.ndarray
    P: np.ndarray
    _b_span: np.ndarray = field(repr=False)

    @property
    def spec(self) -> AlgebraSpec:
        return self.parent.spec

    @property
    def dim_Hphi(self) -> int:
        return int(self.embed.shape[1])

    @property
    def b_dim(self) -> int:
        return int(self._b_span.shape[1])

    @property
    def is_full(self) -> bool:
        """True when B = A."""
        return self.b_dim == self.spec.dim

    def rho_phi(self, b: AlgebraElement) -> np.ndarray:
        """ρ_φ(b) = embed† ρ(b) embed."""
        return self.embed.conj().T @ self.parent.rho(b) @ self.embed

    def project_to_b(self, a: AlgebraElement) -> AlgebraElement:
        """Euclidean projection of the canonical coefficients onto span(B)."""
        vec = a.to_vector()
        return self.spec.from_vector(self._b_span @ (self._b_span.conj().T @ vec))

    def distance_to_b(self, a: AlgebraElement) -> float:
        vec = a.to_vector()
        return float(np.linalg.norm(vec - self._b_span @ (self._b_span.conj().T @ vec)))


@dataclass(frozen=True, eq=False)
class CondExpectation:
    """A linear map E: A → B as a matrix on canonical coefficients."""

    spec: AlgebraSpec
    matrix: np.ndarray
    range_basis: tuple[AlgebraElement, ...]

    def apply(self, a: AlgebraElement) -> AlgebraElement:
        return self.spec.from_vector(self.matrix @ a.to_vector())

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        return self.apply(a)

    def norm_estimate(self, samples: Sequence[AlgebraElement]) -> float:
        """max ‖E(a)‖/‖a‖ over 𝟏 and the given samples."""
        candidates = [self.spec.identity(), *samples]
        return max(self.apply(a).norm() / a.norm() for a in candidates if a.norm() > 0)


def _gram_matrix(spec: AlgebraSpec, phi: Functional) -> np.ndarray:
    """[φ(b_i* b_j)]; with E_rs* E_tu = δ_rt E_su each block is I ⊗ F."""
    return scipy.linalg.block_diag(*(np.kron(np.eye(n), f) for n, f in zip(spec.block_dims, phi.block_matrices())))


def _ordered_eigenbasis(gram: np.ndarray, cutoff: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs above ``cutoff·λ_max``, descending, ties broken by dominant coefficient index."""
    values, vectors = np.linalg.eigh((gram + gram.conj().T) / 2)
    lam_max = float(values[-1]) if values.size else 0.0
    if lam_max <= 0:
        raise StateError("Gram matrix of the state has no positive eigenvalue")
    keep = values > cutoff * lam_max
    values, vectors = values[keep], vectors[:, keep]

    cols = np.arange(vectors.shape[1])
    dominant = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[dominant, cols]
    vectors = vectors * (np.abs(pivots) / pivots)

    descending = np.argsort(-values, kind="stable")
    group = np.empty(values.shape[0], dtype=int)
    current = 0
    for pos, idx in enumerate(descending):
        if pos > 0 and values[descending[pos - 1]] - values[idx] > DEFAULT_CLUSTER_TOL * lam_max:
            current += 1
        group[idx] = current
    order = sorted(cols.tolist(), key=lambda i: (group[i], dominant[i]))
    return values[order], vectors[:, order]


def gns_build(spec: AlgebraSpec, phi: State, rank_cutoff: float = DEFAULT_GRAM_CUTOFF) -> GnsData:
    """
    Build the GNS representation of a state.

    ρ(a) is left multiplication pushed through the retained Gram eigenbasis:
    ρ(a) = Λ^{1/2} V† L_a V Λ^{-1/2}.

    Raises:
        ShapeMismatchError: If the state belongs to another algebra
        StateError: If the state is degenerate
    """
    if phi.spec != spec:
        raise ShapeMismatchError("State does not conform to the algebra spec")
    logger = configure_module_logging("gns")

    values, vectors = _ordered_eigenbasis(_gram_matrix(spec, phi.functional), rank_cutoff)
    sqrt_vals = np.sqrt(values)
    coords = sqrt_vals[:, None] * vectors.conj().T
    columns = vectors / sqrt_vals
    rho_basis = np.stack([coords @ left_multiplication(spec, b) @ columns for b in spec.canonical_basis()])
    h0 = coords @ spec.identity().to_vector()

    logger.debug(f"GNS space for block_dims={list(spec.block_dims)} has dimension {values.shape[0]}")
    return GnsData(
        spec=spec,
        state=phi,
        eigenvalues=values,
        vectors=vectors,
        rho_basis=rho_basis,
        cyclic_vector=h0,
    )


def full_subalgebra(spec: AlgebraSpec) -> list[AlgebraElement]:
    """B = A."""
    return tau_orthonormalize(spec, np.eye(spec.dim, dtype=complex))


def scalar_subalgebra(spec: AlgebraSpec) -> list[AlgebraElement]:
    """B = ℂ𝟏."""
    return [spec.identity()]


def centralizer_subalgebra(spec: AlgebraSpec, phi: State) -> list[AlgebraElement]:
    """B = A^φ, computed as the commutant of the density."""
    return commutant(spec, [phi.density])


def _check_subalgebra(spec: AlgebraSpec, span: np.ndarray, basis: Sequence[AlgebraElement], tol: float) -> None:
    def distance(vecs: np.ndarray) -> float:
        return float(np.max(np.linalg.norm(vecs - span @ (span.conj().T @ vecs), axis=0), initial=0.0))

    scale = max(1.0, max(b.norm() for b in basis) ** 2)
    unit = distance(spec.identity().to_vector()[:, None])
    if unit > tol:
        raise SubalgebraError("Subalgebra does not contain 𝟏", {"residual": unit})
    star = distance(basis_matrix([b.star() for b in basis]))
    if star > tol * scale:
        raise SubalgebraError("Subalgebra is not closed under *", {"residual": star})
    products = basis_matrix([bi @ bj for bi in basis for bj in basis])
    closure = distance(products)
    if closure > tol * scale:
        raise SubalgebraError("Subalgebra is not closed under products", {"residual": closure})


def sub_gns(
    gns: GnsData,
    B_basis: Sequence[AlgebraElement],
    subalgebra_tol: float = DEFAULT_SUBALGEBRA_TOL,
) -> SubGnsData:
    """
    Compress the GNS representation to H_φ, the closure of the image of B.

    Raises:
        SubalgebraError: If B_basis does not span a unital *-subalgebra
    """
    spec = gns.spec
    if not B_basis:
        raise SubalgebraError("Subalgebra basis is empty")
    for b in B_basis:
        if b.spec != spec:
            raise ShapeMismatchError("Subalgebra element does not conform to the algebra spec")

    span = scipy.linalg.orth(basis_matrix(B_basis), rcond=DEFAULT_RANK_CUTOFF)
    _check_subalgebra(spec, span, B_basis, subalgebra_tol)

    images = np.column_stack([gns.image(b) for b in B_basis])
    embed = scipy.linalg.orth(images, rcond=DEFAULT_RANK_CUTOFF)
    logger = configure_module_logging("gns")
    logger.debug(f"H_phi has dimension {embed.shape[1]} inside H of dimension {gns.dim_H}")
    return SubGnsData(
        parent=gns,
        b_basis=tuple(B_basis),
        embed=embed,
        P=embed @ embed.conj().T,
        _b_span=span,
    )


def _pinching_matrix(spec: AlgebraSpec, projections: Sequence[AlgebraElement]) -> np.ndarray:
    """Matrix of a ↦ Σ f a f."""
    return sum(
        (left_multiplication(spec, f) @ right_multiplication(spec, f) for f in projections),
        np.zeros((spec.dim, spec.dim), dtype=complex),
    )


def centralizer_expectation(spec: AlgebraSpec, phi: State) -> CondExpectation:
    """E(a) = Σ_j f_j a f_j over the spectral projections of the density, kernel included."""
    _, projections = spectral_decompose(phi.density)
    return CondExpectation(spec, _pinching_matrix(spec, projections), tuple(commutant(spec, [phi.density])))


def support_expectation(spec: AlgebraSpec, phi: State) -> CondExpectation:
    """
    E(a) = E_{φ_p}(pap) + (𝟏−p)a(𝟏−p) with p the support of φ.

    E_{φ_p} pinches the corner pAp by the spectral projections of the faithful
    restriction of φ.
    """
    p = phi.support()
    complement = spec.identity() - p
    eigenvalues, projections = spectral_decompose(phi.density)
    scale = phi.density.norm()
    positive = [f for lam, f in zip(eigenvalues, projections) if lam > DEFAULT_RANK_CUTOFF * scale]
    corner_parts = [p @ f @ p for f in positive]
    matrix = _pinching_matrix(spec, corner_parts)
    if complement.norm() > DEFAULT_RANK_CUTOFF:
        matrix = matrix + _pinching_matrix(spec, [complement])
    return CondExpectation(spec, matrix, tuple(commutant(spec, [*corner_parts, complement])))


def identity_expectation(spec: AlgebraSpec) -> CondExpectation:
    """B = A, E = id."""
    return CondExpectation(spec, np.eye(spec.dim, dtype=complex), tuple(full_subalgebra(spec)))


def scalar_expectation(spec: AlgebraSpec, phi: State) -> CondExpectation:
    """B = ℂ𝟏, E(a) = φ(a)𝟏."""
    matrix = np.outer(spec.identity().to_vector(), phi.functional.coefficients)
    return CondExpectation(spec, matrix, (spec.identity(),))


def _random_in_span(basis: Sequence[AlgebraElement], rng: np.random.Generator) -> AlgebraElement:
    coeffs = random_vector(rng, len(basis))
    total = basis[0] * coeffs[0]
    for c, b in zip(coeffs[1:], basis[1:]):
        total = total + b * c
    return total


def _normalized(a: AlgebraElement) -> AlgebraElement:
    norm = a.norm()
    return a * (1.0 / norm) if norm > 0 else a


def verify_expectation(
    spec: AlgebraSpec,
    E: CondExpectation,
    phi: State,
    rng: np.random.Generator,
    samples: int = DEFAULT_EXPECTATION_INPUTS,
    tolerances: ToleranceProfile | None = None,
) -> list[CheckResult]:
    """
    Residuals of the conditional-expectation properties over sampled inputs.

    Inputs a and bimodule factors b_1, b_2 ∈ B are normalized to operator norm 1.
    """
    tol = (tolerances or ToleranceProfile()).expectation
    one = spec.identity()
    inputs = [_normalized(random_element(spec, rng)) for _ in range(samples)]

    range_span = scipy.linalg.orth(basis_matrix(E.range_basis), rcond=DEFAULT_RANK_CUTOFF)
    self_adjoint = schwarz = bimodule = compatibility = continuity = distance = 0.0
    for a in inputs:
        ea = E(a)
        self_adjoint = max(self_adjoint, E(a.star()).distance(ea.star()))

        gap = E(a.star() @ a) - ea.star() @ ea
        min_eig = min(float(np.linalg.eigvalsh((b + b.conj().T) / 2)[0]) for b in gap.blocks)
        schwarz = max(schwarz, -min_eig)

        b1 = _normalized(_random_in_span(E.range_basis, rng))
        b2 = _normalized(_random_in_span(E.range_basis, rng))
        bimodule = max(bimodule, E(b1 @ a @ b2).distance(b1 @ ea @ b2))

        compatibility = max(compatibility, abs(phi(ea) - phi(a)))
        continuity = max(continuity, (phi(ea.star() @ ea) - phi(a.star() @ a)).real)
        vec = ea.to_vector()
        distance = max(distance, float(np.linalg.norm(vec - range_span @ (range_span.conj().T @ vec))))

    idempotency = float(np.linalg.norm(E.matrix @ E.matrix - E.matrix, 2))
    unital = E(one).distance(one)
    norm_one = abs(E.norm_estimate(inputs) - 1.0)

    checks = [
        CheckResult.evaluate("expectation.self_adjoint", self_adjoint, tol),
        CheckResult.evaluate("expectation.schwarz", schwarz, tol),
        CheckResult.evaluate("expectation.bimodule", bimodule, tol),
        CheckResult.evaluate("expectation.compatibility", compatibility, tol),
        CheckResult.evaluate("expectation.idempotent", idempotency, tol),
        CheckResult.evaluate("expectation.unital", unital, tol),
        CheckResult.evaluate("expectation.gns_continuity", continuity, tol),
        CheckResult.evaluate("expectation.norm_one", norm_one, tol),
        CheckResult.evaluate("expectation.range", distance, tol),
    ]
    _log_failures(checks)
    return checks


def _log_failures(checks: Sequence[CheckResult]) -> None:
    logger = configure_module_logging("gns")
    for check in checks:
        if check.status == CheckStatus.FAIL:
            logger.warning(f"Check {check.name} failed: residual={check.residual:.3e} tolerance={check.tolerance:.1e}")


def representation_commutant_dim(gns: GnsData) -> int:
    """Dimension of ρ(A)' inside the full matrix algebra on H."""
    r = gns.dim_H
    matrix_spec = AlgebraSpec.from_dims([r])
    generators = [matrix_spec.element([m]) for m in gns.rho_basis]
    return len(commutant(matrix_spec, generators))


def is_pure(spec: AlgebraSpec, phi: State) -> bool:
    """A state is pure iff its GNS representation is irreducible: ρ(A)' = ℂI."""
    return representation_commutant_dim(gns_build(spec, phi)) == 1


def extension_purity(spec: AlgebraSpec, E: CondExpectation, phi: State) -> CheckStatus:
    """
    Consistency of purity for the extension φ₀∘E of φ₀ = φ|_B.

    Uniqueness of the extension is only decidable here when B = A; every other
    case is reported as not determined.
    """
    if len(E.range_basis) != spec.dim:
        return CheckStatus.NOT_DETERMINED
    composed = State.from_functional(Functional(spec, phi.functional.coefficients @ E.matrix))
    return CheckStatus.PASS if is_pure(spec, composed) == is_pure(spec, phi) else CheckStatus.FAIL


def verify_gns(
    gns: GnsData,
    rng: np.random.Generator,
    samples: int = DEFAULT_SAMPLE_POINTS,
    tolerances: ToleranceProfile | None = None,
) -> list[CheckResult]:
    """Homomorphism residuals of ρ, inner-product reproduction and cyclicity of h_0."""
    profile = tolerances or ToleranceProfile()
    spec = gns.spec
    r = gns.dim_H

    unital = float(np.linalg.norm(gns.rho(spec.identity()) - np.eye(r), 2))
    multiplicative = adjoint = 0.0
    for _ in range(samples):
        a = _normalized(random_element(spec, rng))
        b = _normalized(random_element(spec, rng))
        multiplicative = max(multiplicative, float(np.linalg.norm(gns.rho(a @ b) - gns.rho(a) @ gns.rho(b), 2)))
        adjoint = max(adjoint, float(np.linalg.norm(gns.rho(a.star()) - gns.rho(a).conj().T, 2)))

    images = np.sqrt(gns.eigenvalues)[:, None] * gns.vectors.conj().T
    inner = float(np.max(np.abs(images.conj().T @ images - _gram_matrix(spec, gns.state.functional))))

    orbit = np.column_stack([m @ gns.cyclic_vector for m in gns.rho_basis])
    cyclic_rank = int(np.linalg.matrix_rank(orbit, tol=DEFAULT_RANK_CUTOFF * max(1.0, np.linalg.norm(orbit, 2))))

    checks = [
        CheckResult.evaluate("gns.unital", unital, profile.homomorphism),
        CheckResult.evaluate("gns.multiplicative", multiplicative, profile.homomorphism),
        CheckResult.evaluate("gns.star", adjoint, profile.homomorphism),
        CheckResult.evaluate("gns.inner_product", inner, profile.inner_product),
        CheckResult.exact("gns.cyclic_rank", cyclic_rank, r),
    ]
    _log_failures(checks)
    return checks


def verify_sub_gns(
    sub: SubGnsData,
    E: CondExpectation | None = None,
    rng: np.random.Generator | None = None,
    samples: int = DEFAULT_SAMPLE_POINTS,
    tolerances: ToleranceProfile | None = None,
) -> list[CheckResult]:
    """
    Projection identities of P and the commutative diagram.

    ``gns.diagram`` measures both P ρ(b) embed = embed ρ_φ(b) and the invariance
    ρ(b) embed = embed ρ_φ(b) of H_φ. With an expectation onto B, the quotient
    square P η(a) = η(E(a)) is checked on sampled a as well.
    """
    profile = tolerances or ToleranceProfile()
    parent = sub.parent
    P = sub.P
    projection = max(float(np.linalg.norm(P @ P - P, 2)), float(np.linalg.norm(P - P.conj().T, 2)))
    diagram = 0.0
    for b in sub.b_basis:
        rho_b = parent.rho(b)
        compressed = sub.embed @ sub.rho_phi(b)
        diagram = max(
            diagram,
            float(np.linalg.norm(P @ rho_b @ sub.embed - compressed, 2)),
            float(np.linalg.norm(rho_b @ sub.embed - compressed, 2)),
        )
    checks = [
        CheckResult.evaluate("gns.projection", projection, profile.projection),
        CheckResult.evaluate("gns.diagram", diagram, profile.diagram),
    ]
    if E is not None and rng is not None:
        quotient = 0.0
        for _ in range(samples):
            a = _normalized(random_element(sub.spec, rng))
            quotient = max(quotient, float(np.linalg.norm(P @ parent.image(a) - parent.image(E(a)))))
        checks.append(CheckResult.evaluate("gns.expectation_diagram", quotient, profile.diagram))
    _log_failures(checks)
    return checks
