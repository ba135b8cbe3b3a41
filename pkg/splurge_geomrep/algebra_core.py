"""
Finite-dimensional C*-algebras as direct sums of full matrix blocks.

An algebra A = M_{n_1} ⊕ ... ⊕ M_{n_k} carries the faithful tracial state
τ(a) = Σ w_i Tr(a_i)/n_i. Elements are tuples of dense complex blocks.

The canonical basis is the list of matrix units E_rs of every block, row-major
within a block, blocks in declaration order. Functional coefficients,
coefficient vectors and serialized elements all use this order.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

from splurge_geomrep.config.constants import (
    DEFAULT_CLUSTER_TOL,
    DEFAULT_PROJECTION_TOL,
    DEFAULT_RANK_CUTOFF,
    DEFAULT_SELF_ADJOINT_TOL,
    DEFAULT_UNITARY_TOL,
)
from splurge_geomrep.errors import AlgebraError, NotSelfAdjointError, ShapeMismatchError
from splurge_geomrep.logging import configure_module_logging

_WEIGHT_SUM_TOL: float = 1e-12


@dataclass(frozen=True)
class AlgebraSpec:
    """Block sizes and trace weights of A = M_{n_1} ⊕ ... ⊕ M_{n_k}."""

    block_dims: tuple[int, ...]
    trace_weights: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "block_dims", tuple(int(n) for n in self.block_dims))
        object.__setattr__(self, "trace_weights", tuple(float(w) for w in self.trace_weights))
        if not self.block_dims:
            raise AlgebraError("An algebra needs at least one block")
        if any(n < 1 for n in self.block_dims):
            raise AlgebraError("Block dimensions must be positive", {"block_dims": list(self.block_dims)})
        if len(self.trace_weights) != len(self.block_dims):
            raise AlgebraError("One trace weight per block is required")
        if any(w <= 0 for w in self.trace_weights) or abs(sum(self.trace_weights) - 1.0) > _WEIGHT_SUM_TOL:
            raise AlgebraError(
                "Trace weights must be positive and sum to 1", {"trace_weights": list(self.trace_weights)}
            )

    @classmethod
    def from_dims(cls, block_dims: Sequence[int], trace_weights: Sequence[float] | None = None) -> AlgebraSpec:
        """Build a spec; default weights n_i/N give the normalized trace of the block-diagonal embedding."""
        dims = tuple(int(n) for n in block_dims)
        if trace_weights is None:
            total = sum(dims)
            trace_weights = tuple(n / total for n in dims)
        return cls(dims, tuple(trace_weights))

    @property
    def num_blocks(self) -> int:
        return len(self.block_dims)

    @property
    def total_dim(self) -> int:
        """Embedding dimension N = Σ n_i."""
        return sum(self.block_dims)

    @property
    def dim(self) -> int:
        """Algebra dimension Σ n_i²."""
        return sum(n * n for n in self.block_dims)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        """Start index of each block in the canonical coefficient vector."""
        starts = [0]
        for n in self.block_dims[:-1]:
            starts.append(starts[-1] + n * n)
        return tuple(starts)

    @cached_property
    def coefficient_weights(self) -> np.ndarray:
        """Weight w_i/n_i of each canonical coefficient in τ(b*a)."""
        return np.concatenate([np.full(n * n, w / n) for n, w in zip(self.block_dims, self.trace_weights)])

    def element(self, blocks: Sequence[np.ndarray]) -> AlgebraElement:
        return AlgebraElement(self, tuple(blocks))

    def identity(self) -> AlgebraElement:
        return AlgebraElement(self, tuple(np.eye(n, dtype=complex) for n in self.block_dims))

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, tuple(np.zeros((n, n), dtype=complex) for n in self.block_dims))

    def scalar(self, value: complex) -> AlgebraElement:
        return self.identity() * value

    def from_vector(self, vector: np.ndarray) -> AlgebraElement:
        """Element with the given canonical coefficients."""
        vec = np.asarray(vector, dtype=complex).reshape(-1)
        if vec.shape[0] != self.dim:
            raise ShapeMismatchError(
                f"Coefficient vector has length {vec.shape[0]}, expected {self.dim}",
                {"expected": self.dim, "actual": int(vec.shape[0])},
            )
        blocks = tuple(
            vec[start : start + n * n].reshape(n, n) for start, n in zip(self.offsets, self.block_dims)
        )
        return AlgebraElement(self, blocks)

    def canonical_basis(self) -> list[AlgebraElement]:
        """Matrix units E_rs, row-major per block, blocks in order."""
        eye = np.eye(self.dim, dtype=complex)
        return [self.from_vector(eye[j]) for j in range(self.dim)]

    def basis_label(self, index: int) -> str:
        """Human-readable label ``E[block](r,s)`` for a canonical index."""
        for block, (start, n) in enumerate(zip(self.offsets, self.block_dims)):
            if start <= index < start + n * n:
                r, s = divmod(index - start, n)
                return f"E[{block}]({r},{s})"
        raise IndexError(index)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """An element of a block matrix algebra. Blocks are read-only complex arrays."""

    spec: AlgebraSpec
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.blocks) != self.spec.num_blocks:
            raise ShapeMismatchError(
                f"Element has {len(self.blocks)} blocks, spec has {self.spec.num_blocks}",
                {"block_dims": list(self.spec.block_dims)},
            )
        frozen = []
        for i, (block, n) in enumerate(zip(self.blocks, self.spec.block_dims)):
            arr = np.array(block, dtype=complex)
            if arr.shape != (n, n):
                raise ShapeMismatchError(
                    f"Block {i} has shape {arr.shape}, expected ({n}, {n})",
                    {"block": i, "expected": n},
                )
            arr.flags.writeable = False
            frozen.append(arr)
        object.__setattr__(self, "blocks", tuple(frozen))

    def _check_spec(self, other: AlgebraElement) -> None:
        if other.spec != self.spec:
            raise ShapeMismatchError(
                "Elements belong to different algebras",
                {"left": list(self.spec.block_dims), "right": list(other.spec.block_dims)},
            )

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        self._check_spec(other)
        return AlgebraElement(self.spec, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        self._check_spec(other)
        return AlgebraElement(self.spec, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.spec, tuple(-a for a in self.blocks))

    def __matmul__(self, other: AlgebraElement) -> AlgebraElement:
        self._check_spec(other)
        return AlgebraElement(self.spec, tuple(a @ b for a, b in zip(self.blocks, other.blocks)))

    def __mul__(self, scalar: complex) -> AlgebraElement:
        return AlgebraElement(self.spec, tuple(scalar * a for a in self.blocks))

    __rmul__ = __mul__

    def star(self) -> AlgebraElement:
        return AlgebraElement(self.spec, tuple(a.conj().T for a in self.blocks))

    def norm(self) -> float:
        """Operator (C*) norm: largest singular value over all blocks."""
        return max(float(np.linalg.norm(a, 2)) for a in self.blocks)

    def to_vector(self) -> np.ndarray:
        """Canonical coefficients."""
        return np.concatenate([a.reshape(-1) for a in self.blocks])

    def embed(self) -> np.ndarray:
        """Block-diagonal N x N matrix."""
        return scipy.linalg.block_diag(*self.blocks)

    def inverse(self) -> AlgebraElement:
        return AlgebraElement(self.spec, tuple(np.linalg.inv(a) for a in self.blocks))

    def distance(self, other: AlgebraElement) -> float:
        return (self - other).norm()

    def allclose(self, other: AlgebraElement, atol: float = 1e-10) -> bool:
        return self.spec == other.spec and self.distance(other) <= atol

    def is_self_adjoint(self, tol: float = DEFAULT_SELF_ADJOINT_TOL) -> bool:
        return self.distance(self.star()) <= tol * max(1.0, self.norm())

    def is_unitary(self, tol: float = DEFAULT_UNITARY_TOL) -> bool:
        one = self.spec.identity()
        return (self @ self.star()).distance(one) <= tol and (self.star() @ self).distance(one) <= tol

    def is_projection(self, tol: float = DEFAULT_PROJECTION_TOL) -> bool:
        return self.distance(self.star()) <= tol and (self @ self).distance(self) <= tol

    def rank(self) -> int:
        """Total rank; meaningful for projections."""
        return int(round(sum(float(np.trace(a).real) for a in self.blocks)))

    def apply_function(self, func: Callable[[np.ndarray], np.ndarray]) -> AlgebraElement:
        """Continuous functional calculus f(a) for self-adjoint a."""
        if not self.is_self_adjoint():
            raise NotSelfAdjointError("Functional calculus requires a self-adjoint element")
        blocks = []
        for a in self.blocks:
            values, vectors = np.linalg.eigh((a + a.conj().T) / 2)
            blocks.append((vectors * func(values)) @ vectors.conj().T)
        return AlgebraElement(self.spec, tuple(blocks))


@dataclass(frozen=True, eq=False)
class Functional:
    """A linear functional given by its values φ(b_j) on the canonical basis."""

    spec: AlgebraSpec
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.array(self.coefficients, dtype=complex).reshape(-1)
        if coeffs.shape[0] != self.spec.dim:
            raise ShapeMismatchError(
                f"Functional has {coeffs.shape[0]} coefficients, expected {self.spec.dim}",
                {"expected": self.spec.dim},
            )
        coeffs.flags.writeable = False
        object.__setattr__(self, "coefficients", coeffs)

    def evaluate(self, a: AlgebraElement) -> complex:
        if a.spec != self.spec:
            raise ShapeMismatchError("Element does not belong to the functional's algebra")
        return complex(self.coefficients @ a.to_vector())

    def __call__(self, a: AlgebraElement) -> complex:
        return self.evaluate(a)

    def block_matrices(self) -> list[np.ndarray]:
        """Coefficients reshaped per block: F_i[r, s] = φ(E_rs)."""
        return [
            self.coefficients[start : start + n * n].reshape(n, n)
            for start, n in zip(self.spec.offsets, self.spec.block_dims)
        ]

    def is_self_adjoint(self, tol: float = DEFAULT_SELF_ADJOINT_TOL) -> bool:
        """φ(a*) = conj(φ(a)) on every basis element, i.e. φ(E_sr) = conj(φ(E_rs))."""
        return all(np.max(np.abs(f.T - f.conj()), initial=0.0) <= tol for f in self.block_matrices())


@dataclass(frozen=True)
class OrbitInfo:
    """Dimensions of the unitary orbit U_A/U_{A^φ} of a functional."""

    algebra_dim: int
    centralizer_dim: int
    orbit_real_dim: int
    stabilizer_basis: tuple[AlgebraElement, ...]


def make_generator(seed: int) -> np.random.Generator:
    """The package PRNG: a Philox counter-based bit generator keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(int(seed)))


def _check_element(spec: AlgebraSpec, a: AlgebraElement) -> None:
    if a.spec != spec:
        raise ShapeMismatchError(
            "Element does not conform to the algebra spec",
            {"expected": list(spec.block_dims), "actual": list(a.spec.block_dims)},
        )


def trace_tau(spec: AlgebraSpec, a: AlgebraElement) -> complex:
    """τ(a) = Σ w_i Tr(a_i)/n_i."""
    _check_element(spec, a)
    return complex(sum(w * np.trace(b) / n for b, n, w in zip(a.blocks, spec.block_dims, spec.trace_weights)))


def tau_inner(spec: AlgebraSpec, a: AlgebraElement, b: AlgebraElement) -> complex:
    """τ(b*a)."""
    return trace_tau(spec, b.star() @ a)


def tau_gram(spec: AlgebraSpec) -> np.ndarray:
    """Gram matrix [τ(b_i* b_j)] over the canonical basis."""
    basis = spec.canonical_basis()
    gram = np.empty((spec.dim, spec.dim), dtype=complex)
    for i, bi in enumerate(basis):
        bi_star = bi.star()
        for j, bj in enumerate(basis):
            gram[i, j] = trace_tau(spec, bi_star @ bj)
    return gram


def spectral_decompose(
    a: AlgebraElement,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
) -> tuple[list[float], list[AlgebraElement]]:
    """
    Spectral decomposition a = Σ λ_j e_j of a self-adjoint element.

    Eigenvalues within ``cluster_tol·‖a‖`` of their neighbour are grouped.

    Returns:
        Distinct eigenvalues in decreasing order and the matching spectral projections.

    Raises:
        NotSelfAdjointError: If ‖a − a*‖ exceeds tolerance
    """
    if not a.is_self_adjoint():
        raise NotSelfAdjointError(
            "Spectral decomposition requires a self-adjoint element", {"residual": a.distance(a.star())}
        )
    spec = a.spec
    scale = a.norm()
    tol = cluster_tol * scale if scale > 0 else cluster_tol

    entries: list[tuple[float, int, np.ndarray]] = []
    for block_index, block in enumerate(a.blocks):
        values, vectors = np.linalg.eigh((block + block.conj().T) / 2)
        for k, value in enumerate(values):
            entries.append((float(value), block_index, vectors[:, k]))
    entries.sort(key=lambda e: -e[0])

    groups: list[list[tuple[float, int, np.ndarray]]] = []
    for entry in entries:
        if groups and groups[-1][-1][0] - entry[0] <= tol:
            groups[-1].append(entry)
        else:
            groups.append([entry])

    eigenvalues: list[float] = []
    projections: list[AlgebraElement] = []
    for group in groups:
        blocks = [np.zeros((n, n), dtype=complex) for n in spec.block_dims]
        for _, block_index, vector in group:
            blocks[block_index] = blocks[block_index] + np.outer(vector, vector.conj())
        eigenvalues.append(float(np.mean([value for value, _, _ in group])))
        projections.append(AlgebraElement(spec, tuple(blocks)))

    logger = configure_module_logging("algebra_core")
    logger.debug(f"Spectral decomposition found {len(eigenvalues)} distinct eigenvalues")
    return eigenvalues, projections


def left_multiplication(spec: AlgebraSpec, a: AlgebraElement) -> np.ndarray:
    """Matrix of x ↦ ax on canonical coefficients (row-major: vec(AX) = (A ⊗ I) vec X)."""
    _check_element(spec, a)
    return scipy.linalg.block_diag(*(np.kron(b, np.eye(n)) for b, n in zip(a.blocks, spec.block_dims)))


def right_multiplication(spec: AlgebraSpec, a: AlgebraElement) -> np.ndarray:
    """Matrix of x ↦ xa on canonical coefficients (row-major: vec(XA) = (I ⊗ Aᵀ) vec X)."""
    _check_element(spec, a)
    return scipy.linalg.block_diag(*(np.kron(np.eye(n), b.T) for b, n in zip(a.blocks, spec.block_dims)))


def tau_orthonormalize(spec: AlgebraSpec, columns: np.ndarray) -> list[AlgebraElement]:
    """Turn linearly independent coefficient columns into a τ(b*a)-orthonormal basis of their span."""
    if columns.shape[1] == 0:
        return []
    weighted_gram = columns.conj().T @ (spec.coefficient_weights[:, None] * columns)
    values, vectors = np.linalg.eigh((weighted_gram + weighted_gram.conj().T) / 2)
    inv_sqrt = (vectors / np.sqrt(values)) @ vectors.conj().T
    orthonormal = columns @ inv_sqrt
    return [spec.from_vector(orthonormal[:, k]) for k in range(orthonormal.shape[1])]


def basis_matrix(basis: Sequence[AlgebraElement]) -> np.ndarray:
    """Stack elements as coefficient columns."""
    if not basis:
        return np.zeros((0, 0), dtype=complex)
    return np.column_stack([b.to_vector() for b in basis])


def commutant(
    spec: AlgebraSpec,
    generators: Sequence[AlgebraElement],
    rank_cutoff: float = DEFAULT_RANK_CUTOFF,
) -> list[AlgebraElement]:
    """
    τ-orthonormal basis of {b ∈ A : bg = gb for every generator g}.

    Solves the stacked commutator system (L_g − R_g) x = 0. Singular values
    below ``rank_cutoff`` times the largest one count as zero.
    """
    for g in generators:
        _check_element(spec, g)
    if not generators:
        return tau_orthonormalize(spec, np.eye(spec.dim, dtype=complex))

    system = np.vstack([left_multiplication(spec, g) - right_multiplication(spec, g) for g in generators])
    null = scipy.linalg.null_space(system, rcond=rank_cutoff)
    logger = configure_module_logging("algebra_core")
    logger.debug(f"Commutant of {len(generators)} generators has dimension {null.shape[1]}")
    return tau_orthonormalize(spec, null)


def centralizer(
    spec: AlgebraSpec,
    phi: Functional,
    rank_cutoff: float = DEFAULT_RANK_CUTOFF,
) -> list[AlgebraElement]:
    """
    τ-orthonormal basis of A^φ = {a : φ(ab) = φ(ba) for all b}.

    Row (t,u) of the linear system is φ(a E_tu) − φ(E_tu a), written with the
    matrix-unit product rule E_rs E_tu = δ_st E_ru.
    """
    if phi.spec != spec:
        raise ShapeMismatchError("Functional does not conform to the algebra spec")

    systems = []
    for n, f in zip(spec.block_dims, phi.block_matrices()):
        eye = np.eye(n)
        # a E_tu contributes a_rs δ_st F[r,u]; E_tu a contributes a_rs δ_ur F[t,s]
        left = np.einsum("st,ru->turs", eye, f)
        right = np.einsum("ur,ts->turs", eye, f)
        systems.append((left - right).reshape(n * n, n * n))
    null = scipy.linalg.null_space(scipy.linalg.block_diag(*systems), rcond=rank_cutoff)
    return tau_orthonormalize(spec, null)


def theta_tau(spec: AlgebraSpec, a: AlgebraElement) -> Functional:
    """Θ^τ_a: b ↦ τ(ab). On matrix units τ(a E_rs) = (w_i/n_i)·a_sr."""
    _check_element(spec, a)
    coefficients = np.concatenate(
        [(w / n) * block.T.reshape(-1) for block, n, w in zip(a.blocks, spec.block_dims, spec.trace_weights)]
    )
    return Functional(spec, coefficients)


def theta_tau_matrix(spec: AlgebraSpec) -> np.ndarray:
    """Matrix of the linear map a ↦ Θ^τ_a on canonical coefficients."""
    return np.column_stack([theta_tau(spec, b).coefficients for b in spec.canonical_basis()])


def principal_angle(first: Sequence[AlgebraElement], second: Sequence[AlgebraElement]) -> float:
    """Largest principal angle between two spans (π/2 when the dimensions differ)."""
    if len(first) != len(second):
        return float(np.pi / 2)
    if not first:
        return 0.0
    return float(np.max(scipy.linalg.subspace_angles(basis_matrix(first), basis_matrix(second))))


def haar_unitary_from_rng(spec: AlgebraSpec, rng: np.random.Generator) -> AlgebraElement:
    """Haar unitary per block: Ginibre matrix, QR, then fix the phases of R's diagonal."""
    blocks = []
    for n in spec.block_dims:
        z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
        q, r = scipy.linalg.qr(z)
        d = np.diag(r)
        magnitude = np.abs(d)
        phases = np.where(magnitude > 0, d / np.where(magnitude > 0, magnitude, 1.0), 1.0)
        blocks.append(q * phases)
    return AlgebraElement(spec, tuple(blocks))


def haar_unitary(spec: AlgebraSpec, seed: int) -> AlgebraElement:
    """Deterministic Haar unitary for (spec, seed)."""
    return haar_unitary_from_rng(spec, make_generator(seed))


def unitary_from_selfadjoint(a: AlgebraElement) -> AlgebraElement:
    """
    u = a + i(𝟏 − a²)^{1/2} for self-adjoint a with ‖a‖ ≤ 1.

    u is unitary and a = (u + u*)/2, which is why unitaries span A.
    """
    if not a.is_self_adjoint():
        raise NotSelfAdjointError("Expected a self-adjoint element")
    if a.norm() > 1.0 + DEFAULT_SELF_ADJOINT_TOL:
        raise AlgebraError("Expected ‖a‖ ≤ 1", {"norm": a.norm()})
    one = a.spec.identity()
    root = (one - a @ a).apply_function(lambda x: np.sqrt(np.clip(x, 0.0, None)))
    return a + root * 1j


def orbit_parametrization(spec: AlgebraSpec, phi: Functional) -> OrbitInfo:
    """
    Dimensions of the orbit U_A·φ ≅ U_A/U_{A^φ}.

    dim_ℝ U_A equals dim_ℂ A, and likewise for the stabilizer U_{A^φ}.
    """
    stabilizer = centralizer(spec, phi)
    return OrbitInfo(
        algebra_dim=spec.dim,
        centralizer_dim=len(stabilizer),
        orbit_real_dim=spec.dim - len(stabilizer),
        stabilizer_basis=tuple(stabilizer),
    )
