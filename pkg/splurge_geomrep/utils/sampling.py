"""
Random instance generators.

All randomness of a run flows from one 64-bit seed. Independent streams are
split off with ``numpy.random.SeedSequence.spawn`` and each stream drives a
Philox counter-based generator, so results do not depend on the platform or
on the order in which streams are consumed.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

import numpy as np

from splurge_geomrep.algebra_core import AlgebraElement, AlgebraSpec, haar_unitary_from_rng, trace_tau
from splurge_geomrep.errors import AlgebraError


def spawn_generators(seed: int, count: int) -> list[np.random.Generator]:
    """
    Split ``count`` independent generators off a single seed.

    Args:
        seed: Unsigned 64-bit run seed
        count: Number of streams

    Returns:
        Generators in a fixed order; stream k is the same for every count > k
    """
    children = np.random.SeedSequence(int(seed)).spawn(count)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def random_vector(rng: np.random.Generator, dim: int, normalize: bool = False) -> np.ndarray:
    """Standard complex Gaussian vector."""
    vec = _ginibre(rng, dim, 1)[:, 0]
    if normalize:
        vec = vec / np.linalg.norm(vec)
    return vec


def random_element(spec: AlgebraSpec, rng: np.random.Generator) -> AlgebraElement:
    """Element with i.i.d. standard complex Gaussian entries in every block."""
    return AlgebraElement(spec, tuple(_ginibre(rng, n, n) for n in spec.block_dims))


def random_hermitian(spec: AlgebraSpec, rng: np.random.Generator, norm: float | None = None) -> AlgebraElement:
    """Self-adjoint element; rescaled to operator norm ``norm`` when given."""
    x = random_element(spec, rng)
    h = (x + x.star()) * 0.5
    if norm is not None:
        h = h * (norm / h.norm())
    return h


def random_invertible(spec: AlgebraSpec, rng: np.random.Generator) -> AlgebraElement:
    """Ginibre element (invertible with probability one)."""
    return random_element(spec, rng)


def random_density(spec: AlgebraSpec, rng: np.random.Generator, rank: int | None = None) -> AlgebraElement:
    """
    Random density d ≥ 0 with τ(d) = 1.

    Without ``rank`` the density is faithful. With ``rank`` the support has that
    total rank, filled block by block starting with the first block.
    """
    if rank is None:
        ranks = list(spec.block_dims)
    else:
        if not 1 <= rank <= spec.total_dim:
            raise AlgebraError(f"Density rank must be in [1, {spec.total_dim}]", {"rank": rank})
        ranks = []
        remaining = rank
        for n in spec.block_dims:
            ranks.append(min(n, remaining))
            remaining -= ranks[-1]

    blocks = []
    for n, r in zip(spec.block_dims, ranks):
        if r == 0:
            blocks.append(np.zeros((n, n), dtype=complex))
            continue
        factor = _ginibre(rng, n, r)
        blocks.append(factor @ factor.conj().T)
    d = AlgebraElement(spec, tuple(blocks))
    d = d * (1.0 / trace_tau(spec, d).real)
    return (d + d.star()) * 0.5


def haar_unitaries(spec: AlgebraSpec, rng: np.random.Generator, count: int) -> list[AlgebraElement]:
    """``count`` Haar unitaries drawn in sequence from one stream."""
    return [haar_unitary_from_rng(spec, rng) for _ in range(count)]
