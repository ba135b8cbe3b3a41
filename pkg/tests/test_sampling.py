"""
Unit tests for random instance generators.
"""

import numpy as np
import pytest

from splurge_geomrep.algebra_core import AlgebraSpec, trace_tau
from splurge_geomrep.errors import AlgebraError
from splurge_geomrep.utils.sampling import (
    haar_unitaries,
    random_density,
    random_hermitian,
    random_vector,
    spawn_generators,
)


class TestSpawnGenerators:
    """Test stream splitting."""

    @pytest.mark.unit
    def test_streams_are_stable_across_counts(self) -> None:
        """Stream k does not depend on how many streams were spawned."""
        few = spawn_generators(123, 3)
        many = spawn_generators(123, 10)
        assert few[1].random() == many[1].random()

    @pytest.mark.unit
    def test_streams_are_independent(self) -> None:
        """Different streams produce different numbers."""
        first, second = spawn_generators(123, 2)
        assert first.random() != second.random()

    @pytest.mark.unit
    def test_seed_changes_streams(self) -> None:
        """Different seeds give different streams."""
        assert spawn_generators(1, 1)[0].random() != spawn_generators(2, 1)[0].random()


class TestRandomDensity:
    """Test random densities."""

    @pytest.mark.unit
    def test_faithful_density(self, m3m2: AlgebraSpec, rng: np.random.Generator) -> None:
        """Positive definite with τ(d) = 1."""
        d = random_density(m3m2, rng)
        assert trace_tau(m3m2, d) == pytest.approx(1.0)
        assert d.is_self_adjoint()
        assert min(np.linalg.eigvalsh(b)[0] for b in d.blocks) > 0

    @pytest.mark.unit
    @pytest.mark.parametrize("rank,expected", [(1, [1, 0]), (3, [3, 0]), (4, [3, 1])])
    def test_rank_fills_blocks_in_order(
        self, m3m2: AlgebraSpec, rng: np.random.Generator, rank: int, expected: list[int]
    ) -> None:
        """The support rank is distributed block by block."""
        d = random_density(m3m2, rng, rank=rank)
        ranks = [int(np.linalg.matrix_rank(b, tol=1e-10)) for b in d.blocks]
        assert ranks == expected
        assert trace_tau(m3m2, d) == pytest.approx(1.0)

    @pytest.mark.unit
    @pytest.mark.parametrize("rank", [0, 6])
    def test_rank_out_of_range(self, m3m2: AlgebraSpec, rng: np.random.Generator, rank: int) -> None:
        """Rank must lie in [1, N]."""
        with pytest.raises(AlgebraError):
            random_density(m3m2, rng, rank=rank)


class TestOtherSamplers:
    """Test vectors, Hermitian elements and Haar unitaries."""

    @pytest.mark.unit
    def test_random_vector_normalized(self, rng: np.random.Generator) -> None:
        """normalize=True gives a unit vector."""
        vec = random_vector(rng, 7, normalize=True)
        assert vec.shape == (7,)
        assert np.linalg.norm(vec) == pytest.approx(1.0)

    @pytest.mark.unit
    def test_random_hermitian_norm(self, m3m2: AlgebraSpec, rng: np.random.Generator) -> None:
        """Rescaled to the requested norm."""
        h = random_hermitian(m3m2, rng, norm=0.5)
        assert h.is_self_adjoint()
        assert h.norm() == pytest.approx(0.5)

    @pytest.mark.unit
    def test_haar_unitaries(self, m3m2: AlgebraSpec, rng: np.random.Generator) -> None:
        """Every sample is unitary and samples differ."""
        unitaries = haar_unitaries(m3m2, rng, 4)
        assert len(unitaries) == 4
        assert all(u.is_unitary() for u in unitaries)
        assert unitaries[0].distance(unitaries[1]) > 1e-3
