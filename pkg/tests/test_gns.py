"""
Unit tests for the gns module.

Tests states, the GNS construction, compression to a subalgebra and the
conditional expectations, using concrete states on small algebras.
"""

from collections.abc import Callable

import numpy as np
import pytest

from splurge_geomrep.algebra_core import (
    AlgebraElement,
    AlgebraSpec,
    Functional,
    commutant,
    make_generator,
    trace_tau,
)
from splurge_geomrep.errors import ShapeMismatchError, StateError, SubalgebraError
from splurge_geomrep.gns import (
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
    representation_commutant_dim,
    scalar_expectation,
    scalar_subalgebra,
    sub_gns,
    support_expectation,
    verify_expectation,
    verify_gns,
    verify_sub_gns,
)
from splurge_geomrep.result_models import CheckStatus
from splurge_geomrep.utils.sampling import random_element
from tests.conftest import TEST_SEED

_EXPECTATION_SAMPLES: int = 20


def _unit(spec: AlgebraSpec, block: int, r: int, s: int) -> AlgebraElement:
    blocks = [np.zeros((n, n), dtype=complex) for n in spec.block_dims]
    blocks[block][r, s] = 1.0
    return spec.element(blocks)


def _assert_all_pass(checks: list) -> None:
    failed = [(c.name, c.residual) for c in checks if c.status != CheckStatus.PASS]
    assert not failed, f"Failed checks: {failed}"


class TestState:
    """Test state validation and constructors."""

    @pytest.mark.unit
    def test_tracial_state(self, m3m2: AlgebraSpec) -> None:
        """τ has density 𝟏 and is faithful."""
        state = State.tracial(m3m2)
        assert state(m3m2.identity()) == pytest.approx(1.0)
        assert state.is_faithful()

    @pytest.mark.unit
    def test_corner_state(self, m3: AlgebraSpec) -> None:
        """φ(a) = a_11 with rank-one support."""
        state = State.corner(m3)
        a = m3.element([np.arange(9, dtype=complex).reshape(3, 3) + 1])
        assert state(a) == pytest.approx(1.0)
        assert state.support().rank() == 1
        assert not state.is_faithful()

    @pytest.mark.unit
    def test_corner_needs_single_block(self, m3m2: AlgebraSpec) -> None:
        """The corner state is defined on M_n only."""
        with pytest.raises(StateError):
            State.corner(m3m2)

    @pytest.mark.unit
    def test_non_self_adjoint_density(self, m3: AlgebraSpec) -> None:
        """Densities must be self-adjoint."""
        block = np.eye(3, dtype=complex)
        block[0, 1] = 0.5
        with pytest.raises(StateError):
            State.from_density(m3, m3.element([block]))

    @pytest.mark.unit
    def test_negative_density(self, m3: AlgebraSpec) -> None:
        """Densities must be positive."""
        with pytest.raises(StateError):
            State.from_density(m3, m3.element([np.diag([2.0, 2.0, -1.0])]))

    @pytest.mark.unit
    def test_unnormalized_density(self, m3: AlgebraSpec) -> None:
        """Densities must satisfy τ(d) = 1."""
        with pytest.raises(StateError):
            State.from_density(m3, m3.scalar(2.0))

    @pytest.mark.unit
    def test_density_from_other_algebra(self, m3m2: AlgebraSpec, m3: AlgebraSpec) -> None:
        """Density and spec must agree."""
        with pytest.raises(ShapeMismatchError):
            State(m3m2, m3.identity())

    @pytest.mark.unit
    def test_from_functional_recovers_density(self, faithful_state: State) -> None:
        """Θ^τ is inverted exactly."""
        recovered = State.from_functional(faithful_state.functional)
        assert recovered.density.allclose(faithful_state.density, atol=1e-12)

    @pytest.mark.unit
    def test_evaluate_is_trace_against_density(self, faithful_state: State, rng: np.random.Generator) -> None:
        """φ(a) = τ(da)."""
        a = random_element(faithful_state.spec, rng)
        expected = trace_tau(faithful_state.spec, faithful_state.density @ a)
        assert abs(faithful_state(a) - expected) < 1e-12


class TestGnsBuild:
    """Test the GNS triple."""

    @pytest.mark.unit
    def test_faithful_dimension(self, faithful_state: State) -> None:
        """H = A for a faithful state."""
        gns = gns_build(faithful_state.spec, faithful_state)
        assert gns.dim_H == 13

    @pytest.mark.unit
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_corner_dimension(self, n: int) -> None:
        """φ(a) = a_11 on M_n gives H = ℂ^n."""
        spec = AlgebraSpec.from_dims([n])
        assert gns_build(spec, State.corner(spec)).dim_H == n

    @pytest.mark.unit
    def test_rank_deficient_dimension(self, m3: AlgebraSpec, state_factory: Callable[..., State]) -> None:
        """A rank-r density on M_n gives dim H = n·r."""
        state = state_factory(m3, rank=2)
        assert gns_build(m3, state).dim_H == 6

    @pytest.mark.unit
    def test_state_from_other_algebra(self, m3: AlgebraSpec, faithful_state: State) -> None:
        """State and spec must agree."""
        with pytest.raises(ShapeMismatchError):
            gns_build(m3, faithful_state)

    @pytest.mark.unit
    def test_verify_gns_passes(self, faithful_state: State, rng: np.random.Generator) -> None:
        """Homomorphism, inner product and cyclicity residuals are small."""
        gns = gns_build(faithful_state.spec, faithful_state)
        checks = verify_gns(gns, rng, samples=5)
        assert [c.name for c in checks] == [
            "gns.unital",
            "gns.multiplicative",
            "gns.star",
            "gns.inner_product",
            "gns.cyclic_rank",
        ]
        _assert_all_pass(checks)

    @pytest.mark.unit
    def test_inner_product_reproduces_state(self, faithful_state: State, rng: np.random.Generator) -> None:
        """⟨a, b⟩ = φ(b*a)."""
        gns = gns_build(faithful_state.spec, faithful_state)
        a = random_element(faithful_state.spec, rng)
        b = random_element(faithful_state.spec, rng)
        assert abs(gns.inner(a, b) - faithful_state(b.star() @ a)) < 1e-10

    @pytest.mark.unit
    def test_cyclic_vector_is_unit(self, faithful_state: State) -> None:
        """‖h_0‖² = φ(𝟏) = 1."""
        gns = gns_build(faithful_state.spec, faithful_state)
        assert np.linalg.norm(gns.cyclic_vector) == pytest.approx(1.0)

    @pytest.mark.unit
    def test_basis_coeffs_map_to_orthonormal_basis(self, faithful_state: State) -> None:
        """The element in column k has image e_k."""
        spec = faithful_state.spec
        gns = gns_build(spec, faithful_state)
        images = np.stack([gns.image(spec.from_vector(col)) for col in gns.basis_coeffs.T], axis=1)
        np.testing.assert_allclose(images, np.eye(gns.dim_H), atol=1e-9)

    @pytest.mark.unit
    def test_rho_is_multiplicative(self, m3: AlgebraSpec, rng: np.random.Generator) -> None:
        """ρ(ab) = ρ(a)ρ(b) for the corner state."""
        gns = gns_build(m3, State.corner(m3))
        a = random_element(m3, rng)
        b = random_element(m3, rng)
        np.testing.assert_allclose(gns.rho(a @ b), gns.rho(a) @ gns.rho(b), atol=1e-10)

    @pytest.mark.unit
    def test_build_is_deterministic(self, faithful_state: State) -> None:
        """The orthonormal basis of H is fixed by the state."""
        first = gns_build(faithful_state.spec, faithful_state)
        second = gns_build(faithful_state.spec, faithful_state)
        np.testing.assert_array_equal(first.rho_basis, second.rho_basis)


class TestPurity:
    """Test purity through the commutant of ρ(A)."""

    @pytest.mark.unit
    def test_corner_state_is_pure(self, m3: AlgebraSpec) -> None:
        """Vector states on M_n are pure."""
        assert is_pure(m3, State.corner(m3))

    @pytest.mark.unit
    def test_tracial_state_is_not_pure(self, m3: AlgebraSpec) -> None:
        """τ on M_n is mixed."""
        assert not is_pure(m3, State.tracial(m3))

    @pytest.mark.unit
    def test_regular_representation_commutant(self) -> None:
        """ρ_τ(M_2)' ≅ M_2."""
        spec = AlgebraSpec.from_dims([2])
        assert representation_commutant_dim(gns_build(spec, State.tracial(spec))) == 4


class TestSubGns:
    """Test compression to H_φ."""

    @pytest.mark.unit
    def test_centralizer_of_corner(
        self, m3: AlgebraSpec, gns_factory: Callable[[State], tuple[GnsData, SubGnsData]]
    ) -> None:
        """H_φ is a line for φ(a) = a_11."""
        gns, sub = gns_factory(State.corner(m3))
        assert sub.dim_Hphi == 1
        assert sub.b_dim == 5
        assert not sub.is_full

    @pytest.mark.unit
    def test_full_subalgebra(self, faithful_state: State) -> None:
        """B = A gives H_φ = H."""
        gns = gns_build(faithful_state.spec, faithful_state)
        sub = sub_gns(gns, full_subalgebra(faithful_state.spec))
        assert sub.is_full
        assert sub.dim_Hphi == gns.dim_H

    @pytest.mark.unit
    def test_scalar_subalgebra(self, faithful_state: State) -> None:
        """B = ℂ𝟏 gives the line through h_0."""
        gns = gns_build(faithful_state.spec, faithful_state)
        sub = sub_gns(gns, scalar_subalgebra(faithful_state.spec))
        assert sub.dim_Hphi == 1
        np.testing.assert_allclose(sub.P @ gns.cyclic_vector, gns.cyclic_vector, atol=1e-12)

    @pytest.mark.unit
    def test_not_star_closed(self) -> None:
        """span{𝟏, E_12} is not a *-subalgebra."""
        spec = AlgebraSpec.from_dims([2])
        gns = gns_build(spec, State.tracial(spec))
        with pytest.raises(SubalgebraError):
            sub_gns(gns, [spec.identity(), _unit(spec, 0, 0, 1)])

    @pytest.mark.unit
    def test_missing_unit(self) -> None:
        """span{E_11} does not contain 𝟏."""
        spec = AlgebraSpec.from_dims([2])
        gns = gns_build(spec, State.tracial(spec))
        with pytest.raises(SubalgebraError):
            sub_gns(gns, [_unit(spec, 0, 0, 0)])

    @pytest.mark.unit
    def test_empty_basis(self, faithful_state: State) -> None:
        """An empty basis is rejected."""
        gns = gns_build(faithful_state.spec, faithful_state)
        with pytest.raises(SubalgebraError):
            sub_gns(gns, [])

    @pytest.mark.unit
    def test_verify_sub_gns_passes(
        self,
        faithful_state: State,
        gns_factory: Callable[[State], tuple[GnsData, SubGnsData]],
        rng: np.random.Generator,
    ) -> None:
        """Projection identities and both diagrams commute."""
        _, sub = gns_factory(faithful_state)
        expectation = centralizer_expectation(faithful_state.spec, faithful_state)
        checks = verify_sub_gns(sub, expectation, rng, samples=5)
        assert [c.name for c in checks] == ["gns.projection", "gns.diagram", "gns.expectation_diagram"]
        _assert_all_pass(checks)

    @pytest.mark.unit
    def test_project_to_b(self, faithful_state: State) -> None:
        """Elements of B are fixed and their distance to B vanishes."""
        gns = gns_build(faithful_state.spec, faithful_state)
        basis = centralizer_subalgebra(faithful_state.spec, faithful_state)
        sub = sub_gns(gns, basis)
        assert sub.distance_to_b(faithful_state.density) < 1e-9
        assert sub.project_to_b(faithful_state.density).allclose(faithful_state.density, atol=1e-9)


class TestConditionalExpectations:
    """Test the expectations and their residual suite."""

    @pytest.mark.unit
    def test_centralizer_expectation(self, faithful_state: State) -> None:
        """The pinching onto A^φ satisfies every property."""
        spec = faithful_state.spec
        expectation = centralizer_expectation(spec, faithful_state)
        checks = verify_expectation(
            spec, expectation, faithful_state, make_generator(TEST_SEED), samples=_EXPECTATION_SAMPLES
        )
        assert len(checks) == 9
        _assert_all_pass(checks)

    @pytest.mark.unit
    def test_scalar_expectation(self, faithful_state: State) -> None:
        """a ↦ φ(a)𝟏 is a conditional expectation onto ℂ𝟏."""
        spec = faithful_state.spec
        expectation = scalar_expectation(spec, faithful_state)
        _assert_all_pass(
            verify_expectation(
                spec, expectation, faithful_state, make_generator(TEST_SEED), samples=_EXPECTATION_SAMPLES
            )
        )

    @pytest.mark.unit
    def test_identity_expectation(self, faithful_state: State) -> None:
        """id is a conditional expectation onto A."""
        spec = faithful_state.spec
        _assert_all_pass(
            verify_expectation(
                spec,
                identity_expectation(spec),
                faithful_state,
                make_generator(TEST_SEED),
                samples=_EXPECTATION_SAMPLES,
            )
        )

    @pytest.mark.unit
    def test_centralizer_expectation_of_corner_state(self, m3: AlgebraSpec) -> None:
        """The non-faithful case uses the kernel projection too."""
        state = State.corner(m3)
        expectation = centralizer_expectation(m3, state)
        assert len(expectation.range_basis) == 5
        _assert_all_pass(
            verify_expectation(m3, expectation, state, make_generator(TEST_SEED), samples=_EXPECTATION_SAMPLES)
        )

    @pytest.mark.unit
    @pytest.mark.parametrize("kind", ["random", "corner"])
    def test_support_form_agrees(self, kind: str, state_factory: Callable[..., State]) -> None:
        """E_{φ_p}(pap) + (𝟏−p)a(𝟏−p) is the centralizer expectation."""
        spec = AlgebraSpec.from_dims([3])
        state = state_factory(spec, kind)
        gap = support_expectation(spec, state).matrix - centralizer_expectation(spec, state).matrix
        assert np.linalg.norm(gap, 2) < 1e-9

    @pytest.mark.unit
    def test_range_is_centralizer(self, faithful_state: State) -> None:
        """E(a) commutes with the density."""
        spec = faithful_state.spec
        expectation = centralizer_expectation(spec, faithful_state)
        a = random_element(spec, make_generator(TEST_SEED))
        ea = expectation(a)
        d = faithful_state.density
        assert (ea @ d).distance(d @ ea) < 1e-9
        assert len(expectation.range_basis) == len(commutant(spec, [d]))

    @pytest.mark.unit
    def test_norm_estimate_includes_unit(self, faithful_state: State) -> None:
        """‖E(𝟏)‖ = 1 makes the estimate at least one."""
        expectation = scalar_expectation(faithful_state.spec, faithful_state)
        assert expectation.norm_estimate([]) == pytest.approx(1.0)


class TestExtensionPurity:
    """Test the purity consistency of φ₀∘E."""

    @pytest.mark.unit
    def test_full_subalgebra_is_decided(self, m3: AlgebraSpec) -> None:
        """B = A gives a definite answer."""
        state = State.corner(m3)
        assert extension_purity(m3, identity_expectation(m3), state) == CheckStatus.PASS

    @pytest.mark.unit
    def test_proper_subalgebra_is_not_determined(self, m3: AlgebraSpec) -> None:
        """B ≠ A is reported as not determined."""
        state = State.corner(m3)
        assert extension_purity(m3, centralizer_expectation(m3, state), state) == CheckStatus.NOT_DETERMINED

    @pytest.mark.unit
    def test_functional_round_trip(self, m3: AlgebraSpec) -> None:
        """φ∘id is φ."""
        state = State.corner(m3)
        composed = Functional(m3, state.functional.coefficients @ identity_expectation(m3).matrix)
        assert State.from_functional(composed).density.allclose(state.density, atol=1e-12)
