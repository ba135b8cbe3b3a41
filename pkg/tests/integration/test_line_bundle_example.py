"""
Integration tests for the line-bundle example on M_n.

Builds the full pipeline for φ(a) = a_11 and checks the structure, the kernel
closed form and holomorphy of the realized sections.
"""

import numpy as np
import pytest

from splurge_geomrep.algebra_core import haar_unitary
from splurge_geomrep.bundle_kernel import kernel_eval, kernel_gram
from splurge_geomrep.config.tolerance_config import ToleranceProfile
from splurge_geomrep.experiments import borel_weil_config, build_experiment, run_borel_weil
from splurge_geomrep.factorization import Flag, holomorphy_report
from splurge_geomrep.result_models import CheckStatus
from splurge_geomrep.utils.sampling import haar_unitaries, random_vector
from tests.conftest import TEST_SEED


class TestLineBundleExample:
    """The natural representation of U(n) on sections over projective space."""

    @pytest.mark.integration
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_all_checks_pass(self, n: int) -> None:
        """Every determined check passes for small n."""
        _, checks, metadata = run_borel_weil(n, TEST_SEED, ToleranceProfile())
        failed = [(c.name, c.residual) for c in checks if c.status == CheckStatus.FAIL]
        assert not failed
        assert metadata["dim_H"] == n
        assert metadata["dim_Hphi"] == 1
        assert metadata["orbit_real_dim"] == 2 * (n - 1)

    @pytest.mark.integration
    def test_kernel_closed_form(self) -> None:
        """K(u_1, u_2) = (u_1*u_2)_11."""
        exp = build_experiment(borel_weil_config(4, 1), ToleranceProfile())
        for k in range(5):
            u1 = haar_unitary(exp.spec, 100 + k)
            u2 = haar_unitary(exp.spec, 200 + k)
            expected = (u1.blocks[0].conj().T @ u2.blocks[0])[0, 0]
            assert abs(kernel_eval(exp.sub, u1, u2).matrix[0, 0] - expected) < 1e-10

    @pytest.mark.integration
    def test_section_space_has_dimension_n(self, rng: np.random.Generator) -> None:
        """Many sample points span an n-dimensional space of sections."""
        exp = build_experiment(borel_weil_config(3, 2), ToleranceProfile())
        points = haar_unitaries(exp.spec, rng, 20)
        rkhs = kernel_gram(exp.sub, points, [random_vector(rng, 1) for _ in points])
        assert rkhs.rank() == 3
        assert rkhs.min_eigenvalue() > -1e-10

    @pytest.mark.integration
    @pytest.mark.parametrize("step", [1e-4, 1e-5])
    def test_holomorphy_and_control(self, rng: np.random.Generator, step: float) -> None:
        """ι(h) satisfies Cauchy–Riemann along the chart; its conjugate does not."""
        exp = build_experiment(borel_weil_config(3, 3), ToleranceProfile())
        flag = Flag.from_state(exp.spec, exp.state)
        h = random_vector(rng, exp.gns.dim_H)
        center = haar_unitary(exp.spec, TEST_SEED)
        section = holomorphy_report(exp.sub, flag, h, center, step)
        control = holomorphy_report(exp.sub, flag, h, center, step, conjugate=True)
        assert section.residual < 1e-3
        assert section.order >= 1.8
        assert control.residual > 0.1
