"""Tests for pqground.certificates module."""

import math
from fractions import Fraction

import numpy as np
import pytest

from pqground.certificates import (
    action_relation_residual,
    certify,
    nehari_residual,
    nonexistence_certificate,
    nonexistence_coefficients,
    pohozaev_residual,
    positivity_verdict,
    pure_power_identity_residual,
)
from pqground.errors import InvalidNonlinearityError
from pqground.operators import BIChainOperator
from pqground.problem import Problem
from pqground.radial import Profile
from pqground.schemas import ShootingConfig, ToleranceConfig
from pqground.shooting import GroundState, integrate_shot
from tests.conftest import gaussian
from tests.oracles import gaussian_gradient_square, gaussian_square


class TestNonexistence:
    """Tests for nonexistence_coefficients and nonexistence_certificate."""

    def test_alpha_six(self) -> None:
        """Verify alpha=6, N=3, k=2 gives c = (0, -3/4) and is certified."""
        assert nonexistence_coefficients(6.0, 3, 2) == [Fraction(0), Fraction(-3, 4)]
        report = nonexistence_certificate(6.0, 3, 2, 1.0)
        assert report.certified
        assert [row.c_j for row in report.rows] == [0.0, -0.75]
        assert [row.a_j for row in report.rows] == [1.0, 1.0]

    def test_alpha_seven(self) -> None:
        """Verify alpha=7 leaves c_1 = 1/14 > 0, so nothing is certified."""
        assert nonexistence_coefficients(7.0, 3, 2)[0] == Fraction(1, 14)
        assert not nonexistence_certificate(7.0, 3, 2, 1.0).certified

    def test_single_term(self) -> None:
        """Verify alpha=2, N=3, k=1 gives c_1 = -1."""
        report = nonexistence_certificate(2.0, 3, 1, 1.0)
        assert report.rows[0].c_j == -1.0
        assert report.certified

    def test_half_integer_alpha_is_exact(self) -> None:
        """Verify alpha = 13/2 keeps exact fractions."""
        coefs = nonexistence_coefficients(6.5, 3, 1)
        assert coefs == [Fraction(1, 2) - Fraction(6, 13)]

    def test_non_dyadic_alpha_is_exact(self) -> None:
        """Verify alpha = 7/3 is recognized as a fraction despite its binary expansion."""
        coefs = nonexistence_coefficients(7 / 3, 3, 1)
        assert coefs == [Fraction(1, 2) - Fraction(9, 7)]
        assert isinstance(coefs[0], Fraction)

    def test_irrational_alpha_uses_floats(self) -> None:
        """Verify alpha = pi falls back to floats."""
        coefs = nonexistence_coefficients(math.pi, 3, 2)
        assert all(isinstance(cj, float) for cj in coefs)
        assert coefs[0] == pytest.approx(0.5 - 3.0 / math.pi)

    def test_rejects_alpha(self) -> None:
        """Verify alpha <= 1 is rejected."""
        with pytest.raises(InvalidNonlinearityError):
            nonexistence_certificate(1.0, 3, 2, 1.0)


class TestPositivity:
    """Tests for positivity_verdict."""

    def test_gaussian(self, gaussian_profile: Profile) -> None:
        """Verify a positive profile passes."""
        assert positivity_verdict(gaussian_profile)

    def test_sign_change(self, gaussian_profile: Profile) -> None:
        """Verify a profile that dips below zero fails."""
        shifted = gaussian_profile.perturbed(np.ones_like, np.zeros_like, -0.5)
        assert not positivity_verdict(shifted)

    def test_crossing_shot(self, classical_problem: Problem) -> None:
        """Verify a shot that crosses zero steeply fails."""
        cfg = ShootingConfig(r_max=40.0, resolution=512)
        shot = integrate_shot(10.0, classical_problem.spec, classical_problem.op, cfg)
        assert not positivity_verdict(shot.profile)


class TestResiduals:
    """Identity residuals on profiles that are not solutions."""

    def test_gaussian_is_not_a_solution(self, classical_problem: Problem) -> None:
        """Verify the Gaussian fails Pohozaev and Nehari for the classical problem."""
        profile = gaussian().scaled(2.0)
        spec, op = classical_problem.spec, classical_problem.op
        assert pohozaev_residual(profile, spec, op) > 1e-2
        assert nehari_residual(profile, spec, op) > 1e-2
        report = certify(profile, spec, op)
        assert not report.passed
        assert report.positivity

    def test_action_relation_by_hand(self, classical_problem: Problem) -> None:
        """Verify |I - A/N| / (1 + |I|) for the Gaussian, computed from its norms."""
        profile = gaussian().scaled(3.0)
        spec, op = classical_problem.spec, classical_problem.op
        grad = 9.0 * gaussian_gradient_square(3)
        quadratic = 9.0 * gaussian_square(3)
        quartic = 81.0 * (math.pi / 4.0) ** 1.5
        value = grad / 2.0 - (-quadratic / 2.0 + quartic / 4.0)
        expected = abs(value - grad / 3.0) / (1.0 + abs(value))
        assert action_relation_residual(profile, spec, op) == pytest.approx(expected, rel=1e-8)

    def test_critical_power_identity(self, gaussian_profile: Profile) -> None:
        """Verify the alpha=6 identity has residual 1 for any nonzero profile."""
        op = BIChainOperator(2, 1.0, 3)
        assert pure_power_identity_residual(gaussian_profile, op, 6.0) == pytest.approx(1.0)


@pytest.mark.slow
class TestGroundStateCertificates:
    """Certificates of the computed ground states."""

    def test_classical_residuals(self, classical_state: GroundState) -> None:
        """Verify all residuals of the classical soliton are below tolerance."""
        report = classical_state.report
        tol = ToleranceConfig()
        assert report.pohozaev_residual < tol.pohozaev
        assert report.nehari_residual < tol.nehari
        assert report.action_relation_residual < tol.action_relation
        assert report.positivity
        assert report.decay_passed

    def test_scaled_solution_fails(self, classical_state: GroundState, classical_problem: Problem) -> None:
        """Verify 2u is rejected."""
        report = certify(classical_state.profile.scaled(2.0), classical_problem.spec, classical_problem.op)
        assert not report.passed
        assert not report.nehari_passed

    def test_perturbed_solution_fails(self, classical_state: GroundState, classical_problem: Problem) -> None:
        """Verify u + 0.05 exp(-r^2) is rejected."""
        bumped = classical_state.profile.perturbed(
            lambda r: np.exp(-(r**2)), lambda r: -2.0 * r * np.exp(-(r**2)), 0.05
        )
        report = certify(bumped, classical_problem.spec, classical_problem.op)
        assert not report.passed

    def test_recertification_is_stable(self, classical_state: GroundState, classical_problem: Problem) -> None:
        """Verify certifying the selected profile again reproduces the report."""
        again = certify(classical_state.profile, classical_problem.spec, classical_problem.op)
        assert again.pohozaev_residual == pytest.approx(classical_state.report.pohozaev_residual)
        assert again.action == pytest.approx(classical_state.selected.action)

    def test_chain_pure_power_identity(self, chain_state: GroundState, chain_problem: Problem) -> None:
        """Verify the pure-power identity holds on the k=2 chain ground state."""
        residual = pure_power_identity_residual(chain_state.profile, chain_problem.op, 7.0)
        assert residual < 1e-2
        assert chain_state.report.tail_valid

    def test_chain_perturbed_solution_fails(self, chain_state: GroundState, chain_problem: Problem) -> None:
        """Verify the k=2 chain ground state plus 0.05 exp(-r^2) is rejected."""
        assert chain_state.report.passed
        bumped = chain_state.profile.perturbed(
            lambda r: np.exp(-(r**2)), lambda r: -2.0 * r * np.exp(-(r**2)), 0.05
        )
        report = certify(bumped, chain_problem.spec, chain_problem.op)
        assert not report.passed
