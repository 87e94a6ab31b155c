"""Tests for pqground.shooting module."""

import math

import numpy as np
import pytest

from pqground.certificates import certify
from pqground.errors import DomainError, NoBracketError
from pqground.operators import PQOperator
from pqground.problem import Problem, build_problem
from pqground.schemas import CertificateReport, ScanRow, ShootingConfig
from pqground.shooting import (
    Crossing,
    Decay,
    GroundState,
    Inconclusive,
    Rebound,
    algebraic_limit,
    bisect_bracket,
    find_brackets,
    find_ground_state,
    flux_conservation_residual,
    integrate_shot,
    multi_start_ground_state,
    positivity_threshold,
    scan_shots,
    startup_offset,
    zero_mass_exponent,
)
from pqground.utils import load_config
from tests.oracles import classical_soliton_u0


@pytest.fixture(scope="module")
def soliton_u0() -> float:
    """Reference u(0) of the classical soliton from the independent oracle."""
    return classical_soliton_u0(3)


@pytest.fixture
def small_scan() -> ShootingConfig:
    """Four shots over [1.5, 10] on a light grid."""
    return ShootingConfig(r_max=40.0, resolution=1024, scan_lo=1.5, scan_hi=10.0, scan_count=4)


class TestIntegrateShot:
    """Tests for integrate_shot."""

    def test_low_start_rebounds(self, classical_problem: Problem, small_scan: ShootingConfig) -> None:
        """Verify u0 = 1.5 turns around before reaching zero."""
        shot = integrate_shot(1.5, classical_problem.spec, classical_problem.op, small_scan)
        assert isinstance(shot.outcome, Rebound)
        assert not shot.crossed

    def test_high_start_crosses(self, classical_problem: Problem, small_scan: ShootingConfig) -> None:
        """Verify u0 = 10 crosses zero at a finite radius."""
        shot = integrate_shot(10.0, classical_problem.spec, classical_problem.op, small_scan)
        assert isinstance(shot.outcome, Crossing)
        assert 0 < shot.outcome.radius < small_scan.r_max
        assert shot.crossed

    def test_negative_force_rebounds_at_start(
        self, classical_problem: Problem, small_scan: ShootingConfig
    ) -> None:
        """Verify g(u0) < 0 is classified as a rebound at delta without integrating."""
        shot = integrate_shot(0.5, classical_problem.spec, classical_problem.op, small_scan)
        assert isinstance(shot.outcome, Rebound)
        assert shot.outcome.radius == startup_offset(small_scan)

    def test_equilibrium(self, classical_problem: Problem, small_scan: ShootingConfig) -> None:
        """Verify g(u0) = 0 is inconclusive."""
        shot = integrate_shot(1.0, classical_problem.spec, classical_problem.op, small_scan)
        assert isinstance(shot.outcome, Inconclusive)
        assert shot.outcome.reason == "equilibrium"

    @pytest.mark.parametrize("u0", [0.0, -1.0, math.nan, math.inf])
    def test_rejects_bad_start(
        self, classical_problem: Problem, small_scan: ShootingConfig, u0: float
    ) -> None:
        """Verify u0 must be positive and finite."""
        with pytest.raises(DomainError):
            integrate_shot(u0, classical_problem.spec, classical_problem.op, small_scan)

    def test_startup_offset(self) -> None:
        """Verify delta = 1e-6 max(1, R_max / M)."""
        assert startup_offset(ShootingConfig(r_max=40.0, resolution=4096)) == pytest.approx(1e-6)
        assert startup_offset(ShootingConfig(r_max=400.0, resolution=100)) == pytest.approx(4e-6)

    def test_flux_conserved(self, classical_problem: Problem, small_scan: ShootingConfig) -> None:
        """Verify F(r) = -int_0^r s^(N-1) g(u) ds along a crossing shot."""
        shot = integrate_shot(10.0, classical_problem.spec, classical_problem.op, small_scan)
        assert flux_conservation_residual(shot, classical_problem.spec) < 1e-6

    def test_crossing_profile_ends_at_zero(
        self, classical_problem: Problem, small_scan: ShootingConfig
    ) -> None:
        """Verify the sampled profile of a crossing shot ends at u = 0 with no tail."""
        shot = integrate_shot(10.0, classical_problem.spec, classical_problem.op, small_scan)
        profile = shot.profile
        assert profile.u[-1] == 0.0
        assert profile.u0 == pytest.approx(10.0)
        assert profile.tail.truncated
        assert profile.meta["outcome"] == "crossing"

    def test_rebound_profile_is_flat_at_end(
        self, classical_problem: Problem, small_scan: ShootingConfig
    ) -> None:
        """Verify a rebound profile ends with u' = 0 and stays positive."""
        shot = integrate_shot(1.5, classical_problem.spec, classical_problem.op, small_scan)
        profile = shot.profile
        assert profile.du[-1] == 0.0
        assert np.all(profile.u > 0)
        assert profile.grid.r_max == pytest.approx(shot.outcome.radius)


class TestScan:
    """Tests for scan_shots, find_brackets and bisect_bracket."""

    def test_positivity_threshold(self, classical_problem: Problem) -> None:
        """Verify G(s) = -s^2/2 + s^4/4 turns positive at sqrt(2)."""
        assert positivity_threshold(classical_problem.spec) == pytest.approx(math.sqrt(2.0), rel=1e-10)

    def test_scan_reports_rows(self, classical_problem: Problem, small_scan: ShootingConfig) -> None:
        """Verify every shot is reported to the sink in scan order."""
        rows: list[ScanRow] = []
        shots = scan_shots(classical_problem.spec, classical_problem.op, small_scan, rows.append)
        assert [row.u0 for row in rows] == [shot.u0 for shot in shots]
        assert [row.outcome for row in rows] == ["rebound", "rebound", "crossing", "crossing"]

    def test_single_bracket(self, classical_problem: Problem, small_scan: ShootingConfig) -> None:
        """Verify the scan over [1.5, 10] brackets the soliton once."""
        shots = scan_shots(classical_problem.spec, classical_problem.op, small_scan)
        brackets = find_brackets(shots)
        assert len(brackets) == 1
        low, high = brackets[0]
        assert not low.crossed
        assert high.crossed
        assert low.u0 < 4.3374 < high.u0

    def test_bisection_matches_oracle(
        self, classical_problem: Problem, small_scan: ShootingConfig, soliton_u0: float
    ) -> None:
        """Verify bisection lands within 1e-3 of the reference u(0)."""
        low = integrate_shot(4.0, classical_problem.spec, classical_problem.op, small_scan)
        high = integrate_shot(5.0, classical_problem.spec, classical_problem.op, small_scan)
        cfg = small_scan.model_copy(update={"bisection_rtol": 1e-6})
        low, high = bisect_bracket(low, high, classical_problem.spec, classical_problem.op, cfg)
        assert not low.crossed
        assert abs(low.u0 - soliton_u0) / soliton_u0 < 1e-3
        assert soliton_u0 == pytest.approx(4.3374, rel=1e-4)

    def test_find_ground_state(
        self, classical_problem: Problem, small_scan: ShootingConfig, soliton_u0: float
    ) -> None:
        """Verify the first bracket of a short scan resolves to the soliton."""
        state = find_ground_state(classical_problem.spec, classical_problem.op, small_scan)
        assert abs(state.u0 - soliton_u0) / soliton_u0 < 1e-3
        assert len(state.scan) == 4
        assert state.report.positivity
        assert not state.selected.shot.crossed
        assert state.selected.bracket[0] == state.u0


@pytest.mark.slow
class TestGroundStates:
    """End-to-end multi-start solves on the bundled presets."""

    def test_classical_soliton(self, classical_state: GroundState, soliton_u0: float) -> None:
        """Verify the certified classical ground state matches the reference u(0)."""
        assert abs(classical_state.u0 - soliton_u0) / soliton_u0 < 1e-3
        assert classical_state.report.passed
        assert classical_state.selected.certified

    def test_classical_candidates(self, classical_state: GroundState) -> None:
        """Verify the selected candidate has the least action among certified ones."""
        certified = [cand for cand in classical_state.candidates if cand.certified]
        assert classical_state.selected.action == min(cand.action for cand in certified)
        assert classical_state.selected.action > 0

    def test_chain_ground_state(self, chain_state: GroundState) -> None:
        """Verify the k=2 chain with g(s) = s^6 yields a certified positive solution."""
        assert chain_state.report.passed
        assert isinstance(chain_state.selected.shot.outcome, Decay)
        assert chain_state.profile.tail.exponent == pytest.approx(1.0, rel=1e-3)
        assert chain_state.u0 < 1.5309
        assert chain_state.report.pure_power_residual is not None
        assert chain_state.report.pure_power_residual < 1e-2
        assert np.all(chain_state.profile.u[:-1] > 0)

    def test_chain_nonexistence_case(self) -> None:
        """Verify g(s) = s^5 for the k=2 chain produces no certified candidate and no decay."""
        problem = build_problem(load_config("bi_k2_alpha6"))
        cfg = load_config("bi_k2_alpha6")
        with pytest.raises(NoBracketError) as exc_info:
            multi_start_ground_state(problem.spec, problem.op, cfg.shooting, cfg.tolerances)
        assert exc_info.value.scan
        assert all(row.outcome != Decay.kind for row in exc_info.value.scan)
        assert not any(record.certified for record in exc_info.value.rejected)


class TestZeroMassTail:
    """Tests for the algebraic-tail classification of zero-mass shots."""

    def test_algebraic_limit(self) -> None:
        """Verify u = 0.3 + 2/r matched at r = 10 extrapolates to 0.3."""
        assert algebraic_limit(10.0, 0.3 + 2.0 / 10.0, -2.0 / 100.0, 1.0) == pytest.approx(0.3, rel=1e-12)

    def test_zero_mass_exponent(self, chain_problem: Problem) -> None:
        """Verify (N - p)/(p - 1) for the chain and for p = 1.5 in R^3."""
        assert zero_mass_exponent(chain_problem.op) == pytest.approx(1.0)
        assert zero_mass_exponent(PQOperator(1.5, None, 0.0, 3, degenerate=True)) == pytest.approx(3.0)

    def test_subthreshold_shot_levels_off(self, chain_problem: Problem) -> None:
        """Verify u(0) = 1 on the chain keeps a positive limit and is not a crossing."""
        cfg = load_config("bi_k2_alpha7").shooting
        shot = integrate_shot(1.0, chain_problem.spec, chain_problem.op, cfg)
        assert isinstance(shot.outcome, Inconclusive)
        assert shot.outcome.reason.startswith("levels off")
        assert not shot.crossed

    def test_crossing_beyond_r_max(self, chain_problem: Problem) -> None:
        """Verify u(0) = 1.533 crosses past R_max = 400 and keeps u > 0 on the grid."""
        cfg = load_config("bi_k2_alpha7").shooting
        shot = integrate_shot(1.533, chain_problem.spec, chain_problem.op, cfg)
        assert isinstance(shot.outcome, Crossing)
        assert shot.outcome.extrapolated
        assert shot.outcome.radius > 400.0
        assert shot.profile.u[-1] > 0

    def test_threshold_is_bracketed(self, chain_problem: Problem) -> None:
        """Verify the levelling and the extrapolated crossing shots form one bracket."""
        cfg = load_config("bi_k2_alpha7").shooting
        shots = [integrate_shot(u0, chain_problem.spec, chain_problem.op, cfg) for u0 in (1.0, 1.533)]
        brackets = find_brackets(shots)
        assert len(brackets) == 1
        assert brackets[0][0].u0 == 1.0

    @pytest.mark.slow
    def test_threshold_independent_of_r_max(self, chain_problem: Problem) -> None:
        """Verify the bisected u(0) at R_max = 200 and 400 agree to 1e-5."""
        found = []
        for r_max in (200.0, 400.0):
            cfg = load_config("bi_k2_alpha7").shooting.model_copy(
                update={"r_max": r_max, "bisection_rtol": 1e-9}
            )
            low = integrate_shot(1.0, chain_problem.spec, chain_problem.op, cfg)
            high = integrate_shot(2.0, chain_problem.spec, chain_problem.op, cfg)
            low, _ = bisect_bracket(low, high, chain_problem.spec, chain_problem.op, cfg)
            found.append(low.u0)
        assert abs(found[0] - found[1]) / found[1] < 1e-5
        assert found[1] < 1.5309


@pytest.mark.slow
class TestRefinement:
    """Convergence of the classical solve under tighter integration settings."""

    def _candidate_report(self, problem: Problem, cfg: ShootingConfig) -> tuple[float, CertificateReport]:
        low = integrate_shot(4.0, problem.spec, problem.op, cfg)
        high = integrate_shot(5.0, problem.spec, problem.op, cfg)
        low, _ = bisect_bracket(low, high, problem.spec, problem.op, cfg)
        assert not low.crossed
        return low.u0, certify(low.profile, problem.spec, problem.op)

    def test_coarse_fails_refined_passes(self, classical_problem: Problem) -> None:
        """Verify a coarse solve fails certification and the default settings pass."""
        base = load_config("classical_soliton").shooting
        coarse = base.model_copy(update={"resolution": 128, "rtol": 1e-4, "bisection_rtol": 5e-2})
        _, report = self._candidate_report(classical_problem, coarse)
        assert not report.passed
        _, report = self._candidate_report(classical_problem, base)
        assert report.passed

    def test_residual_shrinks(self, classical_problem: Problem) -> None:
        """Verify the Pohozaev residual drops at least fourfold under refinement."""
        base = load_config("classical_soliton").shooting
        level0 = base.model_copy(update={"resolution": 512, "rtol": 1e-4, "bisection_rtol": 1e-4})
        level1 = base.model_copy(update={"resolution": 1024, "rtol": 1e-9, "bisection_rtol": 1e-9})
        _, coarse = self._candidate_report(classical_problem, level0)
        _, fine = self._candidate_report(classical_problem, level1)
        assert fine.pohozaev_residual * 4.0 <= coarse.pohozaev_residual

    def test_halving_rtol_keeps_u0(self, classical_problem: Problem) -> None:
        """Verify halving rtol moves u(0) by less than ten bisection widths."""
        base = load_config("classical_soliton").shooting.model_copy(update={"bisection_rtol": 1e-8})
        u0_a, _ = self._candidate_report(classical_problem, base.model_copy(update={"rtol": 1e-10}))
        u0_b, _ = self._candidate_report(classical_problem, base.model_copy(update={"rtol": 5e-11}))
        assert abs(u0_a - u0_b) < 10 * 1e-8 * u0_a
