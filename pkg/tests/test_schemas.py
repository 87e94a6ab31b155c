"""Tests for pqground.schemas module."""

import pytest
from pydantic import ValidationError

from pqground.schemas import (
    CertificateReport,
    MountainPassReport,
    NonlinearityConfig,
    OperatorConfig,
    ShootingConfig,
    SolveConfig,
    SphereRow,
    SweepConfig,
)


class TestOperatorConfig:
    """Tests for OperatorConfig schema."""

    def test_defaults(self) -> None:
        """Verify the default operator is the (2,4)-Laplacian in R^3."""
        cfg = OperatorConfig()
        assert cfg.kind == "pq"
        assert cfg.dim == 3
        assert (cfg.p, cfg.q, cfg.beta) == (2.0, 4.0, 1.0)

    def test_dimension_alias(self) -> None:
        """Verify the dimension is read from the key N."""
        cfg = OperatorConfig.model_validate({"N": 5})
        assert cfg.dim == 5

    def test_rejects_low_dimension(self) -> None:
        """Verify N < 3 fails validation."""
        with pytest.raises(ValidationError):
            OperatorConfig.model_validate({"N": 2})

    def test_rejects_unknown_keys(self) -> None:
        """Verify extra keys are forbidden."""
        with pytest.raises(ValidationError):
            OperatorConfig.model_validate({"gamma": 1.0})

    def test_chain_order_range(self) -> None:
        """Verify k is limited to [1, 64]."""
        with pytest.raises(ValidationError):
            OperatorConfig(kind="bi", k=65)


class TestNonlinearityConfig:
    """Tests for NonlinearityConfig schema."""

    def test_pure_power_needs_alpha(self) -> None:
        """Verify pure_power without alpha fails."""
        with pytest.raises(ValidationError, match="alpha"):
            NonlinearityConfig(kind="pure_power")

    def test_min_power_aliases(self) -> None:
        """Verify l and qstar feed min_power."""
        cfg = NonlinearityConfig.model_validate({"kind": "min_power", "l": 2.0, "qstar": 6.0})
        assert cfg.power == 2.0

    def test_positive_mass_needs_parameters(self) -> None:
        """Verify the positive-mass regime needs l and m outside cubic_minus_linear."""
        with pytest.raises(ValidationError, match="ell and m"):
            NonlinearityConfig(kind="pure_power", alpha=4.0, regime="positive")

    def test_cubic_minus_linear_mass_optional(self) -> None:
        """Verify cubic_minus_linear may omit l and m."""
        cfg = NonlinearityConfig(kind="cubic_minus_linear", regime="positive")
        assert cfg.ell is None


class TestShootingConfig:
    """Tests for ShootingConfig schema."""

    def test_scan_order(self) -> None:
        """Verify scan_lo must be below scan_hi."""
        with pytest.raises(ValidationError, match="scan_lo"):
            ShootingConfig(scan_lo=5.0, scan_hi=1.0)

    def test_resolution_floor(self) -> None:
        """Verify M >= 64."""
        with pytest.raises(ValidationError):
            ShootingConfig(resolution=32)

    def test_tail_fraction_range(self) -> None:
        """Verify the tail exponent fraction defaults to 0.9 and lies in (0, 1]."""
        assert ShootingConfig().tail_exponent_fraction == 0.9
        assert ShootingConfig(tail_exponent_fraction=0.5).tail_exponent_fraction == 0.5
        with pytest.raises(ValidationError):
            ShootingConfig(tail_exponent_fraction=None)
        with pytest.raises(ValidationError):
            ShootingConfig(tail_exponent_fraction=1.5)


class TestSolveConfig:
    """Tests for SolveConfig and SweepConfig."""

    def test_empty_document(self) -> None:
        """Verify every section has a default."""
        cfg = SolveConfig()
        assert cfg.name == "run"
        assert cfg.sweep is None
        assert cfg.output.format == "json"

    def test_sweep_axes(self) -> None:
        """Verify omitted axes stay None and N is an alias."""
        sweep = SweepConfig.model_validate({"k": [2, 3], "N": [3, 4]})
        assert sweep.k == [2, 3]
        assert sweep.dim == [3, 4]
        assert sweep.alpha is None


class TestReports:
    """Tests for the computed fields of result reports."""

    def _report(self, **overrides: object) -> CertificateReport:
        fields: dict[str, object] = {
            "pohozaev_residual": 1e-5,
            "nehari_residual": 1e-5,
            "action_relation_residual": 1e-6,
            "action": 1.0,
            "positivity": True,
            "decay_bound": 0.5,
            "decay_variation": 0.0,
            "tail_valid": True,
            "tail_fraction": 0.0,
            "pohozaev_passed": True,
            "nehari_passed": True,
            "action_relation_passed": True,
            "decay_passed": True,
        }
        fields.update(overrides)
        return CertificateReport.model_validate(fields)

    def test_certificate_passed(self) -> None:
        """Verify passed requires every verdict."""
        assert self._report().passed
        assert not self._report(positivity=False).passed
        assert not self._report(decay_passed=False).passed

    def test_passed_is_serialized(self) -> None:
        """Verify the computed verdict appears in JSON output."""
        assert self._report().model_dump()["passed"] is True

    def test_sphere_positive(self) -> None:
        """Verify sphere_positive needs every sphere value above 0."""
        report = MountainPassReport(
            lam=1.0,
            tau=2.0,
            level_upper_bound=1.0,
            path_s=[0.0, 1.0],
            path_values=[0.0, -1.0],
            sphere=[SphereRow(rho=1e-3, value=1e-7), SphereRow(rho=1e-2, value=-1e-9)],
        )
        assert not report.sphere_positive
