"""Pydantic schemas for run configuration and result reports."""

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from pqground import constants as c


class OperatorConfig(BaseModel):
    """Operator block of a run configuration."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    kind: Literal["pq", "bi"] = Field("pq", description="(p,q)-Laplacian or Born-Infeld chain")
    dim: int = Field(3, ge=3, alias="N", description="Space dimension N")
    p: float = Field(2.0, gt=1, description="Lower exponent of the (p,q) pair")
    q: float | None = Field(4.0, description="Upper exponent of the (p,q) pair")
    beta: float = Field(1.0, ge=0, description="Weight of the q-Laplacian or BI parameter")
    k: int = Field(2, ge=1, le=c.MAX_CHAIN_ORDER, description="Born-Infeld chain order")
    qstar: float | None = Field(None, description="Critical exponent q*, required when q >= N")
    degenerate: bool = Field(False, description="Allow beta = 0 (single p-Laplacian)")
    normalized: bool = Field(False, description="Use a_j = 1 for every chain term")


class NonlinearityConfig(BaseModel):
    """Nonlinearity block: a named builtin or polynomial coefficients."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    kind: Literal["pure_power", "cubic_minus_linear", "min_power", "two_power", "polynomial"] = Field(
        "pure_power", description="Builtin family"
    )
    alpha: float | None = Field(None, gt=1, description="g(s) = s^(alpha-1)")
    power: float | None = Field(None, alias="l", description="Exponent l of min_power")
    qstar: float | None = Field(None, description="Exponent q* of min_power")
    power1: float | None = Field(None, alias="l1", description="First exponent of two_power")
    power2: float | None = Field(None, alias="l2", description="Second exponent of two_power")
    scale: float = Field(1.0, alias="K", description="Coefficient K of two_power")
    coefficients: list[float] | None = Field(
        None, description="Polynomial coefficients c_0, c_1, ... of g(s) = sum c_i s^i"
    )
    zeta: float | None = Field(None, gt=0, description="Point with G(zeta) > 0; located if omitted")
    regime: Literal["zero", "positive"] = Field("zero", description="Mass regime")
    ell: float | None = Field(None, description="Mass exponent l of the positive-mass regime")
    m: float | None = Field(None, gt=0, description="Mass m_l of the positive-mass regime")

    @model_validator(mode="after")
    def check_parameters(self) -> "NonlinearityConfig":
        """Require the parameters each kind needs."""
        required: dict[str, list[str]] = {
            "pure_power": ["alpha"],
            "min_power": ["power", "qstar"],
            "two_power": ["power1", "power2"],
            "polynomial": ["coefficients"],
        }
        missing = [name for name in required.get(self.kind, []) if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.kind} requires {', '.join(missing)}")
        if self.regime == "positive" and self.kind != "cubic_minus_linear":
            if self.ell is None or self.m is None:
                raise ValueError("positive mass regime requires ell and m")
        return self


class ShootingConfig(BaseModel):
    """Integrator, grid, decay and scan settings of the shooting solver."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    rtol: float = Field(c.DEFAULT_RTOL, gt=0, description="Integrator relative tolerance")
    atol: float = Field(c.DEFAULT_ATOL, gt=0, description="Integrator absolute tolerance")
    r_max: float = Field(c.DEFAULT_R_MAX, gt=0, description="Outer radius R_max")
    resolution: int = Field(c.DEFAULT_RESOLUTION, ge=c.MIN_RESOLUTION, description="Grid size M")
    geometric_fraction: float = Field(c.GEOMETRIC_FRACTION, gt=0, lt=1)
    grading_ratio: float = Field(c.GRADING_RATIO, gt=1)
    max_step: float = Field(1.0, gt=0, description="Largest integrator step")
    decay_u: float = Field(c.DECAY_U_FRACTION, gt=0, description="Decay threshold on |u| / u0")
    decay_du: float = Field(c.DECAY_DU_FRACTION, gt=0, description="Decay threshold on |u'| / u0")
    tail_exponent_fraction: float = Field(
        c.TAIL_EXPONENT_FRACTION,
        gt=0,
        le=1,
        description="Zero-mass decay needs a fitted tail exponent of this fraction of (N-p)/(p-1)",
    )
    bisection_rtol: float = Field(c.BISECTION_RTOL, gt=0, description="Bisection tolerance on u(0)")
    max_bisections: int = Field(c.MAX_BISECTIONS, ge=1)
    scan_lo: float = Field(c.SCAN_LO, gt=0, description="Lowest scanned u(0)")
    scan_hi: float = Field(c.SCAN_HI, gt=0, description="Highest scanned u(0)")
    scan_count: int = Field(c.SCAN_COUNT, ge=2, description="Number of log-spaced scan shots")

    @model_validator(mode="after")
    def check_scan(self) -> "ShootingConfig":
        """Require scan_lo < scan_hi."""
        if not self.scan_lo < self.scan_hi:
            raise ValueError("scan_lo must be below scan_hi")
        return self


class ToleranceConfig(BaseModel):
    """Certification tolerances."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    pohozaev: float = Field(c.RESIDUAL_TOLERANCE, gt=0)
    nehari: float = Field(c.RESIDUAL_TOLERANCE, gt=0)
    action_relation: float = Field(c.RESIDUAL_TOLERANCE, gt=0)
    decay_stability: float = Field(c.DECAY_STABILITY_TOLERANCE, gt=0)
    require_certified: bool = Field(
        True, description="Only certified candidates may be selected as the ground state"
    )


class OutputConfig(BaseModel):
    """Where and how results are written."""

    model_config = ConfigDict(extra="forbid")

    directory: Path | None = Field(None, description="Output directory")
    format: Literal["json", "csv"] = Field("json", description="Profile file format")


class SweepConfig(BaseModel):
    """Parameter ranges of a sweep.

    An omitted axis keeps the base value; an empty list empties the sweep.
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    alpha: list[float] | None = Field(None, description="Pure-power exponents")
    k: list[int] | None = Field(None, description="Born-Infeld chain orders")
    beta: list[float] | None = None
    dim: list[int] | None = Field(None, alias="N")
    resolution: list[int] | None = None


class SolveConfig(BaseModel):
    """A complete run configuration."""

    model_config = ConfigDict(extra="forbid")

    name: str = Field("run", description="Run name, also the output subdirectory")
    description: str = Field("", description="Short description")
    operator: OperatorConfig = Field(default_factory=OperatorConfig)
    nonlinearity: NonlinearityConfig = Field(default_factory=NonlinearityConfig)
    shooting: ShootingConfig = Field(default_factory=ShootingConfig)
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    sweep: SweepConfig | None = Field(None, description="Parameter ranges for `pqground sweep`")


# Reports


class HypothesisVerdict(BaseModel):
    """Sampled verdict on one structural hypothesis."""

    name: str = Field(..., description="Hypothesis label, e.g. 'g3'")
    passed: bool
    value: float | None = Field(None, description="Statistic the verdict is based on")
    evidence: str = Field("sampled", description="How the verdict was obtained")
    note: str = ""


class AssumptionReport(BaseModel):
    """Verdicts for the structural hypotheses of a problem."""

    verdicts: list[HypothesisVerdict] = Field(default_factory=list)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def get(self, name: str) -> HypothesisVerdict:
        """Return the verdict with the given name."""
        for verdict in self.verdicts:
            if verdict.name == name:
                return verdict
        raise KeyError(name)


class DecompositionBounds(BaseModel):
    """Sampled checks of the g = g1 - g2 split."""

    nonnegative: bool
    max_consistency_error: float
    calibrated_c: float | None = Field(None, description="Smallest C with G1 <= C(s^p* + s^q*)")
    c_eps: float | None = Field(None, description="Smallest C with g1 <= C s^(q*-1) + g2 / 2")
    lower_bounds_hold: bool | None = Field(None, description="g2 >= m s^(l-1) and G2 >= m s^l / l")


class ScanRow(BaseModel):
    """One scan shot: initial value, outcome and event radius."""

    u0: float
    outcome: str
    radius: float | None = None


class CertificateReport(BaseModel):
    """Identity residuals and verdicts for a candidate solution."""

    pohozaev_residual: float
    nehari_residual: float
    action_relation_residual: float
    pure_power_residual: float | None = None
    action: float
    positivity: bool
    decay_bound: float = Field(..., description="sup over r >= 1 of r^((N-p)/p)|u| / ||grad u||_p")
    decay_variation: float
    tail_valid: bool
    tail_fraction: float = Field(..., description="Largest tail share among the integrals used")
    pohozaev_passed: bool
    nehari_passed: bool
    action_relation_passed: bool
    decay_passed: bool

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return (
            self.pohozaev_passed
            and self.nehari_passed
            and self.action_relation_passed
            and self.positivity
            and self.decay_passed
        )


class CoefficientRow(BaseModel):
    """One term of the pure-power nonexistence identity."""

    j: int
    a_j: float
    c_j: float


class NonexistenceReport(BaseModel):
    """Signs of c_j = (N-2j)/(2j) - N/alpha for the Born-Infeld chain."""

    alpha: float
    dim: int
    k: int
    beta: float
    rows: list[CoefficientRow]
    certified: bool


class PathReport(BaseModel):
    """I_lambda along the dilation path t -> z(./t)."""

    lam: float
    lam0: float
    t: list[float]
    values: list[float]
    level: float
    t_at_max: float
    endpoint_value: float
    tau: float | None

    @computed_field  # type: ignore[prop-decorator]
    @property
    def endpoint_negative(self) -> bool:
        return self.endpoint_value < 0


class SphereRow(BaseModel):
    """Smallest I_lambda over rescaled seeds of norm rho."""

    rho: float
    value: float


class MountainPassReport(BaseModel):
    """Upper bound for the mountain-pass level and the small-sphere check."""

    lam: float
    tau: float
    level_upper_bound: float
    path_s: list[float]
    path_values: list[float]
    sphere: list[SphereRow]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def sphere_positive(self) -> bool:
        return all(row.value > 0 for row in self.sphere)


class CandidateRecord(BaseModel):
    """One bisected bracket and its certification result."""

    u0: float
    action: float
    outcome: str
    certified: bool
    bracket: tuple[float, float]


class SweepRow(BaseModel):
    """One sweep cell."""

    alpha: float | None
    k: int | None
    beta: float
    dim: int
    resolution: int
    outcome: Literal["certified", "uncertified", "nonexistent", "error"]
    u0: float | None = None
    action: float | None = None
    pohozaev_residual: float | None = None
    nehari_residual: float | None = None
    action_relation_residual: float | None = None
    exit_code: int
    message: str = ""
