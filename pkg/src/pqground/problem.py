"""Turn a validated SolveConfig into operator and nonlinearity objects."""

import itertools
from dataclasses import dataclass

import structlog

from pqground.errors import ConfigError, InvalidNonlinearityError
from pqground.nonlinearity import (
    Decomposition,
    MassRegime,
    NonlinearitySpec,
    PiecewisePowerSum,
    PositiveMass,
    ZeroMass,
    cubic_minus_linear,
    decompose,
    locate_zeta,
    min_power,
    polynomial,
    primitive_of,
    pure_power,
    truncate,
    two_power,
)
from pqground.operators import (
    BIChainOperator,
    CriticalExponents,
    OperatorSpec,
    PQOperator,
    critical_exponents,
)
from pqground.schemas import NonlinearityConfig, OperatorConfig, SolveConfig


logger = structlog.get_logger()

# Mass parameters of -s + s^3 when the config leaves them out.
CLASSICAL_MASS = (2.0, 1.0)


@dataclass(frozen=True)
class Problem:
    """A fully resolved problem: operator, truncated nonlinearity and its split."""

    name: str
    op: OperatorSpec
    spec: NonlinearitySpec
    decomposition: Decomposition
    exponents: CriticalExponents


def build_operator(cfg: OperatorConfig) -> OperatorSpec:
    if cfg.kind == "bi":
        return BIChainOperator(cfg.k, cfg.beta, cfg.dim, normalized=cfg.normalized)
    return PQOperator(cfg.p, cfg.q, cfg.beta, cfg.dim, degenerate=cfg.degenerate)


def _representation(cfg: NonlinearityConfig) -> tuple[PiecewisePowerSum, float | None]:
    match cfg.kind:
        case "pure_power":
            assert cfg.alpha is not None
            return pure_power(cfg.alpha), cfg.alpha
        case "cubic_minus_linear":
            return cubic_minus_linear(), None
        case "min_power":
            assert cfg.power is not None and cfg.qstar is not None
            return min_power(cfg.power, cfg.qstar), None
        case "two_power":
            assert cfg.power1 is not None and cfg.power2 is not None
            return two_power(cfg.power1, cfg.power2, cfg.scale), None
        case "polynomial":
            assert cfg.coefficients is not None
            return polynomial(cfg.coefficients), None


def _regime(cfg: NonlinearityConfig, crit: CriticalExponents) -> MassRegime:
    if cfg.regime == "zero":
        return ZeroMass()
    ell, m = CLASSICAL_MASS
    regime = PositiveMass(cfg.ell if cfg.ell is not None else ell, cfg.m if cfg.m is not None else m)
    if not crit.p <= regime.ell < crit.p_star:
        raise InvalidNonlinearityError(
            f"Mass exponent l = {regime.ell} must satisfy p = {crit.p} <= l < p* = {crit.p_star:.6g}",
            details={"ell": regime.ell, "p": crit.p, "p_star": crit.p_star},
        )
    return regime


def build_nonlinearity(cfg: NonlinearityConfig, crit: CriticalExponents) -> NonlinearitySpec:
    """Builtin nonlinearity with zeta located when omitted, then truncated.

    Raises:
        InvalidNonlinearityError: If G(zeta) <= 0, or a positive-mass exponent
            l lies outside [p, p*).
    """
    rep, alpha = _representation(cfg)
    zeta = cfg.zeta if cfg.zeta is not None else locate_zeta(rep, rep=rep)
    spec = NonlinearitySpec.from_representation(
        rep,
        zeta=zeta,
        regime=_regime(cfg, crit),
        p_star=crit.p_star,
        q_star=crit.q_star,
        pure_power_alpha=alpha,
        name=cfg.kind,
    )
    potential = primitive_of(spec)(zeta)
    if not potential > 0:
        raise InvalidNonlinearityError(
            f"G(zeta) = {potential:.6g} is not positive at zeta = {zeta}",
            details={"zeta": zeta},
        )
    return truncate(spec)


def build_problem(config: SolveConfig) -> Problem:
    """Resolve a configuration into a Problem.

    Raises:
        InvalidOperatorError: For inconsistent operator parameters.
        InvalidNonlinearityError: For an unusable nonlinearity.
    """
    op = build_operator(config.operator)
    crit = critical_exponents(op, config.operator.qstar)
    spec = build_nonlinearity(config.nonlinearity, crit)
    logger.info(
        "problem_built",
        name=config.name,
        operator=op.kind,
        nonlinearity=spec.name,
        zeta=spec.zeta,
        s0=spec.s0,
        p_star=crit.p_star,
        q_star=crit.q_star,
    )
    return Problem(config.name, op, spec, decompose(spec), crit)


def _cell_qstar(base: float | None, alpha: float | None, k: int, p_star: float) -> float:
    candidates = [2.0 * k + 1.0, p_star + 1.0]
    if base is not None:
        candidates.append(base)
    if alpha is not None:
        candidates.append(alpha + 1.0)
    return max(candidates)


def expand_sweep(config: SolveConfig) -> list[SolveConfig]:
    """Cartesian product of the sweep axes, one SolveConfig per cell.

    Born-Infeld cells get q* = max(base q*, alpha + 1, 2k + 1, p* + 1) so every
    chain order stays admissible.

    Raises:
        ConfigError: If the config has no sweep section, or sweeps alpha for a
            nonlinearity that is not a pure power.
    """
    sweep = config.sweep
    if sweep is None:
        raise ConfigError("The configuration has no sweep section", details={"location": "sweep"})
    op, nl = config.operator, config.nonlinearity
    if sweep.alpha is not None and nl.kind != "pure_power":
        raise ConfigError(
            "alpha can only be swept for pure_power nonlinearities",
            details={"location": "sweep.alpha"},
        )
    axes = itertools.product(
        sweep.alpha if sweep.alpha is not None else [nl.alpha],
        sweep.k if sweep.k is not None else [op.k],
        sweep.beta if sweep.beta is not None else [op.beta],
        sweep.dim if sweep.dim is not None else [op.dim],
        sweep.resolution if sweep.resolution is not None else [config.shooting.resolution],
    )
    cells: list[SolveConfig] = []
    for alpha, k, beta, dim, resolution in axes:
        op_update: dict[str, object] = {"k": k, "beta": beta, "dim": dim}
        if op.kind == "bi":
            p_star = 2.0 * dim / (dim - 2.0)
            op_update["qstar"] = _cell_qstar(op.qstar, alpha, k, p_star)
        cells.append(
            config.model_copy(
                update={
                    "name": f"{config.name}-a{alpha}-k{k}-b{beta}-N{dim}-M{resolution}",
                    "operator": op.model_copy(update=op_update),
                    "nonlinearity": nl.model_copy(update={"alpha": alpha}),
                    "shooting": config.shooting.model_copy(update={"resolution": resolution}),
                    "sweep": None,
                },
                deep=True,
            )
        )
    return cells
