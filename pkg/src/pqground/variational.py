"""Action functionals, dilation paths and mountain-pass diagnostics.

For an operator with flux terms (c_e, e) and A_e = ||grad u||_e^e:

    I(u)         = sum_e (c_e / e) A_e - int G(u)
    I_lambda(u)  = sum_e (c_e / e) A_e + int G2(u) - lambda int G1(u)

Along the dilation z(./t) every gradient term scales like t^(N-e) and every
potential term like t^N, so paths are evaluated from the norms of z alone.
"""

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import structlog

from pqground import constants as c
from pqground.errors import DomainError, SeedRejectedError
from pqground.nonlinearity import Decomposition, NonlinearitySpec, PositiveMass, primitive_of
from pqground.operators import OperatorSpec, exponents
from pqground.radial import Profile, RadialGrid, grad_power, integral_of, lebesgue_norm
from pqground.schemas import MountainPassReport, PathReport, SphereRow


logger = structlog.get_logger()

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class FunctionalParams:
    """lambda, the split g = g1 - g2 and the operator of I_lambda."""

    lam: float
    decomposition: Decomposition
    op: OperatorSpec
    spec: NonlinearitySpec
    lam0: float | None = None

    def __post_init__(self) -> None:
        if not 0 < self.lam <= 1:
            raise DomainError(f"lambda must lie in (0, 1], got {self.lam}")
        if self.lam0 is not None and not 0 < self.lam0 <= self.lam:
            raise DomainError(f"Need 0 < lambda0 <= lambda, got {self.lam0} and {self.lam}")

    def at(self, lam: float) -> "FunctionalParams":
        return FunctionalParams(lam, self.decomposition, self.op, self.spec, self.lam0)


def gradient_energy(profile: Profile, op: OperatorSpec) -> float:
    """sum_e (c_e / e) ||grad u||_e^e, tails included."""
    return sum(coef / e * grad_power(profile, e).total for coef, e in op.terms)


def action(profile: Profile, spec: NonlinearitySpec, op: OperatorSpec) -> float:
    """I(u) = sum_e (c_e / e) A_e - int G(u)."""
    return gradient_energy(profile, op) - integral_of(profile, primitive_of(spec))


def action_lambda(profile: Profile, params: FunctionalParams) -> float:
    """I_lambda(u) = sum_e (c_e / e) A_e + int G2(u) - lambda int G1(u)."""
    parts = params.decomposition
    potential = integral_of(profile, parts.G2) - params.lam * integral_of(profile, parts.G1)
    return gradient_energy(profile, params.op) + potential


# Seeds


def _plateau(height: float, radius: float, dim: int, resolution: int) -> Profile:
    outer = 6.0 * (radius + 1.0)
    n_in = max(resolution // 4, 16)
    n_ramp = max(resolution // 4, 16)
    n_out = max(resolution - n_in - n_ramp, 16)
    nodes = np.concatenate(
        (
            np.linspace(0.0, radius, n_in + 1),
            np.linspace(radius, radius + 1.0, n_ramp + 1)[1:],
            np.linspace(radius + 1.0, outer, n_out + 1)[1:],
        )
    )
    grid = RadialGrid(nodes, dim)

    def u_fn(r: FloatArray) -> FloatArray:
        return np.asarray(height * np.clip(radius + 1.0 - r, 0.0, 1.0), dtype=np.float64)

    def du_fn(r: FloatArray) -> FloatArray:
        ramp = (r > radius) & (r < radius + 1.0)
        return np.where(ramp, -height, 0.0)

    return Profile.from_functions(grid, u_fn, du_fn, meta={"seed": "plateau", "radius": radius})


def plateau_seed(
    spec: NonlinearitySpec,
    op: OperatorSpec,
    radius: float = 1.0,
    resolution: int = 1024,
) -> Profile:
    """Plateau z = zeta on [0, R0] with a linear cutoff on [R0, R0 + 1].

    R0 doubles until int G(z) > 0.

    Raises:
        SeedRejectedError: If int G(z) stays non-positive after the allowed doublings.
    """
    big_g = primitive_of(spec)
    for _ in range(c.SEED_MAX_DOUBLINGS + 1):
        seed = _plateau(spec.zeta, radius, op.dim, resolution).with_exponents(exponents(op))
        value = integral_of(seed, big_g)
        if value > 0:
            logger.debug("seed_accepted", radius=radius, potential=value)
            return seed
        radius *= 2.0
    raise SeedRejectedError(
        f"int G(z) <= 0 for every plateau radius up to {radius / 2.0}",
        details={"radius": radius / 2.0},
    )


@dataclass(frozen=True)
class SeedNorms:
    """A_e for every flux term of z, int G1(z) and int G2(z)."""

    grad: tuple[tuple[float, float, float], ...]
    g1: float
    g2: float
    dim: int

    def value(self, t: float, lam: float) -> float:
        """I_lambda(z(./t))."""
        energy = sum(coef * t ** (self.dim - e) / e * a for coef, e, a in self.grad)
        return energy + t**self.dim * (self.g2 - lam * self.g1)

    def derivative(self, t: float, lam: float) -> float:
        """d/dt I_lambda(z(./t))."""
        n = self.dim
        energy = sum(coef * (n - e) * t ** (n - e - 1.0) / e * a for coef, e, a in self.grad)
        return energy + n * t ** (n - 1) * (self.g2 - lam * self.g1)


def _require_seed(z: Profile, spec: NonlinearitySpec) -> None:
    if not np.any(z.u != 0.0):
        raise SeedRejectedError("Seed profile is identically zero")
    potential = integral_of(z, primitive_of(spec))
    if not potential > 0:
        raise SeedRejectedError(
            f"Seed has int G(z) = {potential:.3e} <= 0", details={"potential": potential}
        )


def seed_norms(z: Profile, params: FunctionalParams) -> SeedNorms:
    """Norms of z that determine I_lambda along its dilations.

    Raises:
        SeedRejectedError: If z = 0 or int G(z) <= 0.
    """
    _require_seed(z, params.spec)
    parts = params.decomposition
    grad = tuple((coef, e, grad_power(z, e).total) for coef, e in params.op.terms)
    return SeedNorms(grad, integral_of(z, parts.G1), integral_of(z, parts.G2), z.grid.dim)


def compute_lambda0(z: Profile, decomposition: Decomposition, spec: NonlinearitySpec) -> float:
    """lambda0 = rho + 0.1 (1 - rho) with rho = int G2(z) / int G1(z).

    Any lambda >= lambda0 makes lambda int G1(z) - int G2(z) positive.
    """
    _require_seed(z, spec)
    g1 = integral_of(z, decomposition.G1)
    g2 = integral_of(z, decomposition.G2)
    if not g1 > 0:
        raise SeedRejectedError("Seed has int G1(z) = 0")
    rho = g2 / g1
    return rho + c.LAMBDA0_MARGIN * (1.0 - rho)


def escape_time(norms: SeedNorms, lam: float, max_doublings: int = 64) -> float | None:
    """Smallest power of two tau >= 1 with I_lambda(z(./tau)) < 0, if any."""
    tau = 1.0
    for _ in range(max_doublings):
        if norms.value(tau, lam) < 0:
            return tau
        tau *= 2.0
    return None


def dilation_curve(
    z: Profile, params: FunctionalParams, t_grid: FloatArray | None = None
) -> PathReport:
    """I_lambda(z(./t)) over t_grid, from the norms of z.

    The default grid runs over (0, tau] in 200 steps, tau being the
    escape time of the path.

    Raises:
        SeedRejectedError: If z = 0 or int G(z) <= 0.
    """
    norms = seed_norms(z, params)
    tau = escape_time(norms, params.lam)
    if t_grid is None:
        end = tau if tau is not None else 10.0
        t_grid = np.linspace(end / 200.0, end, 200)
    t = np.asarray(t_grid, dtype=np.float64)
    if np.any(t <= 0):
        raise DomainError("Dilation factors must be positive")
    values = np.array([norms.value(float(ti), params.lam) for ti in t])
    best = int(np.argmax(values))
    lam0 = params.lam0 if params.lam0 is not None else compute_lambda0(z, params.decomposition, params.spec)
    return PathReport(
        lam=params.lam,
        lam0=lam0,
        t=t.tolist(),
        values=values.tolist(),
        level=float(values[best]),
        t_at_max=float(t[best]),
        endpoint_value=float(values[-1]),
        tau=tau,
    )


def dilation_derivative(z: Profile, params: FunctionalParams, t: float) -> float:
    """Closed-form d/dt I_lambda(z(./t))."""
    return seed_norms(z, params).derivative(t, params.lam)


def _scaled_value(z: Profile, params: FunctionalParams, norms: SeedNorms, amp: float, t: float) -> float:
    """I_lambda(amp * z(./t)); the potential part needs fresh quadrature in amp."""
    if amp == 0.0:
        return 0.0
    n = norms.dim
    energy = sum(coef * amp**e * t ** (n - e) / e * a for coef, e, a in norms.grad)
    if amp == 1.0:
        g1, g2 = norms.g1, norms.g2
    else:
        scaled = z.scaled(amp)
        g1 = integral_of(scaled, params.decomposition.G1)
        g2 = integral_of(scaled, params.decomposition.G2)
    return energy + t**n * (g2 - params.lam * g1)


def _sphere_norm(z: Profile, params: FunctionalParams, norms: SeedNorms, t: float) -> float:
    """||z(./t)||: sum_e ||grad||_e plus ||.||_l in the positive-mass regime."""
    n = norms.dim
    total = sum((t ** (n - e) * a) ** (1.0 / e) for _, e, a in norms.grad)
    regime = params.spec.regime
    if isinstance(regime, PositiveMass):
        total += t ** (n / regime.ell) * lebesgue_norm(z, regime.ell)
    return total


def mountain_pass_level(
    z: Profile,
    params: FunctionalParams,
    s_grid: FloatArray | None = None,
    rhos: tuple[float, ...] = c.SPHERE_RHOS,
    tau: float | None = None,
) -> MountainPassReport:
    """Upper bound for the mountain-pass level of I_lambda and a small-sphere check.

    The path is 2s z(./(tau/2)) on [0, 1/2] and z(./(s tau)) on [1/2, 1];
    its maximum bounds the level from above. The check reports, for each rho,
    the smallest I_lambda over amplitude-rescaled dilations of z with norm rho.

    Args:
        z: Seed profile with int G(z) > 0.
        params: Functional parameters.
        s_grid: Path parameters in [0, 1]; 101 uniform points by default.
        rhos: Sphere radii.
        tau: Escape time; computed from z and lambda when omitted.

    Returns:
        The path samples, the level bound and the sphere rows.

    Raises:
        SeedRejectedError: If z is not an admissible seed for this lambda.
    """
    norms = seed_norms(z, params)
    if tau is None:
        tau = escape_time(norms, params.lam)
    if tau is None or not norms.value(tau, params.lam) < 0:
        raise SeedRejectedError(
            f"No dilation of the seed has negative I_lambda at lambda = {params.lam}",
            details={"lam": params.lam},
        )
    s = np.linspace(0.0, 1.0, 101) if s_grid is None else np.asarray(s_grid, dtype=np.float64)
    if np.any((s < 0) | (s > 1)):
        raise DomainError("Path parameters must lie in [0, 1]")

    values = []
    for si in s:
        if si <= 0.5:
            values.append(_scaled_value(z, params, norms, 2.0 * float(si), tau / 2.0))
        else:
            values.append(norms.value(float(si) * tau, params.lam))

    sphere: list[SphereRow] = []
    for rho in rhos:
        best = math.inf
        for t in c.SPHERE_DILATIONS:
            amp = rho / _sphere_norm(z, params, norms, t)
            best = min(best, _scaled_value(z, params, norms, amp, t))
        sphere.append(SphereRow(rho=rho, value=best))

    report = MountainPassReport(
        lam=params.lam,
        tau=tau,
        level_upper_bound=float(max(values)),
        path_s=s.tolist(),
        path_values=[float(v) for v in values],
        sphere=sphere,
    )
    logger.info(
        "mountain_pass_estimated",
        lam=params.lam,
        level=report.level_upper_bound,
        sphere_positive=report.sphere_positive,
    )
    return report
