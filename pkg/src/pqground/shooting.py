"""Radial shooting for positive ground states.

With F(r) = r^(N-1) Phi(u'(r)) the radial equation becomes the first-order
system

    u' = Phi^{-1}(F / r^(N-1)),    F' = -r^(N-1) g(u),

started at r = delta from the series Phi(u') = -g(u0) r / N. Each trajectory
is classified by the first terminal event: u reaching 0 (crossing), u'
reaching 0 from below (rebound), u dropping below the decay threshold, or
the end of the interval. Zero-mass shots reaching R_max are matched to
u ~ u_inf + A r^(-kappa), kappa = (N - p)/(p - 1), and classified by the sign of
the extrapolated u_inf. Bisection on u(0) between a crossing shot and a
non-crossing shot then closes in on the decaying separatrix.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import cached_property
from typing import ClassVar

import numpy as np
import numpy.typing as npt
import structlog
from scipy import integrate, optimize
from scipy.integrate import OdeSolution

from pqground import constants as c
from pqground.certificates import certify
from pqground.errors import DomainError, EvaluationError, NoBracketError
from pqground.nonlinearity import NonlinearitySpec, PositiveMass, primitive_of
from pqground.operators import OperatorSpec, exponents, invert_flux, lowest_exponent
from pqground.radial import Profile, RadialGrid, TailModel
from pqground.schemas import (
    CandidateRecord,
    CertificateReport,
    ScanRow,
    ShootingConfig,
    ToleranceConfig,
)
from pqground.variational import action


logger = structlog.get_logger()

FloatArray = npt.NDArray[np.float64]
ScanSink = Callable[[ScanRow], None]


# Outcomes


@dataclass(frozen=True)
class Crossing:
    """u reached 0 at `radius` with u' < 0.

    An extrapolated crossing lies beyond R_max: the matched algebraic tail of
    a zero-mass shot levels off below zero.
    """

    kind: ClassVar[str] = "crossing"
    radius: float
    extrapolated: bool = False


@dataclass(frozen=True)
class Rebound:
    """u' returned to 0 at `radius` while u > 0."""

    kind: ClassVar[str] = "rebound"
    radius: float


@dataclass(frozen=True)
class Decay:
    """u fell below the decay thresholds, or its zero-mass tail extrapolates to 0."""

    kind: ClassVar[str] = "decay"
    radius: float
    algebraic_exponent: float
    exponential_rate: float
    terminal_u: float
    terminal_du: float


@dataclass(frozen=True)
class Inconclusive:
    """No classification: stiffness, an equilibrium start or no decay by R_max."""

    kind: ClassVar[str] = "inconclusive"
    reason: str
    radius: float


ShotOutcome = Crossing | Rebound | Decay | Inconclusive


# Trajectories


class _Trajectory:
    """Dense solution of one shot: startup series on [0, delta], RK segments after."""

    def __init__(
        self,
        u0: float,
        g0: float,
        delta: float,
        op: OperatorSpec,
        segments: list[OdeSolution],
        r_end: float,
        flat_end: bool = False,
        tail_exponent: float | None = None,
    ) -> None:
        self.u0 = u0
        self.g0 = g0
        self.delta = delta
        self.op = op
        self.dim = op.dim
        self.segments = segments
        self.r_end = r_end
        self._x, self._w = np.polynomial.legendre.leggauss(8)
        end_u, end_du = self._interior(np.array([r_end]))
        end_slope = 0.0 if flat_end else float(end_du[0])
        self.tail = TailModel.fit(r_end, float(end_u[0]), end_slope, exponent=tail_exponent)

    def _series(self, r: FloatArray) -> tuple[FloatArray, FloatArray]:
        du = invert_flux(-self.g0 * r / self.dim, self.op)
        pts = 0.5 * r[:, None] * (self._x[None, :] + 1.0)
        slopes = invert_flux(-self.g0 * pts.ravel() / self.dim, self.op).reshape(pts.shape)
        u = self.u0 + 0.5 * r * (slopes @ self._w)
        return u, du

    def _interior(self, r: FloatArray) -> tuple[FloatArray, FloatArray]:
        u = np.empty_like(r)
        du = np.empty_like(r)
        early = (r < self.delta) | (not self.segments)
        if early.any():
            u[early], du[early] = self._series(r[early])
        rest = ~early
        if rest.any():
            rr = np.minimum(r[rest], self.r_end)
            y = self._dense(rr)
            u[rest] = y[0]
            du[rest] = invert_flux(y[1] / rr ** (self.dim - 1), self.op)
        return u, du

    def _dense(self, r: FloatArray) -> FloatArray:
        out = np.empty((2, r.size))
        for i, seg in enumerate(self.segments):
            last = i == len(self.segments) - 1
            mask = (r >= seg.t_min) & ((r <= seg.t_max) if last else (r < seg.t_max))
            if i == 0:
                mask |= r < seg.t_min
            if mask.any():
                out[:, mask] = seg(r[mask])
        return out

    def flux(self, r: FloatArray) -> FloatArray:
        """F(r) along the trajectory (series value below delta)."""
        early = (r < self.delta) | (not self.segments)
        out = np.empty_like(r)
        out[early] = -self.g0 * r[early] ** self.dim / self.dim
        if (~early).any():
            out[~early] = self._dense(np.minimum(r[~early], self.r_end))[1]
        return out

    def u_fn(self, r: FloatArray) -> FloatArray:
        u, _ = self.evaluate(r)
        return u

    def du_fn(self, r: FloatArray) -> FloatArray:
        _, du = self.evaluate(r)
        return du

    def evaluate(self, r: FloatArray) -> tuple[FloatArray, FloatArray]:
        r = np.asarray(r, dtype=np.float64)
        beyond = r > self.r_end
        if not beyond.any():
            return self._interior(r)
        u = np.empty_like(r)
        du = np.empty_like(r)
        u[~beyond], du[~beyond] = self._interior(r[~beyond])
        u[beyond], du[beyond] = self.tail.extend(r[beyond])
        return u, du


@dataclass(frozen=True)
class Shot:
    """One integrated trajectory and its classification."""

    u0: float
    outcome: ShotOutcome
    trajectory: _Trajectory = field(repr=False)
    cfg: ShootingConfig = field(repr=False)

    @cached_property
    def profile(self) -> Profile:
        """The trajectory sampled on a graded grid over [0, r_end]."""
        traj = self.trajectory
        grid = RadialGrid.build(
            traj.dim,
            r_max=traj.r_end,
            resolution=self.cfg.resolution,
            geometric_fraction=self.cfg.geometric_fraction,
            grading_ratio=self.cfg.grading_ratio,
            r_min=traj.delta,
        )
        u, du = traj.evaluate(grid.nodes)
        u_q, du_q = traj.evaluate(grid.points)
        if isinstance(self.outcome, Crossing) and not self.outcome.extrapolated:
            u[-1] = 0.0
        elif isinstance(self.outcome, Rebound):
            du[-1] = 0.0
        return Profile(
            grid=grid,
            u=u,
            du=du,
            u_q=u_q,
            du_q=du_q,
            exponents=exponents(traj.op),
            meta={"u0": self.u0, "outcome": self.outcome.kind},
            source=(traj.u_fn, traj.du_fn),
        )

    @property
    def crossed(self) -> bool:
        return isinstance(self.outcome, Crossing)


def startup_offset(cfg: ShootingConfig) -> float:
    """delta = 1e-6 * max(1, R_max / M)."""
    return c.STARTUP_OFFSET * max(1.0, cfg.r_max / cfg.resolution)


def _tail_fit(traj: _Trajectory, r_end: float) -> tuple[float, float, bool]:
    """Fitted algebraic exponent and exponential rate over the last decade."""
    r = np.geomspace(max(r_end / 10.0, traj.delta), r_end, 64)
    u, _ = traj.evaluate(r)
    decreasing = bool(np.all(np.diff(u) <= 0))
    if np.any(u <= 0):
        return 0.0, 0.0, decreasing
    log_u = np.log(u)
    algebraic = -float(np.polyfit(np.log(r), log_u, 1)[0])
    rate = -float(np.polyfit(r, log_u, 1)[0])
    return algebraic, rate, decreasing


def zero_mass_exponent(op: OperatorSpec) -> float:
    """kappa = (N - p) / (p - 1) for the lowest exponent p of the operator."""
    p = lowest_exponent(op)
    return (op.dim - p) / (p - 1.0)


def algebraic_limit(radius: float, value: float, slope: float, kappa: float) -> float:
    """Extrapolated u(inf) of u ~ u_inf + A r^(-kappa) matched to (u, u') at `radius`."""
    return value + radius * slope / kappa


def _match_algebraic_tail(traj: _Trajectory, cfg: ShootingConfig, kappa: float) -> ShotOutcome:
    """Classify a zero-mass shot that reached R_max without an event.

    A limit within decay_u * u0 of zero is Decay when the fitted exponent over
    the last decade reaches tail_exponent_fraction * kappa. Otherwise the sign
    of the limit decides: below zero the shot crosses beyond R_max, above
    zero it levels off.
    """
    r_end = traj.r_end
    u_end, du_end = (float(v[0]) for v in traj.evaluate(np.array([r_end])))
    limit = algebraic_limit(r_end, u_end, du_end, kappa)
    if abs(limit) <= cfg.decay_u * traj.u0 and u_end > 0 and du_end < 0:
        algebraic, rate, decreasing = _tail_fit(traj, r_end)
        if decreasing and algebraic >= cfg.tail_exponent_fraction * kappa:
            return Decay(r_end, algebraic, rate, u_end, du_end)
    if limit < 0:
        # Zero of the matched tail.
        ratio = (u_end - limit) / -limit
        return Crossing(r_end * ratio ** (1.0 / kappa), extrapolated=True)
    return Inconclusive(f"levels off at {limit:.3e} by R_max", r_end)


def integrate_shot(
    u0: float, spec: NonlinearitySpec, op: OperatorSpec, cfg: ShootingConfig
) -> Shot:
    """Integrate one trajectory from u(0) = u0 and classify it.

    Args:
        u0: Initial value, positive.
        spec: Truncated nonlinearity.
        op: Operator.
        cfg: Shooting configuration.

    Returns:
        The classified Shot; its `profile` samples the trajectory.

    Raises:
        DomainError: If u0 is not positive and finite.
        EvaluationError: If g is not finite along the trajectory.
    """
    if not (u0 > 0 and math.isfinite(u0)):
        raise DomainError(f"u0 must be positive and finite, got {u0}")
    dim = op.dim
    g = spec.g
    g0 = float(g(u0))
    if not math.isfinite(g0):
        raise EvaluationError(f"g({u0}) is not finite", s=u0)
    delta = startup_offset(cfg)

    zero_mass = not isinstance(spec.regime, PositiveMass)
    kappa = zero_mass_exponent(op)

    def finish(outcome: ShotOutcome, segments: list[OdeSolution], r_end: float) -> Shot:
        flat = isinstance(outcome, Rebound)
        exponent = kappa if zero_mass and isinstance(outcome, Decay) else None
        traj = _Trajectory(u0, g0, delta, op, segments, r_end, flat_end=flat, tail_exponent=exponent)
        logger.debug("shot_classified", u0=u0, outcome=outcome.kind, radius=outcome.radius)
        return Shot(u0=u0, outcome=outcome, trajectory=traj, cfg=cfg)

    if g0 == 0.0:
        return finish(Inconclusive("equilibrium", cfg.r_max), [], cfg.r_max)
    if g0 < 0.0:
        return finish(Rebound(delta), [], delta)

    seed = _Trajectory(u0, g0, delta, op, [], delta)
    u_start = float(seed.evaluate(np.array([delta]))[0][0])
    f_start = -g0 * delta**dim / dim

    def rhs(r: float, y: FloatArray) -> list[float]:
        u, flux_value = float(y[0]), float(y[1])
        gu = g(u)
        if not math.isfinite(gu):
            raise EvaluationError(f"g({u}) is not finite", s=u)
        radial = r ** (dim - 1)
        return [invert_flux(flux_value / radial, op), -radial * gu]

    def crossing(_r: float, y: FloatArray) -> float:
        return float(y[0])

    def turning(_r: float, y: FloatArray) -> float:
        return float(y[1])

    crossing.terminal = True  # type: ignore[attr-defined]
    crossing.direction = -1  # type: ignore[attr-defined]
    turning.terminal = True  # type: ignore[attr-defined]
    turning.direction = 1  # type: ignore[attr-defined]

    threshold = cfg.decay_u * u0

    def decayed(_r: float, y: FloatArray) -> float:
        return float(y[0]) - threshold

    decayed.terminal = True  # type: ignore[attr-defined]
    decayed.direction = -1  # type: ignore[attr-defined]

    watch_decay = not zero_mass
    atol = [cfg.atol * u0, cfg.atol * u0 * delta ** (dim - 1)]
    segments: list[OdeSolution] = []
    r0, y0 = delta, np.array([u_start, f_start])

    while True:
        events = [crossing, turning] + ([decayed] if watch_decay else [])
        sol = integrate.solve_ivp(
            rhs,
            (r0, cfg.r_max),
            y0,
            method="DOP853",
            rtol=cfg.rtol,
            atol=atol,
            events=events,
            dense_output=True,
            max_step=cfg.max_step,
            first_step=min(delta, cfg.max_step),
        )
        if sol.sol is not None:
            segments.append(sol.sol)
        r_end = float(sol.t[-1])

        if sol.status == -1:
            if not segments:
                return finish(Inconclusive(f"stiffness: {sol.message}", r_end), [], delta)
            return finish(Inconclusive(f"stiffness: {sol.message}", r_end), segments, r_end)

        if sol.status == 1:
            if sol.t_events[0].size:
                r_hit = float(sol.t_events[0][0])
                return finish(Crossing(r_hit), segments, r_hit)
            if sol.t_events[1].size:
                r_hit = float(sol.t_events[1][0])
                return finish(Rebound(r_hit), segments, r_hit)
            r_hit = float(sol.t_events[2][0])
            y_hit = sol.y_events[2][0]
            slope = invert_flux(float(y_hit[1]) / r_hit ** (dim - 1), op)
            traj = _Trajectory(u0, g0, delta, op, segments, r_hit)
            algebraic, rate, decreasing = _tail_fit(traj, r_hit)
            if abs(slope) < cfg.decay_du * u0 and decreasing:
                return finish(
                    Decay(r_hit, algebraic, rate, float(y_hit[0]), slope), segments, r_hit
                )
            # Still falling steeply: keep integrating without the decay watch.
            watch_decay = False
            r0, y0 = r_hit, np.asarray(y_hit, dtype=np.float64)
            continue

        if zero_mass and kappa > 0 and segments:
            traj = _Trajectory(u0, g0, delta, op, segments, r_end)
            return finish(_match_algebraic_tail(traj, cfg, kappa), segments, r_end)
        return finish(Inconclusive("no decay by R_max", r_end), segments, r_end)


def flux_conservation_residual(
    shot: Shot, spec: NonlinearitySpec, checkpoints: int = c.FLUX_CHECKPOINTS
) -> float:
    """max over checkpoints of |F(r) + int_0^r s^(N-1) g(u(s)) ds| / (1 + |F(r)|)."""
    traj = shot.trajectory
    if not traj.segments:
        return 0.0
    dim = traj.dim
    radii = np.linspace(traj.delta, traj.r_end, checkpoints + 1)[1:]
    flux_values = traj.flux(radii)

    def integrand(s: float) -> float:
        u = float(traj.evaluate(np.array([s]))[0][0])
        return s ** (dim - 1) * float(spec.g(u))

    worst = 0.0
    lower, accumulated = 0.0, 0.0
    for r, f in zip(radii, flux_values, strict=True):
        accumulated += integrate.quad(integrand, lower, float(r), epsabs=0.0, epsrel=1e-12, limit=400)[0]
        lower = float(r)
        worst = max(worst, abs(f + accumulated) / (1.0 + abs(f)))
    return worst


# Scan and bisection


def positivity_threshold(spec: NonlinearitySpec) -> float:
    """Smallest s with G(s) > 0, searched on a geometric grid below zeta."""
    big_g = primitive_of(spec)
    grid = np.geomspace(1e-6, spec.zeta, 400)
    values = np.asarray(big_g(grid), dtype=np.float64)
    positive = np.flatnonzero(values > 0)
    if positive.size == 0:
        return spec.zeta
    i = int(positive[0])
    if i == 0:
        return float(grid[0])
    return float(optimize.brentq(big_g, grid[i - 1], grid[i], xtol=1e-14, rtol=1e-12))


def scan_shots(
    spec: NonlinearitySpec,
    op: OperatorSpec,
    cfg: ShootingConfig,
    sink: ScanSink | None = None,
) -> list[Shot]:
    """Shoot from log-spaced u0 in [scan_lo, scan_hi].

    For positive-mass nonlinearities the lower end is raised to the
    smallest s with G(s) > 0.
    """
    lo = cfg.scan_lo
    if isinstance(spec.regime, PositiveMass):
        lo = max(lo, positivity_threshold(spec))
    shots: list[Shot] = []
    for u0 in np.geomspace(lo, cfg.scan_hi, cfg.scan_count):
        shot = integrate_shot(float(u0), spec, op, cfg)
        shots.append(shot)
        if sink is not None:
            sink(ScanRow(u0=shot.u0, outcome=shot.outcome.kind, radius=shot.outcome.radius))
    return shots


def find_brackets(shots: list[Shot]) -> list[tuple[Shot, Shot]]:
    """Adjacent (non-crossing, crossing) pairs of a scan, in scan order."""
    brackets: list[tuple[Shot, Shot]] = []
    for a, b in zip(shots[:-1], shots[1:], strict=True):
        if a.crossed != b.crossed:
            low, high = (b, a) if a.crossed else (a, b)
            brackets.append((low, high))
    return brackets


def bisect_bracket(
    low: Shot, high: Shot, spec: NonlinearitySpec, op: OperatorSpec, cfg: ShootingConfig
) -> tuple[Shot, Shot]:
    """Bisect on u0 until the bracket is narrower than bisection_rtol.

    `low` never crosses and `high` crosses. Stiff midpoints are retried once
    with a 100x tighter rtol before being counted as non-crossing. A Decay
    midpoint ends the bisection as the new `low`.
    """
    for iteration in range(cfg.max_bisections):
        width = abs(high.u0 - low.u0)
        if width <= cfg.bisection_rtol * max(low.u0, high.u0):
            break
        mid = 0.5 * (low.u0 + high.u0)
        shot = integrate_shot(mid, spec, op, cfg)
        if isinstance(shot.outcome, Inconclusive) and shot.outcome.reason.startswith("stiffness"):
            refined = cfg.model_copy(update={"rtol": cfg.rtol / 100.0})
            shot = integrate_shot(mid, spec, op, refined)
            if isinstance(shot.outcome, Inconclusive) and shot.outcome.reason.startswith("stiffness"):
                logger.warning("bisection_stiff_midpoint", u0=mid, reason=shot.outcome.reason)
        if isinstance(shot.outcome, Decay):
            logger.info("bisection_decay", u0=mid, iteration=iteration)
            return shot, high
        if shot.crossed:
            high = shot
        else:
            low = shot
    logger.info("bisection_converged", u0=low.u0, width=abs(high.u0 - low.u0))
    return low, high


@dataclass(frozen=True)
class Candidate:
    """A bisected bracket with its selected shot and certificate."""

    shot: Shot
    bracket: tuple[float, float]
    action: float
    report: CertificateReport

    @property
    def certified(self) -> bool:
        return self.report.passed

    @property
    def profile(self) -> Profile:
        return self.shot.profile

    def record(self) -> CandidateRecord:
        return CandidateRecord(
            u0=self.shot.u0,
            action=self.action,
            outcome=self.shot.outcome.kind,
            certified=self.certified,
            bracket=self.bracket,
        )


@dataclass(frozen=True)
class GroundState:
    """Selected candidate plus everything that led to it."""

    selected: Candidate
    candidates: tuple[Candidate, ...]
    scan: tuple[ScanRow, ...]

    @property
    def profile(self) -> Profile:
        return self.selected.profile

    @property
    def report(self) -> CertificateReport:
        return self.selected.report

    @property
    def u0(self) -> float:
        return self.selected.shot.u0


def _candidate(
    low: Shot,
    high: Shot,
    spec: NonlinearitySpec,
    op: OperatorSpec,
    cfg: ShootingConfig,
    tolerances: ToleranceConfig,
) -> Candidate:
    low, high = bisect_bracket(low, high, spec, op, cfg)
    shot = low
    report = certify(shot.profile, spec, op, tolerances)
    value = action(shot.profile, spec, op)
    logger.info(
        "candidate_certified",
        u0=shot.u0,
        action=value,
        passed=report.passed,
        pohozaev=report.pohozaev_residual,
        nehari=report.nehari_residual,
    )
    return Candidate(shot=shot, bracket=(low.u0, high.u0), action=value, report=report)


def _scan(
    spec: NonlinearitySpec, op: OperatorSpec, cfg: ShootingConfig, sink: ScanSink | None
) -> tuple[list[Shot], list[ScanRow]]:
    rows: list[ScanRow] = []

    def collect(row: ScanRow) -> None:
        rows.append(row)
        if sink is not None:
            sink(row)

    shots = scan_shots(spec, op, cfg, collect)
    return shots, rows


def find_ground_state(
    spec: NonlinearitySpec,
    op: OperatorSpec,
    cfg: ShootingConfig,
    tolerances: ToleranceConfig | None = None,
    sink: ScanSink | None = None,
) -> GroundState:
    """Bisect the first scan bracket (lowest u0) to a ground-state candidate.

    Raises:
        NoBracketError: If the scan has no bracket, or the candidate fails
            certification while tolerances.require_certified is set.
    """
    tol = tolerances or ToleranceConfig()
    shots, rows = _scan(spec, op, cfg, sink)
    decays = [s for s in shots if isinstance(s.outcome, Decay)]
    brackets = find_brackets(shots)
    if not brackets and not decays:
        raise NoBracketError(scan=rows)
    if brackets:
        low, high = brackets[0]
        candidate = _candidate(low, high, spec, op, cfg, tol)
    else:
        shot = decays[0]
        candidate = Candidate(
            shot=shot,
            bracket=(shot.u0, shot.u0),
            action=action(shot.profile, spec, op),
            report=certify(shot.profile, spec, op, tol),
        )
    if tol.require_certified and not candidate.certified:
        raise NoBracketError(scan=rows, rejected=[candidate.record()])
    return GroundState(selected=candidate, candidates=(candidate,), scan=tuple(rows))


def _select(candidates: list[Candidate]) -> Candidate:
    ordered = sorted(candidates, key=lambda cand: cand.action)
    best = ordered[0]
    for other in ordered[1:]:
        if abs(other.action - best.action) <= c.ACTION_TIE_RTOL * max(abs(best.action), 1e-300):
            if other.shot.u0 < best.shot.u0:
                best = other
        else:
            break
    return best


def multi_start_ground_state(
    spec: NonlinearitySpec,
    op: OperatorSpec,
    cfg: ShootingConfig,
    tolerances: ToleranceConfig | None = None,
    sink: ScanSink | None = None,
) -> GroundState:
    """Bisect every scan bracket and keep the least-action certified candidate.

    Ties within 1e-6 relative action go to the smaller u(0). All candidates
    are returned; nothing here claims uniqueness.

    Raises:
        NoBracketError: If no eligible candidate exists.
    """
    tol = tolerances or ToleranceConfig()
    shots, rows = _scan(spec, op, cfg, sink)
    candidates = [_candidate(low, high, spec, op, cfg, tol) for low, high in find_brackets(shots)]
    for shot in shots:
        if isinstance(shot.outcome, Decay):
            candidates.append(
                Candidate(
                    shot=shot,
                    bracket=(shot.u0, shot.u0),
                    action=action(shot.profile, spec, op),
                    report=certify(shot.profile, spec, op, tol),
                )
            )
    logger.info("candidates_collected", count=len(candidates))
    eligible = [cand for cand in candidates if cand.certified or not tol.require_certified]
    if not eligible:
        raise NoBracketError(scan=rows, rejected=[cand.record() for cand in candidates])
    return GroundState(selected=_select(eligible), candidates=tuple(candidates), scan=tuple(rows))
