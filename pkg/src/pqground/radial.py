"""Radial grids, profiles and weighted quadrature.

All integrals are omega_{N-1} * int r^(N-1) f dr, computed by Gauss-Legendre
quadrature on every grid cell. A profile keeps its values at the nodes and
at every quadrature point, so no quantity is ever differenced numerically.
Integrals stop at R_max; the part beyond R_max is estimated from the local
power law u ~ A r^(-kappa) at the last node and reported next to the body.
"""

import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np
import numpy.typing as npt
from scipy import integrate
from scipy.interpolate import CubicHermiteSpline
from scipy.special import gamma

from pqground import constants as c
from pqground.errors import DomainError
from pqground.nonlinearity import RealFunction


FloatArray = npt.NDArray[np.float64]
ArrayMap = Callable[[FloatArray], FloatArray]


def sphere_area(dim: int) -> float:
    """Surface area omega_{N-1} = 2 pi^(N/2) / Gamma(N/2) of the unit sphere."""
    return float(2.0 * math.pi ** (dim / 2) / gamma(dim / 2))


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Nodes 0 = r_0 < ... < r_M = R_max and their cell quadrature rule."""

    nodes: FloatArray
    dim: int
    gauss_points: int = c.GAUSS_POINTS
    points: FloatArray = field(init=False, repr=False)
    weights: FloatArray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=np.float64)
        if nodes.ndim != 1 or nodes.size - 1 < c.MIN_RESOLUTION:
            raise DomainError(f"A grid needs at least {c.MIN_RESOLUTION} cells")
        if nodes[0] != 0.0 or not np.all(np.diff(nodes) > 0):
            raise DomainError("Grid nodes must start at 0 and increase strictly")
        x, w = np.polynomial.legendre.leggauss(self.gauss_points)
        left, width = nodes[:-1], np.diff(nodes)
        points = (left[:, None] + 0.5 * width[:, None] * (x[None, :] + 1.0)).ravel()
        weights = (0.5 * width[:, None] * w[None, :]).ravel()
        weights = sphere_area(self.dim) * points ** (self.dim - 1) * weights
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @property
    def sphere_area(self) -> float:
        return sphere_area(self.dim)

    @property
    def r_max(self) -> float:
        return float(self.nodes[-1])

    @property
    def resolution(self) -> int:
        return int(self.nodes.size - 1)

    @classmethod
    def build(
        cls,
        dim: int,
        r_max: float = c.DEFAULT_R_MAX,
        resolution: int = c.DEFAULT_RESOLUTION,
        geometric_fraction: float = c.GEOMETRIC_FRACTION,
        grading_ratio: float = c.GRADING_RATIO,
        r_min: float = c.STARTUP_OFFSET,
    ) -> "RadialGrid":
        """Graded grid: geometric cells on [r_min, 1], uniform cells on [1, R_max].

        The geometric block holds geometric_fraction of the cells, with a
        ratio of at most grading_ratio; if that cap binds the block starts
        above r_min. Grids with R_max <= 1 are uniform.
        """
        if resolution < c.MIN_RESOLUTION:
            raise DomainError(f"resolution must be at least {c.MIN_RESOLUTION}, got {resolution}")
        if r_max <= 1.0:
            return cls(np.linspace(0.0, r_max, resolution + 1), dim)

        n_geo = max(2, round(geometric_fraction * resolution))
        start = max(min(r_min, 0.5), grading_ratio ** (-(n_geo - 1)))
        geometric = np.geomspace(start, 1.0, n_geo)
        uniform = np.linspace(1.0, r_max, resolution - n_geo + 1)[1:]
        return cls(np.concatenate(([0.0], geometric, uniform)), dim)


class TailModel(NamedTuple):
    """Power law u ~ u_R (r/R)^(-kappa) beyond R = R_max.

    A profile ending at u = 0 or u' = 0 has no tail (kappa = inf).
    """

    radius: float
    value: float
    slope: float
    exponent: float
    valid: bool

    @classmethod
    def fit(
        cls, radius: float, value: float, slope: float, exponent: float | None = None
    ) -> "TailModel":
        """Tail through (R, u(R)); kappa = -R u'(R) / u(R) unless `exponent` fixes it."""
        if value == 0.0 or slope == 0.0:
            return cls(radius, value, slope, math.inf, True)
        if value > 0 and slope < 0:
            kappa = -radius * slope / value if exponent is None else exponent
            return cls(radius, value, slope, kappa, True)
        return cls(radius, value, slope, 0.0, False)

    @property
    def truncated(self) -> bool:
        """The profile ends at a zero or a turning point; nothing lies beyond R."""
        return self.valid and math.isinf(self.exponent)

    def extend(self, r: FloatArray) -> tuple[FloatArray, FloatArray]:
        """Model values and derivatives at r >= R."""
        if not self.valid or self.truncated:
            return np.zeros_like(r), np.zeros_like(r)
        x = r / self.radius
        u = self.value * x ** (-self.exponent)
        return u, -self.exponent * u / r


class Integral(NamedTuple):
    """A truncated integral and its tail estimate."""

    body: float
    tail: float

    @property
    def total(self) -> float:
        return self.body + (self.tail if math.isfinite(self.tail) else 0.0)

    @property
    def tail_fraction(self) -> float:
        if not math.isfinite(self.tail):
            return math.inf
        total = abs(self.body) + abs(self.tail)
        return abs(self.tail) / total if total > 0 else 0.0


@dataclass(frozen=True, eq=False)
class Profile:
    """A radial function with its derivative on a grid.

    Samples at nodes (u, du) and at quadrature points (u_q, du_q) are
    stored. `source` evaluates the function anywhere in [0, inf) and is
    used for dilation; it is not serialized.
    """

    grid: RadialGrid
    u: FloatArray
    du: FloatArray
    u_q: FloatArray
    du_q: FloatArray
    exponents: tuple[float, ...] = ()
    meta: Mapping[str, Any] = field(default_factory=dict)
    source: tuple[ArrayMap, ArrayMap] | None = field(default=None, repr=False)
    tail: TailModel = field(init=False)
    grad_cache: Mapping[float, Integral] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        m = self.grid.nodes.size
        q = self.grid.points.size
        if self.u.shape != (m,) or self.du.shape != (m,):
            raise DomainError("Node samples do not match the grid")
        if self.u_q.shape != (q,) or self.du_q.shape != (q,):
            raise DomainError("Quadrature samples do not match the grid")
        for arr in (self.u, self.du, self.u_q, self.du_q):
            if not np.all(np.isfinite(arr)):
                raise DomainError("Profile values must be finite")
        object.__setattr__(
            self, "tail", TailModel.fit(self.grid.r_max, float(self.u[-1]), float(self.du[-1]))
        )
        object.__setattr__(
            self, "grad_cache", {e: _grad_power(self, e) for e in self.exponents}
        )

    @classmethod
    def from_functions(
        cls,
        grid: RadialGrid,
        u_fn: ArrayMap,
        du_fn: ArrayMap,
        exponents: tuple[float, ...] = (),
        meta: Mapping[str, Any] | None = None,
    ) -> "Profile":
        """Sample u and u' (vectorized callables) at nodes and quadrature points."""
        return cls(
            grid=grid,
            u=np.asarray(u_fn(grid.nodes), dtype=np.float64),
            du=np.asarray(du_fn(grid.nodes), dtype=np.float64),
            u_q=np.asarray(u_fn(grid.points), dtype=np.float64),
            du_q=np.asarray(du_fn(grid.points), dtype=np.float64),
            exponents=exponents,
            meta=dict(meta or {}),
            source=(u_fn, du_fn),
        )

    @classmethod
    def from_nodes(
        cls,
        grid: RadialGrid,
        u: FloatArray,
        du: FloatArray,
        exponents: tuple[float, ...] = (),
        meta: Mapping[str, Any] | None = None,
    ) -> "Profile":
        """Build from node samples only, via cubic Hermite interpolation."""
        spline = CubicHermiteSpline(grid.nodes, u, du)
        slope = spline.derivative()
        tail = TailModel.fit(grid.r_max, float(u[-1]), float(du[-1]))

        def u_fn(r: FloatArray) -> FloatArray:
            inside = r <= grid.r_max
            out = np.where(inside, spline(np.minimum(r, grid.r_max)), 0.0)
            if not inside.all():
                out[~inside] = tail.extend(r[~inside])[0]
            return np.asarray(out, dtype=np.float64)

        def du_fn(r: FloatArray) -> FloatArray:
            inside = r <= grid.r_max
            out = np.where(inside, slope(np.minimum(r, grid.r_max)), 0.0)
            if not inside.all():
                out[~inside] = tail.extend(r[~inside])[1]
            return np.asarray(out, dtype=np.float64)

        return cls(
            grid=grid,
            u=np.asarray(u, dtype=np.float64),
            du=np.asarray(du, dtype=np.float64),
            u_q=u_fn(grid.points),
            du_q=du_fn(grid.points),
            exponents=exponents,
            meta=dict(meta or {}),
            source=(u_fn, du_fn),
        )

    @property
    def u0(self) -> float:
        return float(self.u[0])

    def _functions(self) -> tuple[ArrayMap, ArrayMap]:
        if self.source is not None:
            return self.source
        rebuilt = Profile.from_nodes(self.grid, self.u, self.du)
        assert rebuilt.source is not None
        return rebuilt.source

    def scaled(self, factor: float) -> "Profile":
        """factor * u on the same grid."""
        u_fn, du_fn = self._functions()
        return Profile(
            grid=self.grid,
            u=factor * self.u,
            du=factor * self.du,
            u_q=factor * self.u_q,
            du_q=factor * self.du_q,
            exponents=self.exponents,
            meta=dict(self.meta),
            source=(lambda r: factor * u_fn(r), lambda r: factor * du_fn(r)),
        )

    def perturbed(self, bump: ArrayMap, dbump: ArrayMap, eps: float) -> "Profile":
        """u + eps * bump, with the exact derivative of the bump."""
        u_fn, du_fn = self._functions()
        grid = self.grid
        return Profile(
            grid=grid,
            u=self.u + eps * bump(grid.nodes),
            du=self.du + eps * dbump(grid.nodes),
            u_q=self.u_q + eps * bump(grid.points),
            du_q=self.du_q + eps * dbump(grid.points),
            exponents=self.exponents,
            meta=dict(self.meta),
            source=(lambda r: u_fn(r) + eps * bump(r), lambda r: du_fn(r) + eps * dbump(r)),
        )

    def dilated(self, t: float) -> "Profile":
        """u(r / t), resampled on the same grid."""
        if not t > 0:
            raise DomainError(f"Dilation factor must be positive, got {t}")
        u_fn, du_fn = self._functions()
        return Profile.from_functions(
            self.grid,
            lambda r: u_fn(r / t),
            lambda r: du_fn(r / t) / t,
            exponents=self.exponents,
            meta=dict(self.meta),
        )

    def with_exponents(self, exponents: tuple[float, ...]) -> "Profile":
        return Profile(
            grid=self.grid,
            u=self.u,
            du=self.du,
            u_q=self.u_q,
            du_q=self.du_q,
            exponents=exponents,
            meta=self.meta,
            source=self.source,
        )


def _grad_power(profile: Profile, e: float) -> Integral:
    grid = profile.grid
    body = float(grid.weights @ np.abs(profile.du_q) ** e)
    tail = profile.tail
    if not tail.valid:
        return Integral(body, math.nan)
    if tail.truncated:
        return Integral(body, 0.0)
    denom = e * (tail.exponent + 1.0) - grid.dim
    if denom <= 0:
        return Integral(body, math.inf)
    extra = grid.sphere_area * abs(tail.slope) ** e * tail.radius**grid.dim / denom
    return Integral(body, extra)


def grad_power(profile: Profile, e: float) -> Integral:
    """omega * int r^(N-1) |u'|^e dr as body and tail."""
    if e < 1:
        raise DomainError(f"Exponent must be at least 1, got {e}")
    cached = profile.grad_cache.get(e)
    return cached if cached is not None else _grad_power(profile, e)


def grad_norm(profile: Profile, e: float, include_tail: bool = True) -> float:
    """||grad u||_e, with the tail estimate added unless include_tail is False."""
    integral = grad_power(profile, e)
    value = integral.total if include_tail else integral.body
    return value ** (1.0 / e)


def lebesgue_power(profile: Profile, r_exp: float) -> Integral:
    """omega * int r^(N-1) |u|^r_exp dr as body and tail."""
    grid = profile.grid
    body = float(grid.weights @ np.abs(profile.u_q) ** r_exp)
    tail = profile.tail
    if not tail.valid:
        return Integral(body, math.nan)
    if tail.truncated:
        return Integral(body, 0.0)
    denom = r_exp * tail.exponent - grid.dim
    if denom <= 0:
        return Integral(body, math.inf)
    return Integral(body, grid.sphere_area * tail.value**r_exp * tail.radius**grid.dim / denom)


def lebesgue_norm(profile: Profile, r_exp: float, include_tail: bool = True) -> float:
    """||u||_r_exp."""
    if r_exp < 1:
        raise DomainError(f"Exponent must be at least 1, got {r_exp}")
    integral = lebesgue_power(profile, r_exp)
    value = integral.total if include_tail else integral.body
    return value ** (1.0 / r_exp)


def integral_parts(profile: Profile, fn: RealFunction) -> Integral:
    """omega * int r^(N-1) F(u(r)) dr as body and tail."""
    grid = profile.grid
    body = float(grid.weights @ np.asarray(fn(profile.u_q), dtype=np.float64))
    tail = profile.tail
    if not tail.valid:
        return Integral(body, math.nan)
    if tail.truncated:
        return Integral(body, 0.0)

    dim, kappa, u_r = grid.dim, tail.exponent, tail.value

    def integrand(x: float) -> float:
        return x ** (dim - 1) * float(fn(u_r * x ** (-kappa)))

    result = integrate.quad(integrand, 1.0, math.inf, limit=200, full_output=1)
    if len(result) > 3 or not math.isfinite(result[0]):
        return Integral(body, math.inf)
    return Integral(body, grid.sphere_area * tail.radius**dim * float(result[0]))


def integral_of(profile: Profile, fn: RealFunction, include_tail: bool = True) -> float:
    """omega * int r^(N-1) F(u(r)) dr."""
    integral = integral_parts(profile, fn)
    return integral.total if include_tail else integral.body


def interpolation_check(profile: Profile, p_star: float, q_star: float, r_exp: float) -> float:
    """||u||_r^r / (||u||_p*^(theta p*) ||u||_q*^((1-theta) q*)) with r = theta p* + (1-theta) q*.

    Uses the truncated integrals only: on a positive discrete measure Hoelder's
    inequality holds exactly, so the ratio is at most 1 up to rounding.
    """
    if not p_star <= r_exp <= q_star:
        raise DomainError(f"Need p* <= r <= q*, got {p_star}, {r_exp}, {q_star}")
    if q_star == p_star:
        return 1.0
    theta = (q_star - r_exp) / (q_star - p_star)
    mid = lebesgue_power(profile, r_exp).body
    low = lebesgue_power(profile, p_star).body
    high = lebesgue_power(profile, q_star).body
    denom = low**theta * high ** (1.0 - theta)
    if denom == 0.0:
        return 0.0 if mid == 0.0 else math.inf
    return mid / denom


class DecayBound(NamedTuple):
    """Running sup of r^((N-p)/p) |u| / ||grad u||_p over 1 <= r <= rho."""

    sup: float
    inner: float
    variation: float


def radial_decay_bound(profile: Profile, p: float) -> DecayBound:
    """Decay functional sup_{r >= 1} r^((N-p)/p)|u(r)| / ||grad u||_p.

    `sup` runs over all nodes r >= 1, `inner` stops at R_max/10, and
    `variation` = (sup - inner)/sup measures growth over the last decade.
    """
    grid = profile.grid
    norm = grad_norm(profile, p)
    r = grid.nodes
    outer = r >= 1.0
    if norm == 0.0 or not outer.any():
        return DecayBound(0.0, 0.0, 0.0)
    weighted = r[outer] ** ((grid.dim - p) / p) * np.abs(profile.u[outer]) / norm
    sup = float(weighted.max())
    cut = max(1.0, grid.r_max / 10.0)
    inner_mask = r[outer] <= cut
    inner = float(weighted[inner_mask].max()) if inner_mask.any() else float(weighted[0])
    variation = (sup - inner) / sup if sup > 0 else 0.0
    return DecayBound(sup, inner, variation)
