"""The nonlinear term g: representation, hypotheses, truncation and splitting.

Builtin nonlinearities are sums of powers on pieces of [0, inf), which makes
their primitives, positive parts and truncations exact. A plain Python
callable is also accepted and is then integrated by quadrature.
"""

import bisect
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Protocol, overload

import numpy as np
import numpy.typing as npt
import structlog
from scipy import integrate, optimize

from pqground import constants as c
from pqground.errors import EvaluationError, InvalidNonlinearityError, QuadratureError
from pqground.operators import OperatorSpec, lowest_exponent
from pqground.schemas import AssumptionReport, DecompositionBounds, HypothesisVerdict


logger = structlog.get_logger()

FloatArray = npt.NDArray[np.float64]


class RealFunction(Protocol):
    """A function of one real variable that also maps arrays elementwise."""

    @overload
    def __call__(self, s: float) -> float: ...
    @overload
    def __call__(self, s: FloatArray) -> FloatArray: ...


# Power sums


@dataclass(frozen=True)
class PowerSum:
    """sum_i a_i s^(b_i) on s > 0, with every b_i > -1."""

    terms: tuple[tuple[float, float], ...] = ()

    @classmethod
    def of(cls, *terms: tuple[float, float]) -> "PowerSum":
        merged: dict[float, float] = {}
        for a, b in terms:
            merged[b] = merged.get(b, 0.0) + a
        return cls(tuple((a, b) for b, a in sorted(merged.items()) if a != 0.0))

    def __add__(self, other: "PowerSum") -> "PowerSum":
        return PowerSum.of(*self.terms, *other.terms)

    def __neg__(self) -> "PowerSum":
        return PowerSum(tuple((-a, b) for a, b in self.terms))

    def __sub__(self, other: "PowerSum") -> "PowerSum":
        return self + (-other)

    def value(self, s: float) -> float:
        return sum(a * s**b for a, b in self.terms)

    def values(self, s: FloatArray) -> FloatArray:
        out = np.zeros_like(s)
        for a, b in self.terms:
            out += a * s**b
        return out

    def antiderivative(self, s: float) -> float:
        return sum(a * s ** (b + 1.0) / (b + 1.0) for a, b in self.terms)

    def antiderivatives(self, s: FloatArray) -> FloatArray:
        out = np.zeros_like(s)
        for a, b in self.terms:
            out += a * s ** (b + 1.0) / (b + 1.0)
        return out

    def roots(self, lo: float, hi: float) -> list[float]:
        """Sign changes of the sum inside (lo, hi), refined by brentq."""
        if not self.terms:
            return []
        start = max(lo, 1e-12)
        stop = hi if math.isfinite(hi) else max(1e8, 1e3 * start)
        if stop <= start:
            return []
        grid = np.geomspace(start, stop, c.TRUNCATION_SCAN_POINTS)
        vals = self.values(grid)
        found: list[float] = []
        for i in range(1, grid.size):
            if vals[i - 1] == 0.0 and lo < grid[i - 1] < hi:
                found.append(float(grid[i - 1]))
            elif vals[i - 1] * vals[i] < 0:
                root = optimize.brentq(
                    self.value, grid[i - 1], grid[i], xtol=1e-300, rtol=4 * np.finfo(float).eps
                )
                found.append(float(root))
        return found


@dataclass(frozen=True)
class PiecewisePowerSum:
    """A power sum on each piece [breaks[i], breaks[i+1]) of [0, inf).

    Values at s <= 0 are zero.
    """

    breaks: tuple[float, ...]
    pieces: tuple[PowerSum, ...]
    _offsets: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.breaks) != len(self.pieces) + 1 or self.breaks[0] != 0.0:
            raise InvalidNonlinearityError("Malformed piecewise power sum")
        if not math.isinf(self.breaks[-1]):
            raise InvalidNonlinearityError("The last piece must extend to infinity")
        offsets = [0.0]
        for i, piece in enumerate(self.pieces[:-1]):
            lo, hi = self.breaks[i], self.breaks[i + 1]
            offsets.append(offsets[-1] + piece.antiderivative(hi) - piece.antiderivative(lo))
        object.__setattr__(self, "_offsets", tuple(offsets))

    @classmethod
    def single(cls, poly: PowerSum) -> "PiecewisePowerSum":
        return cls((0.0, math.inf), (poly,))

    def _index(self, s: float) -> int:
        return bisect.bisect_right(self.breaks, s) - 1

    @overload
    def __call__(self, s: float) -> float: ...
    @overload
    def __call__(self, s: FloatArray) -> FloatArray: ...
    def __call__(self, s: float | FloatArray) -> float | FloatArray:
        if isinstance(s, np.ndarray):
            out = np.zeros_like(s, dtype=np.float64)
            for i, piece in enumerate(self.pieces):
                mask = (s > 0) & (s >= self.breaks[i]) & (s < self.breaks[i + 1])
                if mask.any():
                    out[mask] = piece.values(s[mask])
            return out
        if s <= 0:
            return 0.0
        return self.pieces[self._index(s)].value(s)

    @overload
    def primitive(self, s: float) -> float: ...
    @overload
    def primitive(self, s: FloatArray) -> FloatArray: ...
    def primitive(self, s: float | FloatArray) -> float | FloatArray:
        """Exact integral of the sum from 0 to s."""
        if isinstance(s, np.ndarray):
            out = np.zeros_like(s, dtype=np.float64)
            for i, piece in enumerate(self.pieces):
                lo = self.breaks[i]
                mask = (s > 0) & (s >= lo) & (s < self.breaks[i + 1])
                if mask.any():
                    out[mask] = (
                        self._offsets[i] + piece.antiderivatives(s[mask]) - piece.antiderivative(lo)
                    )
            return out
        if s <= 0:
            return 0.0
        i = self._index(s)
        lo = self.breaks[i]
        return self._offsets[i] + self.pieces[i].antiderivative(s) - self.pieces[i].antiderivative(lo)

    def refine(self, points: Sequence[float]) -> "PiecewisePowerSum":
        """Split pieces at extra points without changing values."""
        breaks = sorted(set(self.breaks) | {p for p in points if 0 < p < math.inf})
        pieces = tuple(self.pieces[self._index(lo)] for lo in breaks[:-1])
        return PiecewisePowerSum(tuple(breaks), pieces)

    def combine(self, other: "PiecewisePowerSum", sign: float = 1.0) -> "PiecewisePowerSum":
        """Return self + sign * other."""
        a = self.refine(other.breaks)
        b = other.refine(a.breaks)
        pieces = tuple(
            pa + (pb if sign > 0 else -pb) for pa, pb in zip(a.pieces, b.pieces, strict=True)
        )
        return PiecewisePowerSum(a.breaks, pieces)

    def add_power(self, coef: float, exponent: float) -> "PiecewisePowerSum":
        return self.combine(PiecewisePowerSum.single(PowerSum.of((coef, exponent))))

    def truncated(self, s0: float) -> "PiecewisePowerSum":
        """Zero beyond s0."""
        if math.isinf(s0):
            return self
        refined = self.refine([s0])
        pieces = tuple(
            piece if refined.breaks[i] < s0 else PowerSum()
            for i, piece in enumerate(refined.pieces)
        )
        return PiecewisePowerSum(refined.breaks, pieces)

    def positive_part(self) -> "PiecewisePowerSum":
        """max(self, 0), split exactly at the sign changes."""
        breaks: list[float] = [0.0]
        pieces: list[PowerSum] = []
        for i, piece in enumerate(self.pieces):
            lo, hi = self.breaks[i], self.breaks[i + 1]
            cuts = sorted({lo, *piece.roots(lo, hi), hi})
            for a, b in zip(cuts[:-1], cuts[1:], strict=True):
                point = 0.5 * (a + b) if math.isfinite(b) else 2.0 * a + 1.0
                pieces.append(piece if piece.value(point) > 0 else PowerSum())
                breaks.append(b)
        return PiecewisePowerSum(tuple(breaks), tuple(pieces))


# Builtin families


def pure_power(alpha: float) -> PiecewisePowerSum:
    """g(s) = s^(alpha-1)."""
    if not alpha > 1:
        raise InvalidNonlinearityError(f"alpha must exceed 1, got {alpha}")
    return PiecewisePowerSum.single(PowerSum.of((1.0, alpha - 1.0)))


def cubic_minus_linear() -> PiecewisePowerSum:
    """g(s) = -s + s^3."""
    return PiecewisePowerSum.single(PowerSum.of((-1.0, 1.0), (1.0, 3.0)))


def min_power(ell: float, q_star: float) -> PiecewisePowerSum:
    """g(s) = min(s^(q*-1), s^(l-1)) with l < q*."""
    if not 1 < ell < q_star:
        raise InvalidNonlinearityError(f"min_power needs 1 < l < q*, got l={ell}, q*={q_star}")
    return PiecewisePowerSum(
        (0.0, 1.0, math.inf),
        (PowerSum.of((1.0, q_star - 1.0)), PowerSum.of((1.0, ell - 1.0))),
    )


def two_power(ell1: float, ell2: float, scale: float = 1.0) -> PiecewisePowerSum:
    """g(s) = K s^(l1-1) - s^(l2-1)."""
    if not (ell1 > 1 and ell2 > 1):
        raise InvalidNonlinearityError("two_power exponents must exceed 1")
    return PiecewisePowerSum.single(PowerSum.of((scale, ell1 - 1.0), (-1.0, ell2 - 1.0)))


def polynomial(coefficients: Sequence[float]) -> PiecewisePowerSum:
    """g(s) = sum_i c_i s^i with c_0 = 0."""
    if coefficients and coefficients[0] != 0.0:
        raise InvalidNonlinearityError("A polynomial nonlinearity must vanish at 0 (c_0 = 0)")
    return PiecewisePowerSum.single(
        PowerSum.of(*((float(a), float(i)) for i, a in enumerate(coefficients) if i > 0))
    )


# Callable nonlinearities


class UserFunction:
    """Wraps a Python callable so that it vanishes on s <= 0 and beyond a cutoff."""

    def __init__(self, fn: Callable[[float], float], cutoff: float = math.inf) -> None:
        self.fn = fn
        self.cutoff = cutoff
        self._vector = np.vectorize(fn, otypes=[np.float64])

    @overload
    def __call__(self, s: float) -> float: ...
    @overload
    def __call__(self, s: FloatArray) -> FloatArray: ...
    def __call__(self, s: float | FloatArray) -> float | FloatArray:
        if isinstance(s, np.ndarray):
            out = np.zeros_like(s, dtype=np.float64)
            mask = (s > 0) & (s <= self.cutoff)
            if mask.any():
                out[mask] = self._vector(s[mask])
            return out
        if s <= 0 or s > self.cutoff:
            return 0.0
        return float(self.fn(s))


class MappedFunction:
    """Pointwise map of an existing function, e.g. its positive part."""

    def __init__(self, base: RealFunction, transform: Callable[[FloatArray, FloatArray], FloatArray]) -> None:
        self.base = base
        self.transform = transform

    @overload
    def __call__(self, s: float) -> float: ...
    @overload
    def __call__(self, s: FloatArray) -> FloatArray: ...
    def __call__(self, s: float | FloatArray) -> float | FloatArray:
        if isinstance(s, np.ndarray):
            return self.transform(s, self.base(s))
        arr = np.array([s], dtype=np.float64)
        return float(self.transform(arr, self.base(arr))[0])


class QuadraturePrimitive:
    """Primitive of a callable by adaptive quadrature.

    Scalar calls go through scipy's QUADPACK and are memoized by a
    thread-safe lru_cache. Array calls integrate between consecutive sorted
    sample values with a fixed Gauss-Legendre rule and accumulate.
    """

    def __init__(self, fn: RealFunction, breakpoints: Sequence[float] = ()) -> None:
        self.fn = fn
        self.breakpoints = tuple(sorted(b for b in breakpoints if 0 < b < math.inf))
        self._scalar = lru_cache(maxsize=4096)(self._integrate)
        self._nodes, self._weights = np.polynomial.legendre.leggauss(8)

    def _integrate(self, s: float) -> float:
        points = [b for b in self.breakpoints if b < s] or None
        result = integrate.quad(
            self.fn, 0.0, s, points=points, epsrel=c.PRIMITIVE_RTOL, epsabs=1e-300, limit=400, full_output=1
        )
        value, abserr = float(result[0]), float(result[1])
        # a fourth element is QUADPACK's non-convergence message
        if len(result) > 3 or not math.isfinite(value):
            raise QuadratureError(interval=(0.0, s), details={"abserr": abserr})
        return value

    @overload
    def __call__(self, s: float) -> float: ...
    @overload
    def __call__(self, s: FloatArray) -> FloatArray: ...
    def __call__(self, s: float | FloatArray) -> float | FloatArray:
        if not isinstance(s, np.ndarray):
            return 0.0 if s <= 0 else self._scalar(float(s))
        pos = np.clip(s, 0.0, None)
        top = float(pos.max(initial=0.0))
        knots = np.unique(np.concatenate(([0.0], pos.ravel(), [b for b in self.breakpoints if b < top])))
        if knots.size < 2:
            return np.zeros_like(s, dtype=np.float64)
        half = 0.5 * np.diff(knots)
        mid = 0.5 * (knots[1:] + knots[:-1])
        pts = mid[:, None] + half[:, None] * self._nodes[None, :]
        vals = np.asarray(self.fn(pts.ravel())).reshape(pts.shape)
        cells = half * (vals @ self._weights)
        cumulative = np.concatenate(([0.0], np.cumsum(cells)))
        return np.asarray(cumulative[np.searchsorted(knots, pos)], dtype=np.float64)


# Specification types


@dataclass(frozen=True)
class ZeroMass:
    """g(s)/s^(l-1) -> 0 at 0 for l in {p, p*}."""


@dataclass(frozen=True)
class PositiveMass:
    """g(s)/s^(l-1) -> -m_l < 0 at 0 with p <= l < p*."""

    ell: float
    m_ell: float

    def __post_init__(self) -> None:
        if not self.m_ell > 0:
            raise InvalidNonlinearityError(f"m_l must be positive, got {self.m_ell}")


MassRegime = ZeroMass | PositiveMass


@dataclass(frozen=True)
class NonlinearitySpec:
    """The nonlinearity g together with its exponents and truncation point.

    `representation` is set for builtin families and makes every primitive
    exact. `g` always vanishes on s <= 0.
    """

    g: RealFunction
    zeta: float
    regime: MassRegime
    p_star: float
    q_star: float
    s0: float = math.inf
    pure_power_alpha: float | None = None
    representation: PiecewisePowerSum | None = None
    name: str = "custom"
    breakpoints: tuple[float, ...] = ()

    @classmethod
    def from_representation(
        cls,
        rep: PiecewisePowerSum,
        zeta: float,
        regime: MassRegime,
        p_star: float,
        q_star: float,
        pure_power_alpha: float | None = None,
        name: str = "custom",
    ) -> "NonlinearitySpec":
        return cls(
            g=rep,
            zeta=zeta,
            regime=regime,
            p_star=p_star,
            q_star=q_star,
            pure_power_alpha=pure_power_alpha,
            representation=rep,
            name=name,
            breakpoints=tuple(b for b in rep.breaks[1:-1]),
        )

    @classmethod
    def from_callable(
        cls,
        fn: Callable[[float], float],
        zeta: float,
        regime: MassRegime,
        p_star: float,
        q_star: float,
        name: str = "custom",
        breakpoints: Sequence[float] = (),
    ) -> "NonlinearitySpec":
        return cls(
            g=UserFunction(fn),
            zeta=zeta,
            regime=regime,
            p_star=p_star,
            q_star=q_star,
            name=name,
            breakpoints=tuple(breakpoints),
        )


@dataclass(frozen=True)
class Decomposition:
    """g = g1 - g2 with g1, g2 >= 0, and the primitives G1, G2."""

    g1: RealFunction
    g2: RealFunction
    G1: RealFunction  # noqa: N815
    G2: RealFunction  # noqa: N815
    exact: bool


@dataclass(frozen=True)
class Primitives:
    """Evaluators of G, G1 and G2."""

    G: RealFunction  # noqa: N815
    G1: RealFunction  # noqa: N815
    G2: RealFunction  # noqa: N815


def _checked(values: FloatArray, samples: FloatArray) -> FloatArray:
    bad = ~np.isfinite(values)
    if bad.any():
        s = float(samples[np.flatnonzero(bad)[0]])
        raise EvaluationError(f"g({s}) is not finite", s=s)
    return values


def primitive_of(spec: NonlinearitySpec) -> RealFunction:
    """G(s) = integral of g from 0 to s."""
    if spec.representation is not None:
        return _PrimitiveView(spec.representation)
    return QuadraturePrimitive(spec.g, (*spec.breakpoints, spec.s0))


class _PrimitiveView:
    def __init__(self, rep: PiecewisePowerSum) -> None:
        self.rep = rep

    @overload
    def __call__(self, s: float) -> float: ...
    @overload
    def __call__(self, s: FloatArray) -> FloatArray: ...
    def __call__(self, s: float | FloatArray) -> float | FloatArray:
        return self.rep.primitive(s)


def locate_zeta(g: RealFunction, breakpoints: Sequence[float] = (), rep: PiecewisePowerSum | None = None) -> float:
    """Argmax of G on a geometric grid over [1e-3, 1e3].

    Raises:
        InvalidNonlinearityError: If G is never positive on the grid.
    """
    grid = np.geomspace(1e-3, 1e3, 2001)
    primitive: RealFunction = _PrimitiveView(rep) if rep is not None else QuadraturePrimitive(g, breakpoints)
    values = primitive(grid)
    best = int(np.argmax(values))
    if not values[best] > 0:
        raise InvalidNonlinearityError("G(s) is never positive; no admissible zeta exists")
    return float(grid[best])


def truncate(spec: NonlinearitySpec, s_max: float | None = None) -> NonlinearitySpec:
    """Locate s0 = min{s >= zeta : g(s) = 0} and cut g off beyond it.

    The scan runs on a geometric grid over [zeta, s_max] (default
    1e3 * zeta) and each sign change is refined by brentq to relative
    tolerance 1e-12. No zero means s0 = inf and g is unchanged.
    """
    top = s_max if s_max is not None else c.S_MAX_FACTOR * spec.zeta
    grid = np.geomspace(spec.zeta, top, c.TRUNCATION_SCAN_POINTS)
    values = _checked(np.asarray(spec.g(grid), dtype=np.float64), grid)

    s0 = math.inf
    if values[0] == 0.0:
        s0 = spec.zeta
    else:
        for i in range(1, grid.size):
            if values[i] == 0.0:
                s0 = float(grid[i])
                break
            if values[i - 1] * values[i] < 0:
                s0 = float(
                    optimize.brentq(spec.g, grid[i - 1], grid[i], xtol=1e-300, rtol=c.TRUNCATION_RTOL)
                )
                break

    logger.debug("truncation_located", name=spec.name, s0=s0)
    if math.isinf(s0):
        return replace(spec, s0=s0)
    if spec.representation is not None:
        rep = spec.representation.truncated(s0)
        return replace(spec, g=rep, representation=rep, s0=s0)
    base = spec.g
    fn = base.fn if isinstance(base, UserFunction) else base
    return replace(spec, g=UserFunction(fn, cutoff=s0), s0=s0)


def decompose(spec: NonlinearitySpec) -> Decomposition:
    """Split g = g1 - g2.

    Zero mass: g1 = g_+ and g2 = g_-. Positive mass:
    g1 = (g + m s^(l-1))_+ and g2 = g1 - g.
    """
    rep = spec.representation
    regime = spec.regime
    if rep is not None:
        if isinstance(regime, PositiveMass):
            g1_rep = rep.add_power(regime.m_ell, regime.ell - 1.0).positive_part()
        else:
            g1_rep = rep.positive_part()
        g2_rep = g1_rep.combine(rep, sign=-1.0)
        return Decomposition(
            g1=g1_rep, g2=g2_rep, G1=_PrimitiveView(g1_rep), G2=_PrimitiveView(g2_rep), exact=True
        )

    if isinstance(regime, PositiveMass):
        m, ell = regime.m_ell, regime.ell

        def shifted_part(s: FloatArray, gs: FloatArray) -> FloatArray:
            return np.maximum(gs + m * np.clip(s, 0.0, None) ** (ell - 1.0), 0.0) * (s > 0)

        def shifted_rest(s: FloatArray, gs: FloatArray) -> FloatArray:
            return shifted_part(s, gs) - gs

        g1: RealFunction = MappedFunction(spec.g, shifted_part)
        g2: RealFunction = MappedFunction(spec.g, shifted_rest)
    else:
        g1 = MappedFunction(spec.g, lambda _s, gs: np.maximum(gs, 0.0))
        g2 = MappedFunction(spec.g, lambda _s, gs: np.maximum(-gs, 0.0))
    points = (*spec.breakpoints, spec.s0)
    return Decomposition(
        g1=g1, g2=g2, G1=QuadraturePrimitive(g1, points), G2=QuadraturePrimitive(g2, points), exact=False
    )


def primitives(spec: NonlinearitySpec, decomposition: Decomposition | None = None) -> Primitives:
    """Evaluators of G, G1, G2; exact for builtin families."""
    parts = decomposition if decomposition is not None else decompose(spec)
    return Primitives(G=primitive_of(spec), G1=parts.G1, G2=parts.G2)


def _limit_ratio(g: RealFunction, exponent: float, s: float) -> float:
    value = g(s)
    if not math.isfinite(value):
        raise EvaluationError(f"g({s}) is not finite", s=s)
    return value / s ** (exponent - 1.0)


def validate_assumptions(spec: NonlinearitySpec, op: OperatorSpec) -> AssumptionReport:
    """Sampled verdicts on the structural hypotheses of g.

    Limits at 0 and infinity are read off at the extreme samples of the
    geometric grids [1e-8, 1e-2] and [1e2, 1e8]; they are evidence, not proofs.

    Raises:
        EvaluationError: If g is not finite at a sample.
    """
    p = lowest_exponent(op)
    small = np.geomspace(*c.SMALL_S_RANGE, c.HYPOTHESIS_SAMPLES)
    large = np.geomspace(*c.LARGE_S_RANGE, c.HYPOTHESIS_SAMPLES)
    _checked(np.asarray(spec.g(small), dtype=np.float64), small)
    _checked(np.asarray(spec.g(large), dtype=np.float64), large)
    verdicts: list[HypothesisVerdict] = []

    negatives = -np.concatenate((small, large))
    at_negatives = np.asarray(spec.g(negatives), dtype=np.float64)
    verdicts.append(
        HypothesisVerdict(
            name="g1",
            passed=bool(np.all(at_negatives == 0.0)) and spec.g(0.0) == 0.0,
            value=float(np.max(np.abs(at_negatives))),
            note="g(s) = 0 for s <= 0",
        )
    )

    s_min = float(small[0])
    threshold = c.LIMIT_RATIO_THRESHOLD
    if isinstance(spec.regime, PositiveMass):
        ell, m = spec.regime.ell, spec.regime.m_ell
        ratio = _limit_ratio(spec.g, ell, s_min)
        verdicts.append(
            HypothesisVerdict(
                name="g2'",
                passed=abs(ratio + m) <= threshold * (1.0 + m),
                value=ratio,
                note=f"g(s)/s^(l-1) -> -m_l = {-m}",
            )
        )
        verdicts.append(
            HypothesisVerdict(
                name="mass_exponent",
                passed=p <= ell < spec.p_star,
                value=ell,
                evidence="exact",
                note=f"requires {p} <= l < {spec.p_star}",
            )
        )
    else:
        for label, ell in (("p", p), ("p*", spec.p_star)):
            ratio = _limit_ratio(spec.g, ell, s_min)
            verdicts.append(
                HypothesisVerdict(
                    name=f"g2[{label}]",
                    passed=ratio <= threshold,
                    value=ratio,
                    note="intermediate l follow by interpolation",
                )
            )

    ratio_inf = _limit_ratio(spec.g, spec.q_star, float(large[-1]))
    verdicts.append(
        HypothesisVerdict(name="g3", passed=ratio_inf <= threshold, value=ratio_inf, note=f"q* = {spec.q_star}")
    )

    g_zeta = float(primitive_of(spec)(spec.zeta))
    verdicts.append(
        HypothesisVerdict(name="g4", passed=g_zeta > 0, value=g_zeta, evidence="quadrature", note=f"G({spec.zeta})")
    )

    if op.kind == "bi":
        verdicts.append(
            HypothesisVerdict(
                name="chain_order",
                passed=op.satisfies_order_constraint,
                value=float(op.k),
                evidence="exact",
                note="k >= max(N/2, N/(N-2)); advisory, k=2 falls under the (2,4) case",
            )
        )
        verdicts.append(
            HypothesisVerdict(
                name="h3",
                passed=spec.q_star > 2 * op.k,
                value=spec.q_star,
                evidence="exact",
                note=f"l* > 2k = {2 * op.k}",
            )
        )

    report = AssumptionReport(verdicts=verdicts)
    logger.info("assumptions_checked", name=spec.name, all_passed=report.all_passed)
    return report


def decomposition_bounds(spec: NonlinearitySpec, parts: Decomposition) -> DecompositionBounds:
    """Sampled checks of the split and its growth bounds.

    Samples 10^4 points of [0, min(2 s0, 1e3)].
    """
    top = min(2.0 * spec.s0, 1e3)
    s = np.linspace(0.0, top, c.DECOMPOSITION_SAMPLES)
    g = np.asarray(spec.g(s), dtype=np.float64)
    g1 = np.asarray(parts.g1(s), dtype=np.float64)
    g2 = np.asarray(parts.g2(s), dtype=np.float64)
    nonnegative = bool(np.all(g1 >= 0) and np.all(g2 >= -c.DECOMPOSITION_ATOL * (1 + np.abs(g))))
    consistency = float(np.max(np.abs(g1 - g2 - g) / (1.0 + np.abs(g))))

    pos = s[1:]
    calibrated: float | None = None
    c_eps: float | None = None
    lower: bool | None = None
    if isinstance(spec.regime, PositiveMass):
        ell, m = spec.regime.ell, spec.regime.m_ell
        big_g2 = np.asarray(parts.G2(pos), dtype=np.float64)
        tol = 1e-9 * (1.0 + m * pos ** (ell - 1.0))
        lower = bool(
            np.all(g2[1:] >= m * pos ** (ell - 1.0) - tol)
            and np.all(big_g2 >= m * pos**ell / ell - 1e-9 * (1.0 + m * pos**ell / ell))
        )
        c_eps = float(np.max((g1[1:] - 0.5 * g2[1:]) / pos ** (spec.q_star - 1.0)))
        c_eps = max(c_eps, 0.0)
    else:
        big_g1 = np.asarray(parts.G1(pos), dtype=np.float64)
        calibrated = float(np.max(big_g1 / (pos**spec.p_star + pos**spec.q_star)))

    return DecompositionBounds(
        nonnegative=nonnegative,
        max_consistency_error=consistency,
        calibrated_c=calibrated,
        c_eps=c_eps,
        lower_bounds_hold=lower,
    )
