"""Divergence-form operators and their scalar flux functions.

A radial solution u of the equation enters the operator only through the
odd flux map Phi(w) = sum_e c_e |w|^(e-2) w evaluated at w = u'(r). Both
operator families reduce to a list of (coefficient, exponent) terms:

- PQ: Phi(w) = |w|^(p-2) w + beta |w|^(q-2) w
- BI chain: Phi(w) = sum_j a_j |w|^(2j-2) w
"""

import math
from dataclasses import dataclass, field
from typing import Literal, overload

import numpy as np
import numpy.typing as npt

from pqground.constants import FLUX_INVERSION_RTOL, FLUX_NEWTON_MAX_ITER, MAX_CHAIN_ORDER
from pqground.errors import (
    CoefficientOverflowError,
    FluxInversionError,
    InvalidOperatorError,
)


FloatArray = npt.NDArray[np.float64]
Term = tuple[float, float]


def bi_chain_coefficients(k: int, beta: float) -> list[float]:
    """Coefficients a_1..a_k of the k-th order Born-Infeld chain.

    Uses a_1 = 1 and a_{j+1} = a_j * beta * (2j - 1) / j, which equals
    (2j-3)!!/(j-1)! * beta^(j-1) with the convention (-1)!! = 1.

    Args:
        k: Chain order, 1 <= k <= 64.
        beta: Positive Born-Infeld parameter.

    Returns:
        The list [a_1, ..., a_k].

    Raises:
        InvalidOperatorError: If k or beta are out of range.
        CoefficientOverflowError: If a coefficient is not a finite float.
    """
    if k < 1 or k > MAX_CHAIN_ORDER:
        raise InvalidOperatorError(
            f"Chain order must lie in [1, {MAX_CHAIN_ORDER}], got {k}",
            details={"k": k},
        )
    if not beta > 0:
        raise InvalidOperatorError(f"beta must be positive, got {beta}")

    coefficients = [1.0]
    for j in range(1, k):
        nxt = coefficients[-1] * beta * (2 * j - 1) / j
        if not math.isfinite(nxt) or nxt == 0.0:
            raise CoefficientOverflowError(
                f"a_{j + 1} is not representable for beta={beta}",
                details={"j": j + 1, "beta": beta},
            )
        coefficients.append(nxt)
    return coefficients


def taylor_coefficients(k: int) -> list[float]:
    """Taylor coefficients of (1 - x)^(-1/2) by the binomial recurrence.

    c_1 = 1 and c_{j+1} = c_j (2j - 1) / (2j). Independent of the chain
    recurrence so that a_j(beta) = c_j (2 beta)^(j-1) is a real cross-check.
    """
    coefficients = [1.0]
    for j in range(1, k):
        coefficients.append(coefficients[-1] * (2 * j - 1) / (2 * j))
    return coefficients[:k]


@dataclass(frozen=True)
class PQOperator:
    """The (p, q)-Laplacian -Delta_p - beta Delta_q on R^N.

    beta = 0 is accepted only with degenerate=True and then reduces to the
    single p-Laplacian, which is used to cross-check against the classical
    scalar field equation.
    """

    p: float
    q: float | None
    beta: float
    dim: int
    degenerate: bool = False
    kind: Literal["pq"] = field(default="pq", init=False)

    def __post_init__(self) -> None:
        if self.dim < 3:
            raise InvalidOperatorError(f"Dimension must be >= 3, got {self.dim}")
        if not self.p > 1:
            raise InvalidOperatorError(f"p must exceed 1, got {self.p}")
        if self.p >= self.dim:
            raise InvalidOperatorError(
                f"p must be below the dimension, got p={self.p}, N={self.dim}"
            )
        if self.beta < 0:
            raise InvalidOperatorError(f"beta must be nonnegative, got {self.beta}")
        if self.beta == 0:
            if not self.degenerate:
                raise InvalidOperatorError(
                    "beta = 0 requires the degenerate mode to be enabled"
                )
            return
        if self.q is None or not self.q > self.p:
            raise InvalidOperatorError(f"q must exceed p, got p={self.p}, q={self.q}")

    @property
    def terms(self) -> tuple[Term, ...]:
        """Flux terms as (coefficient, exponent) pairs."""
        if self.beta == 0 or self.q is None:
            return ((1.0, self.p),)
        return ((1.0, self.p), (self.beta, self.q))


@dataclass(frozen=True)
class BIChainOperator:
    """k-th order Born-Infeld chain -sum_j a_j Delta_{2j}.

    With normalized=True every a_j is 1, giving the unweighted chain.
    """

    k: int
    beta: float
    dim: int
    normalized: bool = False
    kind: Literal["bi"] = field(default="bi", init=False)
    coefficients: tuple[float, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.dim < 3:
            raise InvalidOperatorError(f"Dimension must be >= 3, got {self.dim}")
        coefficients = (
            [1.0] * self.k
            if self.normalized and 1 <= self.k <= MAX_CHAIN_ORDER
            else bi_chain_coefficients(self.k, self.beta)
        )
        object.__setattr__(self, "coefficients", tuple(coefficients))

    @property
    def terms(self) -> tuple[Term, ...]:
        """Flux terms as (a_j, 2j) pairs."""
        return tuple((a, 2.0 * j) for j, a in enumerate(self.coefficients, start=1))

    @property
    def satisfies_order_constraint(self) -> bool:
        """Whether k >= max(N/2, N/(N-2))."""
        return self.k >= max(self.dim / 2, self.dim / (self.dim - 2))


OperatorSpec = PQOperator | BIChainOperator


def exponents(op: OperatorSpec) -> tuple[float, ...]:
    """Exponents e of the flux terms, in increasing order."""
    return tuple(e for _, e in op.terms)


def lowest_exponent(op: OperatorSpec) -> float:
    return op.terms[0][1]


def highest_exponent(op: OperatorSpec) -> float:
    return op.terms[-1][1]


@overload
def flux(w: float, op: OperatorSpec) -> float: ...
@overload
def flux(w: FloatArray, op: OperatorSpec) -> FloatArray: ...
def flux(w: float | FloatArray, op: OperatorSpec) -> float | FloatArray:
    """Evaluate Phi(w) for a scalar or an array."""
    if isinstance(w, np.ndarray):
        mag = np.abs(w)
        total = np.zeros_like(mag)
        for c, e in op.terms:
            total += c * mag ** (e - 1.0)
        return np.asarray(np.copysign(total, w))
    mag_s = abs(w)
    return math.copysign(sum(c * mag_s ** (e - 1.0) for c, e in op.terms), w)


def flux_derivative(w: float, op: OperatorSpec) -> float:
    """Phi'(w) = sum_e c_e (e - 1) |w|^(e-2)."""
    mag = abs(w)
    return sum(c * (e - 1.0) * mag ** (e - 2.0) for c, e in op.terms)


def exact_bi_flux(w: float, beta: float) -> float:
    """The Born-Infeld flux w / sqrt(1 - 2 beta w^2), defined for |w| < 1/sqrt(2 beta).

    Only used to compare chain truncations against the full operator.
    """
    denom = 1.0 - 2.0 * beta * w * w
    if denom <= 0:
        raise InvalidOperatorError(
            f"|w| must stay below 1/sqrt(2 beta), got w={w}, beta={beta}"
        )
    return w / math.sqrt(denom)


def _bracket(mag: float, terms: tuple[Term, ...]) -> tuple[float, float]:
    # Each single term reaches mag before the sum does, and each term with
    # share mag/n stays below it.
    n = len(terms)
    hi = min((mag / c) ** (1.0 / (e - 1.0)) for c, e in terms)
    lo = min((mag / (n * c)) ** (1.0 / (e - 1.0)) for c, e in terms)
    return lo, hi


def _invert_magnitude(mag: float, terms: tuple[Term, ...]) -> float:
    if mag == 0.0:
        return 0.0
    if len(terms) == 1:
        c, e = terms[0]
        return (mag / c) ** (1.0 / (e - 1.0))

    lo, hi = _bracket(mag, terms)
    tol = FLUX_INVERSION_RTOL * (1.0 + mag)
    w = hi
    for _ in range(FLUX_NEWTON_MAX_ITER):
        value = 0.0
        slope = 0.0
        for c, e in terms:
            value += c * w ** (e - 1.0)
            slope += c * (e - 1.0) * w ** (e - 2.0)
        residual = value - mag
        if abs(residual) <= tol:
            return w
        if residual > 0:
            hi = w
        else:
            lo = w
        step = w - residual / slope if slope > 0 and math.isfinite(slope) else -1.0
        w = step if lo < step < hi else 0.5 * (lo + hi)
        if hi - lo <= 4.0 * math.ulp(hi):
            return w
    return w


def _invert_array(mag: FloatArray, terms: tuple[Term, ...]) -> FloatArray:
    out = np.zeros_like(mag)
    nonzero = mag > 0
    if not nonzero.any():
        return out
    m = mag[nonzero]
    if len(terms) == 1:
        c, e = terms[0]
        out[nonzero] = (m / c) ** (1.0 / (e - 1.0))
        return out

    n = len(terms)
    hi = np.min([(m / c) ** (1.0 / (e - 1.0)) for c, e in terms], axis=0)
    lo = np.min([(m / (n * c)) ** (1.0 / (e - 1.0)) for c, e in terms], axis=0)
    tol = FLUX_INVERSION_RTOL * (1.0 + m)
    w = hi.copy()
    active = np.ones_like(m, dtype=bool)
    for _ in range(FLUX_NEWTON_MAX_ITER):
        wa = w[active]
        value = np.zeros_like(wa)
        slope = np.zeros_like(wa)
        for c, e in terms:
            value += c * wa ** (e - 1.0)
            slope += c * (e - 1.0) * wa ** (e - 2.0)
        residual = value - m[active]
        done = np.abs(residual) <= tol[active]

        lo_a, hi_a = lo[active], hi[active]
        hi_a = np.where(residual > 0, wa, hi_a)
        lo_a = np.where(residual <= 0, wa, lo_a)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = wa - residual / slope
        inside = np.isfinite(newton) & (newton > lo_a) & (newton < hi_a)
        stepped = np.where(inside, newton, 0.5 * (lo_a + hi_a))
        collapsed = hi_a - lo_a <= 4.0 * np.spacing(hi_a)

        w[active] = np.where(done, wa, stepped)
        lo[active], hi[active] = lo_a, hi_a
        still = ~(done | collapsed)
        idx = np.flatnonzero(active)
        active[idx[~still]] = False
        if not active.any():
            break
    out[nonzero] = w
    return out


@overload
def invert_flux(y: float, op: OperatorSpec) -> float: ...
@overload
def invert_flux(y: FloatArray, op: OperatorSpec) -> FloatArray: ...
def invert_flux(y: float | FloatArray, op: OperatorSpec) -> float | FloatArray:
    """Solve Phi(w) = y for w.

    Works on |y| and restores the sign afterwards. Newton iterates from the
    upper end of a bracket and falls back to bisection whenever a step
    leaves the bracket, until |Phi(w) - y| <= 1e-14 (1 + |y|).

    Raises:
        FluxInversionError: If y is NaN.
    """
    if isinstance(y, np.ndarray):
        arr = np.asarray(y, dtype=np.float64)
        if np.isnan(arr).any():
            raise FluxInversionError("Cannot invert the flux at NaN")
        w = _invert_array(np.abs(arr), op.terms)
        return np.asarray(np.copysign(w, arr))
    if math.isnan(y):
        raise FluxInversionError("Cannot invert the flux at NaN")
    return math.copysign(_invert_magnitude(abs(y), op.terms), y)


@dataclass(frozen=True)
class CriticalExponents:
    """Sobolev exponents attached to an operator.

    p is the lowest exponent. q_star_supplied is True when q >= N and q* had
    to come from the user.
    """

    p: float
    p_star: float
    q_star: float
    q_star_supplied: bool


def critical_exponents(op: OperatorSpec, q_star: float | None = None) -> CriticalExponents:
    """Compute p* = pN/(N-p) and q*, either by formula or from the user.

    Args:
        op: The operator.
        q_star: User-supplied q*, required when q >= N.

    Returns:
        CriticalExponents for the operator.

    Raises:
        InvalidOperatorError: If p >= N, or q >= N and q* is missing or
            not above max(q, p*).
    """
    n = op.dim
    p = lowest_exponent(op)
    q = highest_exponent(op)
    if p >= n:
        raise InvalidOperatorError(f"p must be below N, got p={p}, N={n}")
    p_star = p * n / (n - p)

    if len(op.terms) == 1:
        return CriticalExponents(p, p_star, q_star if q_star is not None else p_star, q_star is not None)

    if q < n:
        return CriticalExponents(p, p_star, q * n / (n - q), False)

    if q_star is None:
        raise InvalidOperatorError(
            f"q={q} >= N={n}: supply qstar > max(q, p*) = {max(q, p_star)}",
            details={"q": q, "N": n, "p_star": p_star},
        )
    if not q_star > max(q, p_star):
        raise InvalidOperatorError(
            f"qstar must exceed max(q, p*) = {max(q, p_star)}, got {q_star}",
            details={"qstar": q_star},
        )
    return CriticalExponents(p, p_star, q_star, True)
