"""Independent reference computations used by the tests.

Nothing here imports pqground: the classical oracle integrates
u'' + (N-1)/r u' - u + u^3 = 0 directly in (u, u') and bisects on u(0).
"""

import math

from scipy.integrate import solve_ivp


def _classify(u0: float, dim: int, r_max: float, rtol: float) -> int:
    """+1 if u crosses zero, -1 if u' returns to zero first, 0 otherwise."""
    r0 = 1e-8
    y0 = [u0, -(u0**3 - u0) * r0 / dim]

    def rhs(r: float, y: list[float]) -> list[float]:
        u, v = y
        return [v, -(dim - 1) / r * v + u - u**3]

    def crossing(_r: float, y: list[float]) -> float:
        return y[0]

    def turning(_r: float, y: list[float]) -> float:
        return y[1]

    crossing.terminal = True  # type: ignore[attr-defined]
    crossing.direction = -1  # type: ignore[attr-defined]
    turning.terminal = True  # type: ignore[attr-defined]
    turning.direction = 1  # type: ignore[attr-defined]

    sol = solve_ivp(
        rhs, (r0, r_max), y0, method="LSODA", rtol=rtol, atol=1e-14, events=[crossing, turning]
    )
    if sol.t_events[0].size:
        return 1
    if sol.t_events[1].size:
        return -1
    return 0


def classical_soliton_u0(dim: int = 3, lo: float = 3.0, hi: float = 6.0, rtol: float = 1e-12) -> float:
    """u(0) of the positive ground state of -Delta u + u = u^3 in R^dim."""
    assert _classify(lo, dim, 40.0, rtol) == -1
    assert _classify(hi, dim, 40.0, rtol) == 1
    while hi - lo > 1e-10 * hi:
        mid = 0.5 * (lo + hi)
        if _classify(mid, dim, 40.0, rtol) == 1:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def gaussian_gradient_square(dim: int = 3) -> float:
    """||grad exp(-r^2)||_2^2 in R^dim."""
    omega = 2.0 * math.pi ** (dim / 2) / math.gamma(dim / 2)
    # int_0^inf 4 r^(N+1) exp(-2 r^2) dr
    return omega * 4.0 * math.gamma((dim + 2) / 2) / (2.0 * 2.0 ** ((dim + 2) / 2))


def gaussian_square(dim: int = 3) -> float:
    """||exp(-r^2)||_2^2 in R^dim."""
    return (math.pi / 2.0) ** (dim / 2)
