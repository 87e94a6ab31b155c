"""Identity residuals and certificates for candidate ground states.

A radial solution with flux terms (c_e, e) and A_e = ||grad u||_e^e satisfies

    Pohozaev:         sum_e c_e (N - e) / e A_e - N int G(u)  = 0
    Nehari:           sum_e c_e A_e - int g(u) u               = 0
    action relation:  I(u) - (1/N) sum_e c_e A_e                = 0

The action relation is Pohozaev rewritten; for g(s) = s^(alpha-1) Pohozaev
minus (N/alpha) Nehari leaves sum_e c_e ((N-e)/e - N/alpha) A_e = 0, which
is the source of the nonexistence certificate.
"""

import math
from fractions import Fraction

import numpy as np
import numpy.typing as npt
import structlog

from pqground import constants as c
from pqground.errors import InvalidNonlinearityError
from pqground.nonlinearity import MappedFunction, NonlinearitySpec, primitive_of
from pqground.operators import OperatorSpec, bi_chain_coefficients, lowest_exponent
from pqground.radial import Integral, Profile, grad_power, integral_parts, radial_decay_bound
from pqground.schemas import CertificateReport, CoefficientRow, NonexistenceReport, ToleranceConfig
from pqground.variational import action


logger = structlog.get_logger()

FloatArray = npt.NDArray[np.float64]


def _relative(terms: list[float]) -> float:
    scale = max((abs(t) for t in terms), default=0.0)
    return 0.0 if scale == 0.0 else abs(math.fsum(terms)) / scale


def _work(spec: NonlinearitySpec) -> MappedFunction:
    return MappedFunction(spec.g, lambda s, gs: s * gs)


def _gradient_integrals(profile: Profile, op: OperatorSpec) -> list[tuple[float, float, Integral]]:
    return [(coef, e, grad_power(profile, e)) for coef, e in op.terms]


def pohozaev_residual(profile: Profile, spec: NonlinearitySpec, op: OperatorSpec) -> float:
    """|sum_e c_e (N-e)/e A_e - N int G(u)| relative to its largest term."""
    n = profile.grid.dim
    terms = [coef * (n - e) / e * a.total for coef, e, a in _gradient_integrals(profile, op)]
    terms.append(-n * integral_parts(profile, primitive_of(spec)).total)
    return _relative(terms)


def nehari_residual(profile: Profile, spec: NonlinearitySpec, op: OperatorSpec) -> float:
    """|sum_e c_e A_e - int g(u) u| relative to its largest term."""
    terms = [coef * a.total for coef, _, a in _gradient_integrals(profile, op)]
    terms.append(-integral_parts(profile, _work(spec)).total)
    return _relative(terms)


def action_relation_residual(profile: Profile, spec: NonlinearitySpec, op: OperatorSpec) -> float:
    """|I(u) - (1/N) sum_e c_e A_e| / (1 + |I(u)|)."""
    n = profile.grid.dim
    value = action(profile, spec, op)
    relation = sum(coef * a.total for coef, _, a in _gradient_integrals(profile, op)) / n
    return abs(value - relation) / (1.0 + abs(value))


def pure_power_identity_residual(profile: Profile, op: OperatorSpec, alpha: float) -> float:
    """|sum_e c_e ((N-e)/e - N/alpha) A_e| / sum_e |c_e ((N-e)/e - N/alpha)| A_e."""
    n = profile.grid.dim
    terms = [
        coef * ((n - e) / e - n / alpha) * a.total for coef, e, a in _gradient_integrals(profile, op)
    ]
    scale = math.fsum(abs(t) for t in terms)
    return 0.0 if scale == 0.0 else abs(math.fsum(terms)) / scale


def nonexistence_coefficients(alpha: float, dim: int, k: int) -> list[Fraction | float]:
    """c_j = (N - 2j)/(2j) - N/alpha.

    The c_j are Fractions when alpha equals a fraction with denominator at
    most 10^6 (7, 13/2, 6.25, ...); otherwise they are floats.
    """
    exact_alpha = Fraction(alpha).limit_denominator(10**6)
    if float(exact_alpha) == alpha:
        return [Fraction(dim - 2 * j, 2 * j) - Fraction(dim) / exact_alpha for j in range(1, k + 1)]
    return [(dim - 2 * j) / (2 * j) - dim / alpha for j in range(1, k + 1)]


def nonexistence_certificate(alpha: float, dim: int, k: int, beta: float) -> NonexistenceReport:
    """Sign table of c_j for the chain with g(s) = s^(alpha-1).

    Every c_j <= 0 forces grad u = 0 in the pure-power identity, so no
    nontrivial solution exists.

    Raises:
        InvalidNonlinearityError: If alpha <= 1.
    """
    if not alpha > 1:
        raise InvalidNonlinearityError(f"alpha must exceed 1, got {alpha}")
    coefs = bi_chain_coefficients(k, beta)
    signs = nonexistence_coefficients(alpha, dim, k)
    rows = [
        CoefficientRow(j=j, a_j=a, c_j=float(cj))
        for j, (a, cj) in enumerate(zip(coefs, signs, strict=True), start=1)
    ]
    certified = all(cj <= 0 for cj in signs)
    logger.info("nonexistence_checked", alpha=alpha, dim=dim, k=k, certified=certified)
    return NonexistenceReport(alpha=alpha, dim=dim, k=k, beta=beta, rows=rows, certified=certified)


def positivity_verdict(profile: Profile, decay_du: float = c.DECAY_DU_FRACTION) -> bool:
    """u > 0 at every node before the last; a non-positive last node needs |u'| <= decay_du * u0."""
    u = profile.u
    if u.size < 2 or not np.all(u[:-1] > 0):
        return False
    if u[-1] > 0:
        return True
    return bool(abs(profile.du[-1]) <= decay_du * abs(profile.u0))


def certify(
    profile: Profile,
    spec: NonlinearitySpec,
    op: OperatorSpec,
    tolerances: ToleranceConfig | None = None,
    decay_du: float = c.DECAY_DU_FRACTION,
) -> CertificateReport:
    """Residuals, positivity and the decay statistic of a candidate.

    Passes iff all three residuals are under their tolerances, u stays
    positive, and sup r^((N-p)/p)|u| / ||grad u||_p over r >= 1 is finite and
    moves by less than decay_stability over the last decade of r.
    """
    tol = tolerances or ToleranceConfig()
    pohozaev = pohozaev_residual(profile, spec, op)
    nehari = nehari_residual(profile, spec, op)
    relation = action_relation_residual(profile, spec, op)
    pure = (
        pure_power_identity_residual(profile, op, spec.pure_power_alpha)
        if spec.pure_power_alpha is not None
        else None
    )

    used = [a for _, _, a in _gradient_integrals(profile, op)]
    used.append(integral_parts(profile, primitive_of(spec)))
    used.append(integral_parts(profile, _work(spec)))
    tail_fraction = max(integral.tail_fraction for integral in used)
    tail_valid = profile.tail.valid and all(math.isfinite(integral.tail) for integral in used)

    bound = radial_decay_bound(profile, lowest_exponent(op))
    decay_passed = math.isfinite(bound.sup) and bound.variation < tol.decay_stability and tail_valid

    report = CertificateReport(
        pohozaev_residual=pohozaev,
        nehari_residual=nehari,
        action_relation_residual=relation,
        pure_power_residual=pure,
        action=action(profile, spec, op),
        positivity=positivity_verdict(profile, decay_du),
        decay_bound=bound.sup,
        decay_variation=bound.variation,
        tail_valid=tail_valid,
        tail_fraction=tail_fraction,
        pohozaev_passed=pohozaev < tol.pohozaev,
        nehari_passed=nehari < tol.nehari,
        action_relation_passed=relation < tol.action_relation,
        decay_passed=decay_passed,
    )
    logger.debug("profile_certified", passed=report.passed, pohozaev=pohozaev, nehari=nehari)
    return report
