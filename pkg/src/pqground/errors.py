"""Error hierarchy for pqground.

Every failure the library reports on purpose derives from PqGroundError.
Commands translate these into console messages and process exit codes.
"""

from typing import Any


class PqGroundError(Exception):
    """Base exception for all pqground errors.

    Attributes:
        message: Human-readable error message
        error_code: Machine-readable error code
        exit_code: Process exit code used by the CLI
        details: Additional error details
    """

    message: str = "An unexpected error occurred"
    error_code: str = "internal_error"
    exit_code: int = 1

    def __init__(
        self,
        message: str | None = None,
        error_code: str | None = None,
        details: dict[str, Any] | None = None,
    ) -> None:
        self.message = message or self.message
        self.error_code = error_code or self.error_code
        self.details = details or {}
        super().__init__(self.message)


class ConfigError(PqGroundError):
    """Raised when a run configuration cannot be parsed or validated.

    Example:
        raise ConfigError("Invalid config", details={"location": "operator.p"})
    """

    message = "Invalid configuration"
    error_code = "config_error"


class InvalidOperatorError(PqGroundError):
    """Raised when operator parameters violate 1 < p < q, p < N, beta > 0."""

    message = "Invalid operator"
    error_code = "invalid_operator"


class InvalidNonlinearityError(PqGroundError):
    """Raised when a nonlinearity specification is inconsistent."""

    message = "Invalid nonlinearity"
    error_code = "invalid_nonlinearity"


class CoefficientOverflowError(PqGroundError):
    """Raised when Born-Infeld chain coefficients leave the float range."""

    message = "Born-Infeld coefficient overflow"
    error_code = "coefficient_overflow"


class EvaluationError(PqGroundError):
    """Raised when g returns a non-finite value.

    Example:
        raise EvaluationError(details={"s": 1e300})
    """

    message = "Nonlinearity evaluation returned a non-finite value"
    error_code = "evaluation_error"

    def __init__(self, message: str | None = None, s: float | None = None, **kwargs: Any) -> None:
        details = kwargs.pop("details", {})
        if s is not None:
            details["s"] = s
        super().__init__(message=message, details=details, **kwargs)


class QuadratureError(PqGroundError):
    """Raised when adaptive quadrature of a primitive does not converge."""

    message = "Quadrature did not converge"
    error_code = "quadrature_error"

    def __init__(
        self,
        message: str | None = None,
        interval: tuple[float, float] | None = None,
        **kwargs: Any,
    ) -> None:
        details = kwargs.pop("details", {})
        if interval is not None:
            details["interval"] = list(interval)
        super().__init__(message=message, details=details, **kwargs)


class FluxInversionError(PqGroundError):
    """Raised when the flux cannot be inverted, which only happens for NaN input."""

    message = "Flux inversion failed"
    error_code = "flux_inversion_error"


class DomainError(PqGroundError):
    """Raised when an argument lies outside an operation's domain."""

    message = "Argument outside the admissible domain"
    error_code = "domain_error"


class SeedRejectedError(PqGroundError):
    """Raised when a mountain-pass seed has a nonpositive potential integral."""

    message = "Seed rejected: integral of G(z) is not positive"
    error_code = "seed_rejected"


class NoBracketError(PqGroundError):
    """Raised when the shooting scan yields no admissible ground-state candidate.

    Attributes:
        scan: Scan rows (u0, outcome, event radius) collected before failing
        rejected: Candidates that were bisected but failed certification
    """

    message = "No shooting bracket produced a certified solution"
    error_code = "no_bracket"
    exit_code = 2

    def __init__(
        self,
        message: str | None = None,
        scan: list[Any] | None = None,
        rejected: list[Any] | None = None,
        **kwargs: Any,
    ) -> None:
        self.scan = scan or []
        self.rejected = rejected or []
        details = kwargs.pop("details", {})
        details["scan_rows"] = len(self.scan)
        details["rejected_candidates"] = len(self.rejected)
        super().__init__(message=message, details=details, **kwargs)


class CertificationFailedError(PqGroundError):
    """Raised when a stored or computed profile fails certification."""

    message = "Certification failed"
    error_code = "certification_failed"
    exit_code = 3


class ArtifactError(PqGroundError):
    """Raised when a result file is missing or cannot be read back."""

    message = "Cannot read result file"
    error_code = "artifact_error"
