"""Exception hierarchy for revcurv.

Every error raised on purpose by the package derives from
:class:`RevcurvError` so that the report runner can tell expected numeric
or configuration failures apart from programming errors.
"""

from __future__ import annotations


class RevcurvError(Exception):
    """Base class for all revcurv errors."""


class ConfigError(RevcurvError):
    """A run configuration or parameter set violates its preconditions."""


class DomainError(RevcurvError, ValueError):
    """An argument lies outside the domain of the function."""


class UnsupportedOrderError(RevcurvError, ValueError):
    """A derivative order beyond what the evaluator supports was requested."""


class QuadratureError(RevcurvError):
    """Quadrature did not reach the requested accuracy."""

    def __init__(self, message: str, residual: float) -> None:
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class ConstructionError(RevcurvError):
    """The profile curve cannot be parametrized by arclength."""

    def __init__(self, t: float, slope: float, reason: str | None = None) -> None:
        if reason is None:
            reason = f"|f'| = {slope:.17g} exceeds 1 at t = {t:.17g}; the perturbation slope bound failed"
        super().__init__(reason)
        self.t = t
        self.slope = slope


class PoleError(RevcurvError):
    """Curvature was requested at (or numerically at) a pole of the surface."""


class ConsistencyError(RevcurvError):
    """Two independent evaluations of the same quantity disagree."""


class PreconditionError(RevcurvError):
    """An operation was called on an object it does not apply to."""


class IntegrationError(RevcurvError):
    """The ODE integrator failed."""


class NonUniqueGeodesicError(RevcurvError):
    """Antipodal points have a family of minimizing geodesics."""
