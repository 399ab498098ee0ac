"""Exception hierarchy shared by all modules.

Every numerical failure raised by the package derives from
:class:`NumericalError`; configuration problems raise :class:`ConfigError`.
The CLI maps the two families to distinct exit codes.
"""


class NlHirotaError(Exception):
    """Base class for all package errors."""


class ConfigError(NlHirotaError):
    """Invalid or inconsistent run configuration."""


class NumericalError(NlHirotaError):
    """Base class for failures of a numerical procedure."""


class DomainError(NumericalError, ValueError):
    """Argument outside the validated domain of a function."""


class PoleError(DomainError):
    """Evaluation at a pole (e.g. Gamma at a nonpositive integer)."""


class OnCutError(DomainError):
    """Point lies on a branch cut and no side was requested."""


class SectorError(DomainError):
    """Parameters outside the sector where the asymptotic analysis applies."""


class WindingError(SectorError):
    """The argument of 1 - r1 r2 winds too far (|Im vartheta| >= 1/2)."""


class SpectralSingularityError(NumericalError):
    """A Jost denominator (s11 or s22) is too close to zero."""


class IntegrationError(NumericalError):
    """ODE integration failed to reach the requested tolerance."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge."""


class CollocationError(NumericalError):
    """The discretized singular integral equation could not be solved."""


class BranchTrackingError(NumericalError):
    """The continuous logarithm of 1 - r1 r2 cannot be tracked (near-zero argument)."""
