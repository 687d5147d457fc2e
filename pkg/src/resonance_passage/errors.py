"""Exception hierarchy shared by every module of the package."""


class ResonanceError(Exception):
    """Base class for all package errors."""


class ConfigurationError(ResonanceError, ValueError):
    """Invalid model, window or run configuration."""


class DegenerateResonanceError(ConfigurationError):
    """The frequency crosses zero with (numerically) vanishing slope."""


class DomainError(ResonanceError, ValueError):
    """An (I, tau) coordinate left the model's domain box."""

    def __init__(self, coordinate, value, bounds):
        self.coordinate = coordinate
        self.value = value
        self.bounds = bounds
        super().__init__(f"{coordinate}={value!r} outside domain [{bounds[0]}, {bounds[1]}]")


class ResonanceSingularityError(ResonanceError, ArithmeticError):
    """A 1/omega quantity was requested at (or too near) the resonance."""

    def __init__(self, tau, omega):
        self.tau = tau
        self.omega = omega
        super().__init__(f"evaluation at resonance: tau={tau!r}, omega(tau)={omega!r}")


class AccuracyError(ResonanceError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, estimate=None, abserr=None):
        self.estimate = estimate
        self.abserr = abserr
        super().__init__(f"{message} (estimate={estimate!r}, abserr={abserr!r})")


class TrajectoryError(ResonanceError):
    """Reference integration left the domain box."""

    def __init__(self, message, last_state=None):
        self.last_state = last_state
        super().__init__(message)


class BlowUpError(TrajectoryError):
    """Reference integration produced a non-finite state."""


class SweepError(ResonanceError):
    """A sweep cell failed; carries its coordinates and the partial table."""

    def __init__(self, eps, phi, cause, partial=None):
        self.eps = eps
        self.phi = phi
        self.cause = cause
        self.partial = partial
        super().__init__(f"sweep cell eps={eps!r}, phi={phi!r} failed: {cause}")
