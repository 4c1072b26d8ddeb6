"""Exception and warning classes."""


class LifeInfoError(Exception):
    """Base class for errors raised by lifeinfo."""


class NonFiniteIntegrand(LifeInfoError, ArithmeticError):
    """Integrand returned NaN or an infinity at an interior point."""


class NegativeDensity(LifeInfoError, ValueError):
    """A density evaluated clearly below zero."""


class NonConvergenceWarning(RuntimeWarning):
    """Adaptive quadrature ran out of subdivisions before meeting tolerance."""


class SpecialFunctionDomain(LifeInfoError, ValueError):
    pass


class InvalidTTE(LifeInfoError, ValueError):
    """Time-transform or accumulated hazards violate the TTE assumptions."""


class ZeroRegionProbability(LifeInfoError, ValueError):
    """The conditioning event has zero probability."""


class NotAProbabilityVector(LifeInfoError, ValueError):
    pass


class ZeroDenominator(LifeInfoError, ZeroDivisionError):
    pass


class NotSymmetricPair(LifeInfoError, ValueError):
    pass


class NotBLM(LifeInfoError, ValueError):
    """Model fails the bivariate lack-of-memory identity."""


class InvalidProbabilityOrder(LifeInfoError, ValueError):
    pass


class EnvelopeTooLoose(LifeInfoError, RuntimeError):
    """Rejection sampler acceptance rate fell below the allowed minimum."""
