"""Exception types shared across the package."""


class FiegarchError(Exception):
    """Base class for all package-specific failures."""


class RootInsideDisk(FiegarchError):
    """A moving-average polynomial has a root on or inside the unit circle."""


class GammaPole(FiegarchError):
    """Gamma function evaluated at a non-positive integer."""


class QuadratureFailure(FiegarchError):
    """Adaptive quadrature could not reach the requested tolerance."""


class DivergentIntegral(FiegarchError):
    """An expectation integral diverges for the requested parameters."""


class NonStationary(FiegarchError):
    """Operation requires weak stationarity (d < 0.5)."""


class NumericOverflow(FiegarchError):
    """A conditional variance under/overflowed past double range."""


class NonConvergence(FiegarchError):
    """Optimizer exhausted its restart budget without converging."""


class NonPositiveDensity(FiegarchError):
    """A spectral density must be strictly positive at every test frequency."""
