"""Exception and warning classes shared across the package."""


class SaeError(Exception):
    """Base class for all errors raised by this package."""


class PoleError(SaeError, ValueError):
    """Argument sits on (or within tolerance of) a pole of a gamma-type function."""


class ParameterPole(SaeError, ValueError):
    """A hypergeometric parameter hits a value where the function is undefined."""


class FallToCenterError(SaeError, ValueError):
    """2 m V0 >= (l + 1/2)^2: the index P is not a positive real number."""


class DomainError(SaeError, ValueError):
    """Operation called outside the parameter domain where it is defined."""


class RegimeError(DomainError):
    """Requested branch does not exist in the current regime."""


class InfiniteTau(SaeError, ValueError):
    """A finite extension parameter was required but the point at infinity was given."""


class DegenerateBranch(SaeError, ValueError):
    """Closed-form normalization degenerates on the pure tau = 0 / tau = inf branches."""


class StepError(SaeError, ValueError):
    """Integration grid too coarse for the local wavelength."""


class NoSignChange(SaeError, ValueError):
    """Bracket endpoints do not straddle a root."""


class GridMismatch(SaeError, ValueError):
    """Two sampled functions live on different grids."""


class SolverError(SaeError, RuntimeError):
    """Root finder failed to converge."""


class PhysicalityWarning(UserWarning):
    """tau > 0 is mathematically well posed but excluded on physical grounds."""
