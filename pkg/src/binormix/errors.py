"""Exception hierarchy shared by all binormix modules.

Every error raised on a documented contract violation derives from
:class:`BinormixError`, so callers can catch the package's failures with a
single except clause while still discriminating the specific condition.
"""


class BinormixError(Exception):
    """Base class for all binormix errors."""


class NotPositiveDefinite(BinormixError, ValueError):
    """A matrix required to be symmetric positive definite is not."""


class SingularAffine(BinormixError, ValueError):
    """The linear part of an affine map is singular."""


class EqualMeans(BinormixError, ValueError):
    """The two component means coincide; the pair geometry is undefined."""


class ProportionalCovariances(BinormixError, ValueError):
    """Codirectionality was queried for proportional covariances."""


class NotType1(BinormixError, ValueError):
    """A cusp was requested for a pair whose singular set has no cusp."""


class NotType2Canonical(BinormixError, ValueError):
    """Canonical parameters are not in the mean-on-first-axis orientation."""


class AlphaOutOfRange(BinormixError, ValueError):
    """A ridgeline parameter lies outside [0, 1]."""


class NewtonDivergence(BinormixError, RuntimeError):
    """No Newton seed converged; indicates a misconfigured search."""


class ParseError(BinormixError, ValueError):
    """Configuration text is not well-formed."""


class ValidationError(BinormixError, ValueError):
    """Configuration is well-formed but violates a field contract."""
