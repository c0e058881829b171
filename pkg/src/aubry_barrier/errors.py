"""Error taxonomy shared by all pipeline stages.

Every computational failure mode raised by this package derives from
:class:`AubryBarrierError`, so callers (and the CLI dispatcher) can map
them to diagnostics uniformly.
"""


class AubryBarrierError(Exception):
    """Base class for computational errors raised by this package."""


class TwistViolation(AubryBarrierError):
    """A monotone root-find in the fibre direction met non-monotone data."""


class BandExceeded(AubryBarrierError):
    """A displacement band was too narrow for the requested computation."""


class NonMongeInput(AubryBarrierError):
    """A table violated the row/column exchange (Monge) inequality."""


class IncompatibleGrids(AubryBarrierError):
    """Two tables with different circle resolutions were combined."""


class ToleranceNotAchievable(AubryBarrierError):
    """The requested budget needs parameters beyond the configured caps."""
