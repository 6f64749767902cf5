"""Exception types shared across the package."""


class LiveTuneError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateTagError(LiveTuneError):
    """A tag is already claimed by another live variable in this process."""


class InvalidValueError(LiveTuneError):
    """Value rejected at construction or set (e.g. non-finite float)."""


class TypeMismatchError(LiveTuneError):
    """Incoming value kind cannot be coerced to the variable's kind."""


class UnknownTagError(LiveTuneError):
    """Tag not present in the directory."""


class AlreadyRunningError(LiveTuneError):
    """A directory is already running in this process."""


class PortUnavailableError(LiveTuneError):
    """Requested TCP port could not be bound."""


class StepAfterDoneError(LiveTuneError):
    """step() called on an episode that already hit the step cap."""


class DivergenceError(LiveTuneError):
    """Descent objective exceeded the divergence bound."""
