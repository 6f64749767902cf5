"""Runtime parameter tuning over a TCP control plane.

Replace a constant with :func:`live_var` and an external client can change
it while the program runs; poll :meth:`LiveVar.is_changed` inside the loop
to react. A process-wide directory maps tags to listener ports so the
``tune`` CLI (and the HTTP gateway) can find every variable.
"""

from .core import Kind, LiveTrigger, LiveValue, LiveVar
from .directory import (
    Directory,
    DirectoryEntry,
    drop,
    get_directory,
    live_trigger,
    live_var,
    shutdown,
    start_directory,
    stop_directory,
)
from .errors import (
    AlreadyRunningError,
    DivergenceError,
    DuplicateTagError,
    InvalidValueError,
    LiveTuneError,
    PortUnavailableError,
    StepAfterDoneError,
    TypeMismatchError,
    UnknownTagError,
)

__version__ = "0.1.0"

__all__ = [
    "Kind",
    "LiveValue",
    "LiveVar",
    "LiveTrigger",
    "Directory",
    "DirectoryEntry",
    "live_var",
    "live_trigger",
    "drop",
    "start_directory",
    "stop_directory",
    "get_directory",
    "shutdown",
    "LiveTuneError",
    "DuplicateTagError",
    "InvalidValueError",
    "TypeMismatchError",
    "UnknownTagError",
    "AlreadyRunningError",
    "PortUnavailableError",
    "StepAfterDoneError",
    "DivergenceError",
    "__version__",
]
