"""Typed live variables and one-shot triggers.

Transport-independent semantics: a :class:`LiveVar` holds one typed scalar
that a listener thread may overwrite while an optimization loop reads it; a
:class:`LiveTrigger` is a boolean flag that reads true exactly once per
arming. All per-handle operations are atomic with respect to one another.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass

from .errors import InvalidValueError, TypeMismatchError

_INT64_MIN = -(2**63)
_INT64_MAX = 2**63 - 1

Scalar = int | float | bool | str


class Kind(enum.Enum):
    """Value kinds carried by live variables and wire messages."""

    INT = "int"
    FLOAT = "float"
    BOOL = "bool"
    STR = "str"

    @classmethod
    def from_name(cls, name: str) -> "Kind":
        for kind in cls:
            if kind.value == name:
                return kind
        raise InvalidValueError(f"unknown kind name: {name!r}")


def infer_kind(value: Scalar) -> Kind:
    # bool must be tested before int: bool is an int subclass.
    if isinstance(value, bool):
        return Kind.BOOL
    if isinstance(value, int):
        return Kind.INT
    if isinstance(value, float):
        return Kind.FLOAT
    if isinstance(value, str):
        return Kind.STR
    raise InvalidValueError(f"unsupported payload type: {type(value).__name__}")


@dataclass(frozen=True)
class LiveValue:
    """A typed scalar: kind plus a payload that always matches it.

    Int payloads are confined to signed 64-bit range; float payloads must be
    finite. Violations raise :class:`InvalidValueError` at construction.
    """

    kind: Kind
    payload: Scalar

    def __post_init__(self) -> None:
        if infer_kind(self.payload) is not self.kind:
            raise InvalidValueError(
                f"payload {self.payload!r} is not of kind {self.kind.value}"
            )
        if self.kind is Kind.FLOAT and not math.isfinite(self.payload):
            raise InvalidValueError("non-finite float rejected")
        if self.kind is Kind.INT and not _INT64_MIN <= self.payload <= _INT64_MAX:
            raise InvalidValueError("int payload outside signed 64-bit range")

    @classmethod
    def of(cls, value: "Scalar | LiveValue") -> "LiveValue":
        if isinstance(value, LiveValue):
            return value
        return cls(infer_kind(value), value)


def coerce(value: LiveValue, target: Kind) -> LiveValue:
    """Coerce *value* to *target* kind.

    The only permitted cross-kind coercion is Int into Float (a client typing
    ``1`` for a learning rate must not be rejected). Everything else raises
    :class:`TypeMismatchError`.
    """
    if value.kind is target:
        return value
    if value.kind is Kind.INT and target is Kind.FLOAT:
        return LiveValue(Kind.FLOAT, float(value.payload))
    raise TypeMismatchError(
        f"cannot set {value.kind.value} value into {target.value} variable"
    )


class LiveVar:
    """A live variable: immutable tag, fixed kind, atomically replaceable value.

    One writer (the TCP listener) and any number of readers may operate
    concurrently; ``set_value``/``current``/``is_changed`` each take the
    per-handle lock, so reads never observe a torn value and a set racing
    with ``is_changed`` is seen by that call or the next, never lost.
    """

    def __init__(self, tag: str, initial: Scalar | LiveValue) -> None:
        if not tag:
            raise InvalidValueError("tag must be a non-empty string")
        value = LiveValue.of(initial)
        self._tag = tag
        self._kind = value.kind
        self._lock = threading.Lock()
        self._value = value
        self._dirty = False
        self._generation = 0
        self.port = 0  # assigned when a listener is wired up

    @property
    def tag(self) -> str:
        return self._tag

    @property
    def kind(self) -> Kind:
        return self._kind

    @property
    def generation(self) -> int:
        with self._lock:
            return self._generation

    def current(self) -> Scalar:
        """Most recently committed payload. Does not clear the change flag."""
        with self._lock:
            return self._value.payload

    def __call__(self) -> Scalar:
        return self.current()

    def set_value(self, value: Scalar | LiveValue) -> None:
        """Atomically replace the value; marks the variable changed.

        Raises :class:`TypeMismatchError` (value dropped, old one retained)
        or :class:`InvalidValueError` (non-finite float).
        """
        committed = coerce(LiveValue.of(value), self._kind)
        with self._lock:
            self._value = committed
            self._dirty = True
            self._generation += 1

    def is_changed(self) -> bool:
        """Atomic test-and-clear of the change flag.

        Multiple sets between polls collapse to one change signal; the loop
        rebuilds from the latest value only.
        """
        with self._lock:
            dirty = self._dirty
            self._dirty = False
            return dirty


class LiveTrigger:
    """One-shot boolean flag: consume returns true exactly once per arming."""

    def __init__(self, tag: str) -> None:
        if not tag:
            raise InvalidValueError("tag must be a non-empty string")
        self._tag = tag
        self._lock = threading.Lock()
        self._armed = False
        self.port = 0

    @property
    def tag(self) -> str:
        return self._tag

    @property
    def armed(self) -> bool:
        with self._lock:
            return self._armed

    def fire(self) -> bool:
        """Arm the trigger. Firing while armed is a no-op.

        Returns True iff this call performed the disarmed-to-armed transition.
        """
        with self._lock:
            transitioned = not self._armed
            self._armed = True
            return transitioned

    def consume(self) -> bool:
        """Atomic test-and-disarm: true exactly once per arming."""
        with self._lock:
            armed = self._armed
            self._armed = False
            return armed
