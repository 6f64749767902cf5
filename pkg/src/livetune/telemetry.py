"""In-process telemetry bus: single producer, fan-out to slow consumers.

The bus keeps a bounded replay window (drop-oldest) so a client connecting
mid-run sees recent history, and gives each subscriber a bounded queue. A
subscriber whose queue overflows is marked dead and dropped; events are
delivered to each client in emission order.
"""

from __future__ import annotations

import collections
import json
import queue
import threading
import time
from dataclasses import dataclass

REPLAY_LIMIT = 500
SUBSCRIBER_QUEUE_LIMIT = 2048

EVENT_KINDS = ("episode", "descent", "warning")


@dataclass(frozen=True)
class MetricEvent:
    kind: str
    payload: dict
    wall_time: float

    @classmethod
    def now(cls, kind: str, payload: dict) -> "MetricEvent":
        assert kind in EVENT_KINDS, kind
        return cls(kind=kind, payload=payload, wall_time=time.time())

    def to_json(self) -> str:
        return json.dumps(
            {"kind": self.kind, "payload": self.payload, "wall_time": self.wall_time},
            ensure_ascii=False,
            allow_nan=False,
        )


class Subscription:
    """One consumer's bounded view of the bus."""

    def __init__(self, bus: "TelemetryBus") -> None:
        self._bus = bus
        self._queue: queue.Queue[MetricEvent] = queue.Queue(SUBSCRIBER_QUEUE_LIMIT)
        self.closed = False

    def _offer(self, event: MetricEvent) -> None:
        try:
            self._queue.put_nowait(event)
        except queue.Full:
            self.closed = True

    def get(self, timeout: float | None = None) -> MetricEvent | None:
        """Next event, or None on timeout."""
        try:
            return self._queue.get(timeout=timeout)
        except queue.Empty:
            return None

    def close(self) -> None:
        self.closed = True
        self._bus._drop(self)


class TelemetryBus:
    def __init__(self, replay_limit: int = REPLAY_LIMIT) -> None:
        self._lock = threading.Lock()
        self._replay: collections.deque[MetricEvent] = collections.deque(maxlen=replay_limit)
        self._subscribers: list[Subscription] = []

    def publish(self, event: MetricEvent) -> None:
        with self._lock:
            self._replay.append(event)
            dead = []
            for sub in self._subscribers:
                sub._offer(event)
                if sub.closed:
                    dead.append(sub)
            for sub in dead:
                self._subscribers.remove(sub)

    def emit(self, kind: str, payload: dict) -> MetricEvent:
        event = MetricEvent.now(kind, payload)
        self.publish(event)
        return event

    def subscribe(self) -> Subscription:
        """New subscription, pre-seeded with the replay window."""
        sub = Subscription(self)
        with self._lock:
            for event in self._replay:
                sub._offer(event)
            self._subscribers.append(sub)
        return sub

    def _drop(self, sub: Subscription) -> None:
        with self._lock:
            if sub in self._subscribers:
                self._subscribers.remove(sub)

    @property
    def subscriber_count(self) -> int:
        with self._lock:
            return len(self._subscribers)
