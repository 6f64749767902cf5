"""Gradient descent on the Rosenbrock function with a live learning rate.

Each iteration takes one step with the current optimizer, then polls the
learning-rate variable; when it changed, the optimizer object is rebuilt
from the new value (step-size state reset). The rebuild count is recorded so
exactly-one-rebuild-per-change is checkable.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

from .core import LiveVar
from .telemetry import TelemetryBus

DIVERGENCE_BOUND = 1e12


def rosenbrock(x: float, y: float) -> float:
    """f(x, y) = (1 - x)^2 + 100 (y - x^2)^2, minimum 0 at (1, 1)."""
    return (1.0 - x) ** 2 + 100.0 * (y - x * x) ** 2


def rosenbrock_gradient(x: float, y: float) -> tuple[float, float]:
    dx = -2.0 * (1.0 - x) - 400.0 * x * (y - x * x)
    dy = 200.0 * (y - x * x)
    return dx, dy


class GradientDescent:
    """Plain fixed-step optimizer; one instance per learning-rate regime."""

    def __init__(self, learning_rate: float) -> None:
        self.learning_rate = float(learning_rate)

    def step(self, point: tuple[float, float]) -> tuple[float, float]:
        x, y = point
        dx, dy = rosenbrock_gradient(x, y)
        return x - self.learning_rate * dx, y - self.learning_rate * dy


@dataclass(frozen=True)
class DescentRecord:
    iteration: int
    x: float
    y: float
    f: float
    learning_rate: float

    def to_payload(self) -> dict:
        return {
            "iteration": self.iteration,
            "x": self.x,
            "y": self.y,
            "f": self.f,
            "learning_rate": self.learning_rate,
        }


@dataclass
class DescentResult:
    trajectory: list[DescentRecord]
    rebuilds: int
    diverged: bool

    @property
    def final(self) -> DescentRecord:
        return self.trajectory[-1]


def run_descent(
    lr_var: LiveVar,
    start: tuple[float, float] = (-1.5, 1.5),
    iterations: int = 1000,
    telemetry: TelemetryBus | None = None,
    iteration_delay: float = 0.0,
    optimizer_factory: Callable[[float], GradientDescent] = GradientDescent,
    on_iteration: Callable[[DescentRecord], None] | None = None,
) -> DescentResult:
    """Iterate gradient descent while honoring live learning-rate changes.

    Halts with a diagnostic (diverged=True, warning event) when |f| exceeds
    the divergence bound.
    """
    optimizer = optimizer_factory(lr_var.current())
    rebuilds = 0
    point = (float(start[0]), float(start[1]))
    trajectory: list[DescentRecord] = []

    for iteration in range(iterations):
        point = optimizer.step(point)
        value = rosenbrock(*point)
        record = DescentRecord(
            iteration=iteration,
            x=point[0],
            y=point[1],
            f=value,
            learning_rate=optimizer.learning_rate,
        )
        trajectory.append(record)
        if telemetry is not None:
            telemetry.emit("descent", record.to_payload())
        if on_iteration is not None:
            on_iteration(record)

        if not math.isfinite(value) or abs(value) > DIVERGENCE_BOUND:
            if telemetry is not None:
                telemetry.emit(
                    "warning",
                    {
                        "message": f"descent diverged at iteration {iteration}: f={value!r}",
                        "tag": lr_var.tag,
                        "value": optimizer.learning_rate,
                    },
                )
            return DescentResult(trajectory=trajectory, rebuilds=rebuilds, diverged=True)

        if lr_var.is_changed():
            optimizer = optimizer_factory(lr_var.current())
            rebuilds += 1
        if iteration_delay > 0:
            time.sleep(iteration_delay)

    return DescentResult(trajectory=trajectory, rebuilds=rebuilds, diverged=False)
