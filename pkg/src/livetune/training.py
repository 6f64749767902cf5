"""Feedback-driven Q-learning loop wired to live variables.

Hyperparameters and the four reward components are live variables; the loop
re-reads any that changed at episode boundaries only, clamps them into their
domains (emitting a warning event when it does), and honors the reset/pause
triggers between episodes. Remote changes acknowledged during episode k are
therefore visible in episode k+1 at the latest, and the loop itself never
blocks on the control plane.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from typing import Callable, TextIO

from .core import LiveTrigger, LiveVar
from .directory import live_trigger, live_var
from .hungry_thirsty import (
    EPISODE_CAP,
    GRID_WIDTH,
    GridConfig,
    HungryThirsty,
    RewardVector,
)
from .qlearning import QTable, epsilon_greedy, q_update
from .telemetry import TelemetryBus

RL_VAR_TAGS = ("alpha", "gamma", "epsilon", "R1", "R2", "R3", "R4")
RL_TRIGGER_TAGS = ("reset_q", "pause")

# Domain bounds enforced on every read. alpha is (0, 1]; a zero learning
# rate would silently freeze the table, so the low clamp is a small positive.
_ALPHA_MIN, _ALPHA_MAX = 1e-6, 1.0
_GAMMA_MIN, _GAMMA_MAX = 0.0, 0.999999
_EPS_MIN, _EPS_MAX = 0.0, 1.0
_REWARD_MIN, _REWARD_MAX = -1.0, 1.0


@dataclass
class TrainerParams:
    """Live handles the training loop polls at episode boundaries."""

    alpha: LiveVar
    gamma: LiveVar
    epsilon: LiveVar
    r1: LiveVar
    r2: LiveVar
    r3: LiveVar
    r4: LiveVar
    reset_q: LiveTrigger
    pause: LiveTrigger

    def variables(self) -> dict[str, LiveVar]:
        return {
            "alpha": self.alpha,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
            "R1": self.r1,
            "R2": self.r2,
            "R3": self.r3,
            "R4": self.r4,
        }


def create_trainer_params(
    alpha: float = 0.1,
    gamma: float = 0.99,
    epsilon: float = 0.3,
    rewards: RewardVector = RewardVector(),
) -> TrainerParams:
    """Register the seven RL live variables and the two control triggers."""
    return TrainerParams(
        alpha=live_var("alpha", float(alpha)),
        gamma=live_var("gamma", float(gamma)),
        epsilon=live_var("epsilon", float(epsilon)),
        r1=live_var("R1", rewards.not_hungry_not_thirsty),
        r2=live_var("R2", rewards.hungry_not_thirsty),
        r3=live_var("R3", rewards.not_hungry_thirsty),
        r4=live_var("R4", rewards.hungry_thirsty),
        reset_q=live_trigger("reset_q"),
        pause=live_trigger("pause"),
    )


@dataclass(frozen=True)
class EpisodeMetrics:
    episode: int
    fitness: int
    discounted_return: float
    visit_counts: tuple[int, ...]  # 16 cells, row-major
    rewards: tuple[float, float, float, float]  # R1..R4 in effect
    alpha: float
    gamma: float
    epsilon: float

    def to_payload(self) -> dict:
        return {
            "episode": self.episode,
            "fitness": self.fitness,
            "discounted_return": self.discounted_return,
            "visit_counts": list(self.visit_counts),
            "rewards": {
                "R1": self.rewards[0],
                "R2": self.rewards[1],
                "R3": self.rewards[2],
                "R4": self.rewards[3],
            },
            "alpha": self.alpha,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
        }


@dataclass
class TrainingResult:
    q: QTable
    metrics: list[EpisodeMetrics]


class _BoundParams:
    """Local copies of the live values, refreshed when is_changed() fires."""

    _BOUNDS = {
        "alpha": (_ALPHA_MIN, _ALPHA_MAX),
        "gamma": (_GAMMA_MIN, _GAMMA_MAX),
        "epsilon": (_EPS_MIN, _EPS_MAX),
        "R1": (_REWARD_MIN, _REWARD_MAX),
        "R2": (_REWARD_MIN, _REWARD_MAX),
        "R3": (_REWARD_MIN, _REWARD_MAX),
        "R4": (_REWARD_MIN, _REWARD_MAX),
    }

    def __init__(self, params: TrainerParams, telemetry: TelemetryBus | None) -> None:
        self._vars = params.variables()
        self._telemetry = telemetry
        self.values: dict[str, float] = {}
        for tag, var in self._vars.items():
            self.values[tag] = self._clamped(tag, var.current())

    def _clamped(self, tag: str, value: float) -> float:
        low, high = self._BOUNDS[tag]
        clamped = min(max(float(value), low), high)
        if clamped != value and self._telemetry is not None:
            self._telemetry.emit(
                "warning",
                {
                    "message": f"{tag}={value} outside [{low}, {high}], clamped to {clamped}",
                    "tag": tag,
                    "value": value,
                    "clamped": clamped,
                },
            )
        return clamped

    def refresh_changed(self) -> None:
        for tag, var in self._vars.items():
            if var.is_changed():
                self.values[tag] = self._clamped(tag, var.current())

    def reward_vector(self) -> RewardVector:
        return RewardVector(
            not_hungry_not_thirsty=self.values["R1"],
            hungry_not_thirsty=self.values["R2"],
            not_hungry_thirsty=self.values["R3"],
            hungry_thirsty=self.values["R4"],
        )


def run_training(
    config: GridConfig,
    params: TrainerParams,
    episodes: int,
    seed: int = 0,
    telemetry: TelemetryBus | None = None,
    metrics_file: TextIO | None = None,
    epsilon_schedule: Callable[[int], float] | None = None,
    episode_delay: float = 0.0,
    on_episode: Callable[[EpisodeMetrics, QTable], None] | None = None,
) -> TrainingResult:
    """Train for the given number of episodes under live-tunable parameters.

    ``epsilon_schedule`` overrides the live epsilon variable for reproducible
    experiments; interactive runs leave it None and steer epsilon by hand.
    ``on_episode`` runs between episodes, after the episode's metrics are
    emitted and before the next boundary poll.
    """
    env = HungryThirsty(config, rng=random.Random(seed))
    agent_rng = random.Random(seed ^ 0x9E3779B9)
    q = QTable()
    bound = _BoundParams(params, telemetry)
    metrics_log: list[EpisodeMetrics] = []

    for episode in range(episodes):
        if params.reset_q.consume():
            q.reset()
        if params.pause.consume():
            while not params.pause.consume():
                time.sleep(0.05)
        bound.refresh_changed()

        alpha = bound.values["alpha"]
        gamma = bound.values["gamma"]
        epsilon = (
            float(epsilon_schedule(episode)) if epsilon_schedule else bound.values["epsilon"]
        )
        rewards = bound.reward_vector()

        state = env.reset()
        visit_counts = [0] * 16
        fitness = 0
        discounted = 0.0
        weight = 1.0
        done = False
        while not done:
            action = epsilon_greedy(q, state, epsilon, agent_rng)
            next_state, reward, done = env.step(state, action, rewards)
            q_update(q, state, action, reward, next_state, alpha, gamma)
            if not next_state.hungry:
                fitness += 1
            discounted += weight * reward
            weight *= gamma
            x, y = next_state.pos
            visit_counts[y * GRID_WIDTH + x] += 1
            state = next_state

        metrics = EpisodeMetrics(
            episode=episode,
            fitness=fitness,
            discounted_return=discounted,
            visit_counts=tuple(visit_counts),
            rewards=(
                rewards.not_hungry_not_thirsty,
                rewards.hungry_not_thirsty,
                rewards.not_hungry_thirsty,
                rewards.hungry_thirsty,
            ),
            alpha=alpha,
            gamma=gamma,
            epsilon=epsilon,
        )
        metrics_log.append(metrics)
        if telemetry is not None:
            telemetry.emit("episode", metrics.to_payload())
        if metrics_file is not None:
            metrics_file.write(json.dumps(metrics.to_payload()) + "\n")
            metrics_file.flush()
        if on_episode is not None:
            on_episode(metrics, q)
        if episode_delay > 0:
            time.sleep(episode_delay)

    return TrainingResult(q=q, metrics=metrics_log)


def reference_epsilon_schedule(episode: int) -> float:
    """Pinned decay for seeded experiments: 0.3 shrinking to a 0.05 floor."""
    return max(0.05, 0.3 * (0.9995**episode))


def reference_grid_config(seed: int = 7) -> GridConfig:
    """Pinned experiment layout: default walls, food (0,3), water (3,3)."""
    return GridConfig(food_corner=(0, 3), water_corner=(3, 3), seed=seed)


NAIVE_REWARDS = RewardVector(
    not_hungry_not_thirsty=1.0,
    hungry_not_thirsty=0.0,
    not_hungry_thirsty=1.0,
    hungry_thirsty=0.0,
)
