"""Hungry-Thirsty gridworld.

A 4x4 grid with wall-blocked edges; food and water sit in two distinct
corners. The agent must drink (only possible on the water tile) before it is
allowed to eat, and it counts as not hungry only on steps where it just ate.
After drinking, thirst comes back with probability 0.1 on every later step.
The true objective is fitness: the number of steps per 200-step episode spent
not hungry. The four-valued reward over the (hungry, thirsty) flags is the
shaping surface a user tunes at runtime.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass

from .errors import InvalidValueError, StepAfterDoneError

GRID_WIDTH = 4
GRID_HEIGHT = 4
EPISODE_CAP = 200
THIRST_PROBABILITY = 0.1

N_CELLS = GRID_WIDTH * GRID_HEIGHT
N_STATES = N_CELLS * 2 * 2

Cell = tuple[int, int]
Edge = tuple[Cell, Cell]

CORNERS: tuple[Cell, ...] = (
    (0, 0),
    (GRID_WIDTH - 1, 0),
    (0, GRID_HEIGHT - 1),
    (GRID_WIDTH - 1, GRID_HEIGHT - 1),
)

# Pinned default obstacle layout: six blocked edges forming a ring with an
# inner pocket, leaving every cell reachable (overridable via config).
DEFAULT_WALLS: frozenset[Edge] = frozenset(
    {
        ((1, 0), (1, 1)),
        ((2, 0), (2, 1)),
        ((1, 2), (1, 3)),
        ((2, 2), (2, 3)),
        ((1, 1), (2, 1)),
        ((1, 2), (2, 2)),
    }
)


class Action(enum.Enum):
    """Six actions; enum order is the fixed tie-break order for policies."""

    UP = 0
    DOWN = 1
    LEFT = 2
    RIGHT = 3
    EAT = 4
    DRINK = 5


_MOVES: dict[Action, tuple[int, int]] = {
    Action.UP: (0, -1),
    Action.DOWN: (0, 1),
    Action.LEFT: (-1, 0),
    Action.RIGHT: (1, 0),
}


def _normalize_edge(a: Cell, b: Cell) -> Edge:
    if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
        raise InvalidValueError(f"wall must join adjacent cells: {a} {b}")
    for cell in (a, b):
        if not (0 <= cell[0] < GRID_WIDTH and 0 <= cell[1] < GRID_HEIGHT):
            raise InvalidValueError(f"wall endpoint outside grid: {cell}")
    return (a, b) if (a[1], a[0]) <= (b[1], b[0]) else (b, a)


def _clamp_unit(value: float) -> float:
    return max(-1.0, min(1.0, float(value)))


@dataclass(frozen=True)
class RewardVector:
    """Reward per (hungry, thirsty) combination, each clamped to [-1, 1]."""

    not_hungry_not_thirsty: float = 1.0  # R1
    hungry_not_thirsty: float = -0.1  # R2
    not_hungry_thirsty: float = 0.3  # R3
    hungry_thirsty: float = -1.0  # R4

    def __post_init__(self) -> None:
        for name in (
            "not_hungry_not_thirsty",
            "hungry_not_thirsty",
            "not_hungry_thirsty",
            "hungry_thirsty",
        ):
            object.__setattr__(self, name, _clamp_unit(getattr(self, name)))

    def for_flags(self, hungry: bool, thirsty: bool) -> float:
        if hungry:
            return self.hungry_thirsty if thirsty else self.hungry_not_thirsty
        return self.not_hungry_thirsty if thirsty else self.not_hungry_not_thirsty


@dataclass(frozen=True)
class EnvState:
    pos: Cell
    hungry: bool
    thirsty: bool
    step_count: int = 0


def state_index(state: EnvState) -> int:
    """Dense index over the 64-state space: position x hungry x thirsty."""
    x, y = state.pos
    return ((y * GRID_WIDTH + x) * 2 + int(state.hungry)) * 2 + int(state.thirsty)


@dataclass(frozen=True)
class GridConfig:
    walls: frozenset[Edge] = DEFAULT_WALLS
    food_corner: Cell | str = "random"
    water_corner: Cell | str = "random"
    seed: int = 0
    randomize_corners_per_episode: bool = False

    def __post_init__(self) -> None:
        normalized = frozenset(_normalize_edge(a, b) for a, b in self.walls)
        object.__setattr__(self, "walls", normalized)
        for name in ("food_corner", "water_corner"):
            corner = getattr(self, name)
            if corner == "random":
                continue
            corner = (int(corner[0]), int(corner[1]))
            if corner not in CORNERS:
                raise InvalidValueError(f"{name} must be a grid corner, got {corner}")
            object.__setattr__(self, name, corner)
        if (
            self.food_corner != "random"
            and self.food_corner == self.water_corner
        ):
            raise InvalidValueError("food and water corners must differ")


def grid_config_from_dict(raw: dict) -> GridConfig:
    walls = raw.get("walls")
    if walls is None:
        wall_set: frozenset[Edge] = DEFAULT_WALLS
    else:
        wall_set = frozenset(
            _normalize_edge((x1, y1), (x2, y2)) for x1, y1, x2, y2 in walls
        )

    def corner(value) -> Cell | str:
        if value is None or value == "random":
            return "random"
        return (value[0], value[1])

    return GridConfig(
        walls=wall_set,
        food_corner=corner(raw.get("food_corner")),
        water_corner=corner(raw.get("water_corner")),
        seed=int(raw.get("seed", 0)),
        randomize_corners_per_episode=bool(raw.get("randomize_corners_per_episode", False)),
    )


def load_grid_config(path: str) -> GridConfig:
    with open(path, encoding="utf-8") as fh:
        return grid_config_from_dict(json.load(fh))


def _reachable(walls: frozenset[Edge], start: Cell) -> set[Cell]:
    seen = {start}
    frontier = [start]
    while frontier:
        x, y = frontier.pop()
        for dx, dy in _MOVES.values():
            nxt = (x + dx, y + dy)
            if not (0 <= nxt[0] < GRID_WIDTH and 0 <= nxt[1] < GRID_HEIGHT):
                continue
            if _normalize_edge((x, y), nxt) in walls or nxt in seen:
                continue
            seen.add(nxt)
            frontier.append(nxt)
    return seen


class HungryThirsty:
    """Environment instance: owns the wall layout, corners, and its RNG."""

    def __init__(self, config: GridConfig, rng: random.Random | None = None) -> None:
        self.config = config
        self.rng = rng if rng is not None else random.Random(config.seed)
        self.food_corner: Cell = (0, 0)
        self.water_corner: Cell = (0, 0)
        self._draw_corners()

    def _draw_corners(self) -> None:
        food = self.config.food_corner
        water = self.config.water_corner
        if food == "random":
            food = self.rng.choice(CORNERS)
        if water == "random":
            choices = [c for c in CORNERS if c != food]
            water = self.rng.choice(choices)
        if food == water:
            raise InvalidValueError("food and water corners must differ")
        if water not in _reachable(self.config.walls, food):
            raise InvalidValueError("walls disconnect food from water")
        self.food_corner = food
        self.water_corner = water

    def reset(self, rng: random.Random | None = None) -> EnvState:
        """Start an episode: hungry, thirsty, at a uniformly random non-corner cell."""
        rng = rng if rng is not None else self.rng
        if self.config.randomize_corners_per_episode:
            self._draw_corners()
        cells = [
            (x, y)
            for y in range(GRID_HEIGHT)
            for x in range(GRID_WIDTH)
            if (x, y) not in CORNERS
        ]
        return EnvState(pos=rng.choice(cells), hungry=True, thirsty=True, step_count=0)

    def blocked(self, a: Cell, b: Cell) -> bool:
        return _normalize_edge(a, b) in self.config.walls

    def step(
        self,
        state: EnvState,
        action: Action,
        rewards: RewardVector,
        rng: random.Random | None = None,
    ) -> tuple[EnvState, float, bool]:
        """One transition. Returns (next state, reward, done).

        Order: move; resolve eat (needs food tile and no thirst); resolve
        drink (needs water tile); re-arise thirst at 10% unless this step was
        a successful drink; reward evaluated on the new flags.
        """
        if state.step_count >= EPISODE_CAP:
            raise StepAfterDoneError(f"episode finished after {EPISODE_CAP} steps")
        rng = rng if rng is not None else self.rng

        pos = state.pos
        if action in _MOVES:
            dx, dy = _MOVES[action]
            target = (pos[0] + dx, pos[1] + dy)
            in_grid = 0 <= target[0] < GRID_WIDTH and 0 <= target[1] < GRID_HEIGHT
            if in_grid and not self.blocked(pos, target):
                pos = target

        ate = action is Action.EAT and pos == self.food_corner and not state.thirsty
        hungry = not ate

        drank = action is Action.DRINK and pos == self.water_corner
        thirsty = False if drank else state.thirsty
        if not thirsty and not drank and rng.random() < THIRST_PROBABILITY:
            thirsty = True

        reward = rewards.for_flags(hungry, thirsty)
        step_count = state.step_count + 1
        next_state = EnvState(pos=pos, hungry=hungry, thirsty=thirsty, step_count=step_count)
        return next_state, reward, step_count >= EPISODE_CAP


def fitness(states: list[EnvState]) -> int:
    """Steps spent not hungry over the episode's post-transition states."""
    return sum(1 for state in states if not state.hungry)


def discounted_return(rewards: list[float], gamma: float) -> float:
    """Realized discounted return: sum of gamma^t * r_t."""
    if not 0.0 <= gamma < 1.0:
        raise InvalidValueError("gamma must lie in [0, 1)")
    total = 0.0
    weight = 1.0
    for reward in rewards:
        total += weight * reward
        weight *= gamma
    return total
