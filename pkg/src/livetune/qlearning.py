"""Tabular Q-learning over the 64-state gridworld.

The table is a dense 64x6 float array initialized to zeros. Action selection
is epsilon-greedy; greedy ties break by the fixed action-enum order, so an
all-zero table yields Up everywhere.
"""

from __future__ import annotations

import random

import numpy as np

from .errors import InvalidValueError
from .hungry_thirsty import N_STATES, Action, EnvState, state_index

N_ACTIONS = len(Action)
_ACTIONS = list(Action)


class QTable:
    """Dense state-action value table, 64 states x 6 actions, zero-initialized."""

    def __init__(self) -> None:
        self.values = np.zeros((N_STATES, N_ACTIONS), dtype=np.float64)

    def reset(self) -> None:
        self.values.fill(0.0)

    def greedy_action(self, state: EnvState) -> Action:
        row = self.values[state_index(state)]
        return _ACTIONS[int(np.argmax(row))]  # argmax keeps the first maximum

    def copy(self) -> "QTable":
        clone = QTable()
        clone.values = self.values.copy()
        return clone


def q_update(
    q: QTable,
    state: EnvState,
    action: Action,
    reward: float,
    next_state: EnvState,
    alpha: float,
    gamma: float,
) -> None:
    """One temporal-difference backup on Q(state, action); nothing else moves."""
    if not 0.0 < alpha <= 1.0:
        raise InvalidValueError(f"alpha must lie in (0, 1], got {alpha}")
    if not 0.0 <= gamma < 1.0:
        raise InvalidValueError(f"gamma must lie in [0, 1), got {gamma}")
    s = state_index(state)
    a = action.value
    target = reward + gamma * float(q.values[state_index(next_state)].max())
    q.values[s, a] += alpha * (target - float(q.values[s, a]))


def epsilon_greedy(
    q: QTable, state: EnvState, epsilon: float, rng: random.Random
) -> Action:
    """Uniformly random action with probability epsilon, else the greedy one."""
    if rng.random() < epsilon:
        return _ACTIONS[rng.randrange(N_ACTIONS)]
    return q.greedy_action(state)


def greedy_policy(q: QTable) -> dict[int, Action]:
    """Argmax action per state index, ties broken by action-enum order."""
    return {
        s: _ACTIONS[int(np.argmax(q.values[s]))] for s in range(N_STATES)
    }
