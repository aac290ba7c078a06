"""Divergence measures between the two compared agents and the
three-branch search reward built from them.

``action_divergence`` and ``state_divergence`` are squared Euclidean
distances; the search reward pays terminal state contrast (weighted by
``alpha``), a horizon heuristic (weighted by ``beta``), or per-step action
contrast, depending on where the episode is.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .core import ActionVector, StateVector
from .errors import InvalidInputError

Heuristic = Callable[[StateVector, StateVector], float]


def _default_heuristic(s1: StateVector, s2: StateVector) -> float:
    return state_divergence(s1, s2)


@dataclass(frozen=True)
class RewardConfig:
    """Weights and horizon for the search reward.

    ``heuristic`` scores non-terminal episodes truncated at the horizon;
    the default is the state divergence of the final agent states.
    """

    alpha: float = 10.0
    beta: float = 5.0
    horizon: int = 100
    heuristic: Heuristic = field(default=_default_heuristic, compare=False)

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise InvalidInputError("alpha and beta must be non-negative")
        if self.horizon < 1:
            raise InvalidInputError("horizon must be >= 1")


def _sq_dist(a: tuple[float, ...], b: tuple[float, ...], what: str) -> float:
    if len(a) != len(b):
        raise InvalidInputError(f"{what}: length mismatch {len(a)} vs {len(b)}")
    total = 0.0
    for x, y in zip(a, b):
        d = x - y
        total += d * d
    return total


def action_divergence(a1: ActionVector, a2: ActionVector) -> float:
    """Squared Euclidean distance between two action vectors."""
    return _sq_dist(a1.values, a2.values, "action_divergence")


def state_divergence(s1: StateVector, s2: StateVector) -> float:
    """Squared Euclidean distance between two state vectors."""
    return _sq_dist(s1.values, s2.values, "state_divergence")


def search_reward(
    agent_states: tuple[StateVector, StateVector],
    executed_actions: tuple[ActionVector, ActionVector],
    either_terminal: bool,
    step_count: int,
    cfg: RewardConfig,
) -> float:
    """Three-branch search reward.

    Terminal episodes (either agent absorbed) pay ``alpha * d_s`` of the
    final agent states; episodes truncated at the horizon pay
    ``beta * heuristic``; mid-trajectory steps pay the action divergence
    of the executed actions. A terminal state exactly at the horizon
    resolves to the terminal branch.
    """
    if either_terminal:
        return cfg.alpha * state_divergence(*agent_states)
    if step_count >= cfg.horizon:
        return cfg.beta * cfg.heuristic(*agent_states)
    return action_divergence(*executed_actions)
