"""Value types shared by every module: vectors, env actions, step records,
trajectories, and agent pairs.

All types here are immutable after construction and reject non-finite
numbers up front, so they can be handed between workers freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvalidInputError


def _as_finite_tuple(values: Iterable[float], what: str) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    for v in out:
        if not math.isfinite(v):
            raise InvalidInputError(f"{what} contains non-finite entry {v!r}")
    return out


@dataclass(frozen=True)
class ActionVector:
    """Continuous agent action (for crowd navigation: a 2-d velocity command)."""

    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", _as_finite_tuple(self.values, "ActionVector"))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class StateVector:
    """Continuous agent state (for crowd navigation: a 2-d robot position)."""

    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", _as_finite_tuple(self.values, "StateVector"))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class EnvAction:
    """One choice from the discrete environment-perturbation set of size M."""

    index: int
    set_size: int

    def __post_init__(self):
        if not (0 <= self.index < self.set_size):
            raise InvalidInputError(
                f"environment action index {self.index} out of range [0, {self.set_size})"
            )


@dataclass(frozen=True)
class StepRecord:
    """Everything recorded at one simulation step, enough to verify a replay."""

    t: int
    env_action: EnvAction
    reward: float
    agent_actions: tuple[ActionVector, ActionVector]
    agent_states: tuple[StateVector, StateVector]

    def __post_init__(self):
        if self.t < 0:
            raise InvalidInputError(f"step index must be >= 0, got {self.t}")
        if not math.isfinite(self.reward):
            raise InvalidInputError("step reward must be finite")


@dataclass(frozen=True)
class Trajectory:
    """An environment-action sequence plus its reward accounting.

    ``total_reward`` is always the exact sum of per-step rewards and the
    terminal reward; construction recomputes and enforces it.
    """

    steps: tuple[StepRecord, ...]
    terminal_reward: float
    total_reward: float
    seed: int
    pair: tuple[str, str]
    init_state_id: str
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        expected = trajectory_total_reward(self.steps, self.terminal_reward)
        if self.total_reward != expected:
            raise InvalidInputError(
                f"total_reward {self.total_reward!r} != step sum + terminal {expected!r}"
            )

    def env_action_indices(self) -> tuple[int, ...]:
        return tuple(s.env_action.index for s in self.steps)


@dataclass(frozen=True, order=True)
class AgentPair:
    """Canonical unordered pair of agent ids (first < second)."""

    first: str
    second: str

    def __post_init__(self):
        if self.first == self.second:
            raise InvalidInputError(f"agent pair must contain distinct ids: {self.first!r}")
        if self.first > self.second:
            raise InvalidInputError(
                f"agent pair not canonical: {self.first!r} > {self.second!r}"
            )

    @classmethod
    def of(cls, a: str, b: str) -> "AgentPair":
        return cls(min(a, b), max(a, b))


def enumerate_pairs(agent_ids: Sequence[str]) -> list[AgentPair]:
    """All N(N-1)/2 canonical agent pairs, lexicographically ordered."""
    ids = list(agent_ids)
    if len(ids) < 2:
        raise InvalidInputError("need at least 2 agent ids to enumerate pairs")
    if len(set(ids)) != len(ids):
        raise InvalidInputError("agent ids must be distinct")
    ordered = sorted(ids)
    return [
        AgentPair(ordered[i], ordered[j])
        for i in range(len(ordered))
        for j in range(i + 1, len(ordered))
    ]


def trajectory_total_reward(steps: Iterable[StepRecord], terminal_reward: float) -> float:
    """Sum of per-step rewards plus the terminal reward."""
    if not math.isfinite(terminal_reward):
        raise InvalidInputError("terminal reward must be finite")
    total = 0.0
    for s in steps:
        total += s.reward
    return total + float(terminal_reward)
