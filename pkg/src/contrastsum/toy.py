"""Tiny deterministic coupled environment for exercising the search.

The environment carries a scalar context that each discrete action nudges;
agents respond to the context through smooth nonlinear response curves, so
different parameter sets produce genuinely different divergence
landscapes. Small enough that every action sequence can be enumerated.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .core import ActionVector, StateVector
from .errors import ConfigurationError


@dataclass(frozen=True)
class ToyPolicy:
    name: str
    gain: float
    bias: float

    def respond(self, context: float) -> float:
        return math.sin(self.gain * context + self.bias)


@dataclass(frozen=True)
class ToyInitialState:
    id: str
    context: float = 0.0
    agent_position: float = 0.0


@dataclass(frozen=True)
class ToyInstanceState:
    context: float
    agent_position: float
    absorbed: bool


class ToyEnvironment:
    """Scalar-context environment with M discrete nudges."""

    action_dim = 1

    def __init__(self, nudges: tuple[float, ...], absorb_at: float | None = None):
        if not nudges:
            raise ConfigurationError("need at least one environment action")
        self.nudges = tuple(float(n) for n in nudges)
        self.absorb_at = absorb_at

    @property
    def num_env_actions(self) -> int:
        return len(self.nudges)

    def initial_state(self, s_init: ToyInitialState) -> ToyInstanceState:
        return ToyInstanceState(
            context=s_init.context, agent_position=s_init.agent_position, absorbed=False
        )

    def step(self, state: ToyInstanceState, action_index: int, policy: ToyPolicy):
        context = state.context + self.nudges[action_index]
        act = policy.respond(context)
        pos = state.agent_position + 0.5 * act
        absorbed = self.absorb_at is not None and abs(pos) >= self.absorb_at
        return ToyInstanceState(context, pos, absorbed), ActionVector((act,))

    def agent_state(self, state: ToyInstanceState) -> StateVector:
        return StateVector((state.agent_position,))

    def terminal_kind(self, state: ToyInstanceState) -> str:
        return "goal" if state.absorbed else "running"


def random_toy_setup(seed: int, num_actions: int = 3):
    """A seeded (environment, policy pair) with distinct response curves."""
    rng = random.Random(seed)
    nudges = tuple(rng.uniform(-1.0, 1.0) for _ in range(num_actions))
    p1 = ToyPolicy("first", gain=rng.uniform(0.5, 2.5), bias=rng.uniform(-1.0, 1.0))
    p2 = ToyPolicy("second", gain=rng.uniform(0.5, 2.5), bias=rng.uniform(-1.0, 1.0))
    return ToyEnvironment(nudges), (p1, p2)
