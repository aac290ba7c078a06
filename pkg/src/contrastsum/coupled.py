"""Coupled simulator: two independent environment instances, one per
agent, advanced in lockstep by a single shared environment action.

The environment object is duck-typed; it must expose

    num_env_actions        -> int, size M of the discrete action set
    initial_state(s_init)  -> immutable per-instance state
    step(state, action_index, policy) -> (new_state, executed ActionVector)
    agent_state(state)     -> StateVector
    terminal_kind(state)   -> "running" | "goal" | "collision"

Instance states are treated as immutable values, which makes snapshots
cheap (no copying) and keeps evolution a pure function of
(initial state, action sequence).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any

from .core import ActionVector, EnvAction, StateVector
from .errors import InvalidInputError, InvalidStateError, InvalidTokenError

RUNNING = "running"

_sim_ids = itertools.count()


@dataclass(frozen=True)
class CoupledState:
    env_states: tuple[Any, Any]
    agent_states: tuple[StateVector, StateVector]
    step_count: int
    terminal_flags: tuple[bool, bool]
    terminal_kinds: tuple[str, str]


@dataclass(frozen=True)
class StepResult:
    """Raw data produced by one coupled step, before reward assignment."""

    t: int
    env_action: EnvAction
    agent_actions: tuple[ActionVector, ActionVector]
    agent_states: tuple[StateVector, StateVector]
    terminal_kinds: tuple[str, str]


@dataclass(frozen=True)
class SnapshotToken:
    sim_id: int
    payload: tuple


class CoupledSimulator:
    """Two lockstep instances of one environment, one agent each."""

    def __init__(self, env):
        self.env = env
        self._sim_id = next(_sim_ids)
        self._states: tuple[Any, Any] | None = None
        self._step_count = 0
        # Monotone count of every coupled step ever executed, rollouts
        # included; snapshots do not rewind it. Used for budget accounting.
        self.total_steps_simulated = 0
        self._kinds: tuple[str, str] = (RUNNING, RUNNING)
        self._s_init = None

    # -- lifecycle ---------------------------------------------------------

    def reset(self, s_init) -> CoupledState:
        """Reset both instances to the same initial state."""
        state = self.env.initial_state(s_init)
        self._states = (state, state)
        self._step_count = 0
        self._kinds = (
            self.env.terminal_kind(state),
            self.env.terminal_kind(state),
        )
        self._s_init = s_init
        return self.coupled_state()

    def step(self, a_env: EnvAction, policies: tuple) -> StepResult:
        """Advance both instances with the shared environment action.

        An instance that already reached a terminal state is frozen: it
        does not move and its executed action is the zero vector.
        """
        if self._states is None:
            raise InvalidStateError("step before reset")
        if a_env.index >= self.env.num_env_actions:
            raise InvalidInputError(
                f"env action {a_env.index} out of range [0, {self.env.num_env_actions})"
            )
        flags = self.terminal_flags()
        if flags[0] and flags[1]:
            raise InvalidStateError("both instances terminal; cannot step")

        new_states = []
        actions = []
        kinds = []
        for i in range(2):
            if flags[i]:
                new_states.append(self._states[i])
                actions.append(ActionVector((0.0,) * self.env.action_dim))
                kinds.append(self._kinds[i])
            else:
                st, act = self.env.step(self._states[i], a_env.index, policies[i])
                new_states.append(st)
                actions.append(act)
                kinds.append(self.env.terminal_kind(st))
        self._states = (new_states[0], new_states[1])
        self._kinds = (kinds[0], kinds[1])
        self._step_count += 1
        self.total_steps_simulated += 1
        return StepResult(
            t=self._step_count - 1,
            env_action=a_env,
            agent_actions=(actions[0], actions[1]),
            agent_states=self.agent_states(),
            terminal_kinds=self._kinds,
        )

    # -- inspection --------------------------------------------------------

    @property
    def step_count(self) -> int:
        return self._step_count

    def terminal_flags(self) -> tuple[bool, bool]:
        return (self._kinds[0] != RUNNING, self._kinds[1] != RUNNING)

    def terminal_kinds(self) -> tuple[str, str]:
        return self._kinds

    def is_terminal(self) -> bool:
        """True as soon as EITHER instance reached an absorbing state."""
        f = self.terminal_flags()
        return f[0] or f[1]

    def agent_states(self) -> tuple[StateVector, StateVector]:
        if self._states is None:
            raise InvalidStateError("no state before reset")
        return (
            self.env.agent_state(self._states[0]),
            self.env.agent_state(self._states[1]),
        )

    def coupled_state(self) -> CoupledState:
        if self._states is None:
            raise InvalidStateError("no state before reset")
        return CoupledState(
            env_states=self._states,
            agent_states=self.agent_states(),
            step_count=self._step_count,
            terminal_flags=self.terminal_flags(),
            terminal_kinds=self._kinds,
        )

    # -- snapshot / restore ------------------------------------------------

    def snapshot(self) -> SnapshotToken:
        """Capture the full simulator state; instance states are immutable
        so no copying is needed."""
        return SnapshotToken(
            sim_id=self._sim_id,
            payload=(self._states, self._step_count, self._kinds, self._s_init),
        )

    def restore(self, token: SnapshotToken) -> None:
        if not isinstance(token, SnapshotToken) or token.sim_id != self._sim_id:
            raise InvalidTokenError("snapshot token does not belong to this simulator")
        self._states, self._step_count, self._kinds, self._s_init = token.payload
