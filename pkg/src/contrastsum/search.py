"""Adaptive scenario search: a UCT solver over environment-action
sequences, a bounded top-K trajectory queue, and the uniform-sampling
baseline it is compared against.

One search instance is sequential (the tree is mutated in place); run
distinct instances in parallel with independent seeds if needed.
"""

from __future__ import annotations

import heapq
import logging
import math
import random
from dataclasses import dataclass, field

from .core import ActionVector, EnvAction, StepRecord, Trajectory, trajectory_total_reward
from .coupled import CoupledSimulator
from .divergence import RewardConfig, action_divergence, search_reward
from .errors import ContrastsumError, InvalidInputError, InvalidStateError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchConfig:
    n_itr: int = 200
    queue_size: int = 10
    horizon: int = 100
    simulations_per_decision: int = 30
    exploration: float = 1.414
    seed: int = 0

    def __post_init__(self):
        if self.n_itr < 1 or self.queue_size < 1 or self.horizon < 1:
            raise InvalidInputError("n_itr, queue_size and horizon must be >= 1")
        if self.simulations_per_decision < 1 or self.exploration <= 0:
            raise InvalidInputError("need simulations_per_decision >= 1 and exploration > 0")


class TrajectoryQueue:
    """Keeps the K highest-reward trajectories; ties keep the earlier insert."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise InvalidInputError("queue capacity must be >= 1")
        self.capacity = capacity
        self._seq = 0
        # Min-heap of (reward, -seq, traj): among equal rewards the later
        # insertion is evicted first, so earlier ties survive.
        self._heap: list[tuple[float, int, Trajectory]] = []

    def __len__(self) -> int:
        return len(self._heap)

    def add(self, traj: Trajectory) -> None:
        heapq.heappush(self._heap, (traj.total_reward, -self._seq, traj))
        self._seq += 1
        if len(self._heap) > self.capacity:
            heapq.heappop(self._heap)

    def pop_min(self) -> Trajectory:
        if not self._heap:
            raise InvalidStateError("pop_min on empty queue")
        return heapq.heappop(self._heap)[2]

    def trajectories(self) -> list[Trajectory]:
        """Contents sorted by descending reward; ties by insertion order."""
        return [
            item[2]
            for item in sorted(self._heap, key=lambda it: (-it[0], -it[1]))
        ]


class _Node:
    __slots__ = ("counts", "sums")

    def __init__(self, num_actions: int):
        self.counts = [0] * num_actions
        self.sums = [0.0] * num_actions

    @property
    def visits(self) -> int:
        return sum(self.counts)


@dataclass
class SearchTree:
    """UCT statistics keyed by environment-action history prefix.

    ``current`` tracks the committed prefix of the running episode; it is
    rewound at the start of each search iteration while the node
    statistics persist, so prefixes revisited across iterations reuse
    their estimates.
    """

    num_actions: int
    backup_log: list | None = None
    nodes: dict[tuple[int, ...], _Node] = field(default_factory=dict)
    current: tuple[int, ...] = ()

    def node(self, key: tuple[int, ...]) -> _Node:
        n = self.nodes.get(key)
        if n is None:
            n = _Node(self.num_actions)
            self.nodes[key] = n
        return n

    def rewind(self) -> None:
        self.current = ()

    def backup(self, key: tuple[int, ...], action: int, value: float) -> None:
        n = self.node(key)
        n.counts[action] += 1
        n.sums[action] += value
        if self.backup_log is not None:
            self.backup_log.append((key, action, value))


def _terminal_evaluation(sim: CoupledSimulator, cfg: RewardConfig) -> float:
    zero = ActionVector((0.0,) * sim.env.action_dim)
    return search_reward(
        sim.agent_states(), (zero, zero), sim.is_terminal(), sim.step_count, cfg
    )


def _sim_step_reward(sim: CoupledSimulator, action: int, policies) -> float:
    res = sim.step(EnvAction(action, sim.env.num_env_actions), policies)
    return action_divergence(*res.agent_actions)


def mcts_get_action(
    tree: SearchTree,
    sim: CoupledSimulator,
    policies,
    reward_cfg: RewardConfig,
    search_cfg: SearchConfig,
    rng: random.Random,
) -> int:
    """One UCT decision: simulate, back up, return the best root action.

    Each simulation snapshots the simulator, descends by UCB1 (unvisited
    actions first, ties to the lowest index), expands one action, finishes
    with a uniform-random rollout, backs up undiscounted returns, then
    restores the snapshot.
    """
    if sim.is_terminal():
        raise InvalidStateError("cannot pick an action in a terminal simulator")
    m = sim.env.num_env_actions
    horizon = search_cfg.horizon
    c = search_cfg.exploration
    root_key = tree.current

    for _ in range(search_cfg.simulations_per_decision):
        token = sim.snapshot()
        key = root_key
        path: list[tuple[tuple[int, ...], int]] = []
        step_rewards: list[float] = []
        tail = 0.0

        while not sim.is_terminal() and sim.step_count < horizon:
            node = tree.node(key)
            unvisited = [a for a in range(m) if node.counts[a] == 0]
            if unvisited:
                a = unvisited[0]
                path.append((key, a))
                step_rewards.append(_sim_step_reward(sim, a, policies))
                # Uniform-random rollout from the newly expanded action.
                while not sim.is_terminal() and sim.step_count < horizon:
                    tail += _sim_step_reward(sim, rng.randrange(m), policies)
                break
            log_n = math.log(node.visits)
            best_a, best_u = 0, -math.inf
            for a in range(m):
                u = node.sums[a] / node.counts[a] + c * math.sqrt(log_n / node.counts[a])
                if u > best_u:
                    best_a, best_u = a, u
            path.append((key, best_a))
            step_rewards.append(_sim_step_reward(sim, best_a, policies))
            key = key + (best_a,)

        ret = tail + _terminal_evaluation(sim, reward_cfg)
        for i in range(len(path) - 1, -1, -1):
            ret += step_rewards[i]
            tree.backup(path[i][0], path[i][1], ret)
        sim.restore(token)

    root = tree.node(root_key)
    best_a, best_mean = 0, -math.inf
    for a in range(m):
        if root.counts[a] == 0:
            continue
        mean = root.sums[a] / root.counts[a]
        if mean > best_mean:
            best_a, best_mean = a, mean
    return best_a


def mcts_update_policy(tree: SearchTree, observed_reward: float, action: int) -> None:
    """Feed the committed step's real reward back and advance the root."""
    tree.backup(tree.current, action, observed_reward)
    tree.current = tree.current + (action,)


def _finish_trajectory(steps, terminal_reward, sim, seed, pair, init_id) -> Trajectory:
    total = trajectory_total_reward(steps, terminal_reward)
    return Trajectory(
        steps=tuple(steps),
        terminal_reward=terminal_reward,
        total_reward=total,
        seed=seed,
        pair=pair,
        init_state_id=init_id,
        extra={"terminal_kinds": sim.terminal_kinds()},
    )


def adaptive_scenario_search(
    sim: CoupledSimulator,
    s_init,
    policies,
    search_cfg: SearchConfig,
    reward_cfg: RewardConfig,
    pair: tuple[str, str] = ("first", "second"),
    init_state_id: str | None = None,
    tree: SearchTree | None = None,
) -> list[Trajectory]:
    """Run the full adaptive search and return the retained trajectories.

    Each iteration resets to the initial state, commits UCT decisions
    until the episode terminates or hits the horizon, and offers the
    resulting trajectory to the top-K queue. Duplicate action sequences
    are inserted at most once. The result is sorted by descending total
    reward.
    """
    rng = random.Random(search_cfg.seed)
    pq = TrajectoryQueue(search_cfg.queue_size)
    tree = tree or SearchTree(sim.env.num_env_actions)
    init_id = init_state_id if init_state_id is not None else getattr(s_init, "id", "s_init")
    seen: set[tuple[int, ...]] = set()

    for itr in range(search_cfg.n_itr):
        try:
            sim.reset(s_init)
            tree.rewind()
            steps: list[StepRecord] = []
            while not sim.is_terminal() and sim.step_count < search_cfg.horizon:
                a = mcts_get_action(tree, sim, policies, reward_cfg, search_cfg, rng)
                res = sim.step(EnvAction(a, sim.env.num_env_actions), policies)
                r = action_divergence(*res.agent_actions)
                mcts_update_policy(tree, r, a)
                steps.append(
                    StepRecord(
                        t=res.t,
                        env_action=res.env_action,
                        reward=r,
                        agent_actions=res.agent_actions,
                        agent_states=res.agent_states,
                    )
                )
            terminal_reward = _terminal_evaluation(sim, reward_cfg)
            traj = _finish_trajectory(
                steps, terminal_reward, sim, search_cfg.seed, pair, init_id
            )
        except ContrastsumError as exc:
            logger.warning("search iteration %d aborted: %s", itr, exc)
            continue
        key = traj.env_action_indices()
        if key in seen:
            continue
        seen.add(key)
        pq.add(traj)

    return pq.trajectories()


def n_first_baseline(
    sim: CoupledSimulator,
    s_init,
    policies,
    n: int,
    horizon: int,
    reward_cfg: RewardConfig,
    seed: int = 0,
    pair: tuple[str, str] = ("first", "second"),
    init_state_id: str | None = None,
) -> list[Trajectory]:
    """n episodes with uniformly random environment actions, in generation
    order (these model the first n episodes a passive observer watches)."""
    if n < 1:
        raise InvalidInputError("need n >= 1 baseline episodes")
    rng = random.Random(seed)
    m = sim.env.num_env_actions
    init_id = init_state_id if init_state_id is not None else getattr(s_init, "id", "s_init")
    out = []
    for _ in range(n):
        sim.reset(s_init)
        steps: list[StepRecord] = []
        while not sim.is_terminal() and sim.step_count < horizon:
            a = rng.randrange(m)
            res = sim.step(EnvAction(a, m), policies)
            r = action_divergence(*res.agent_actions)
            steps.append(
                StepRecord(
                    t=res.t,
                    env_action=res.env_action,
                    reward=r,
                    agent_actions=res.agent_actions,
                    agent_states=res.agent_states,
                )
            )
        terminal_reward = _terminal_evaluation(sim, reward_cfg)
        out.append(_finish_trajectory(steps, terminal_reward, sim, seed, pair, init_id))
    return out


def select_summary(trajectories: list[Trajectory]) -> Trajectory:
    """Highest-reward trajectory; ties resolve to the earliest in the list."""
    if not trajectories:
        raise InvalidInputError("cannot select a summary from an empty list")
    best = trajectories[0]
    for t in trajectories[1:]:
        if t.total_reward > best.total_reward:
            best = t
    return best
