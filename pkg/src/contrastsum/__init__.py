"""Contrastive behaviour summary search for pairs of autonomous agents."""

from .core import (
    ActionVector,
    AgentPair,
    EnvAction,
    StateVector,
    StepRecord,
    Trajectory,
    enumerate_pairs,
    trajectory_total_reward,
)
from .coupled import CoupledSimulator, CoupledState
from .divergence import RewardConfig, action_divergence, search_reward, state_divergence
from .estimators import AdaptiveScenarioSearch, NFirstBaseline
from .search import (
    SearchConfig,
    SearchTree,
    TrajectoryQueue,
    adaptive_scenario_search,
    mcts_get_action,
    mcts_update_policy,
    n_first_baseline,
    select_summary,
)

__all__ = [
    "ActionVector",
    "AdaptiveScenarioSearch",
    "AgentPair",
    "CoupledSimulator",
    "CoupledState",
    "EnvAction",
    "NFirstBaseline",
    "RewardConfig",
    "SearchConfig",
    "SearchTree",
    "StateVector",
    "StepRecord",
    "Trajectory",
    "TrajectoryQueue",
    "action_divergence",
    "adaptive_scenario_search",
    "enumerate_pairs",
    "mcts_get_action",
    "mcts_update_policy",
    "n_first_baseline",
    "search_reward",
    "select_summary",
    "state_divergence",
    "trajectory_total_reward",
]

__version__ = "0.1.0"
