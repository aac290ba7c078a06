"""Estimator-style wrappers around the search routines.

These follow the scikit-learn parameter conventions (constructor stores
hyperparameters verbatim, ``get_params``/``set_params``/``clone`` work,
fitted attributes carry a trailing underscore) so searches compose with
the wider ecosystem's tooling. ``fit`` takes a coupled simulator and an
initial state instead of an array, since the "data" here is a simulator.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator

from .coupled import CoupledSimulator
from .divergence import RewardConfig
from .errors import InvalidStateError
from .search import SearchConfig, adaptive_scenario_search, n_first_baseline, select_summary


class AdaptiveScenarioSearch(BaseEstimator):
    """Top-K contrastive scenario search driven by a UCT solver.

    Fitted attributes:
        trajectories_  retained trajectories, best first
        summary_       the selected behaviour summary (highest reward)
        n_steps_simulated_  coupled steps consumed, rollouts included
    """

    def __init__(
        self,
        n_itr: int = 200,
        queue_size: int = 10,
        horizon: int = 100,
        simulations_per_decision: int = 30,
        exploration: float = 1.414,
        alpha: float = 10.0,
        beta: float = 5.0,
        seed: int = 0,
    ):
        self.n_itr = n_itr
        self.queue_size = queue_size
        self.horizon = horizon
        self.simulations_per_decision = simulations_per_decision
        self.exploration = exploration
        self.alpha = alpha
        self.beta = beta
        self.seed = seed

    def _configs(self) -> tuple[SearchConfig, RewardConfig]:
        search_cfg = SearchConfig(
            n_itr=self.n_itr,
            queue_size=self.queue_size,
            horizon=self.horizon,
            simulations_per_decision=self.simulations_per_decision,
            exploration=self.exploration,
            seed=self.seed,
        )
        reward_cfg = RewardConfig(alpha=self.alpha, beta=self.beta, horizon=self.horizon)
        return search_cfg, reward_cfg

    def fit(self, sim: CoupledSimulator, s_init, policies, pair=("first", "second")):
        search_cfg, reward_cfg = self._configs()
        before = sim.total_steps_simulated
        self.trajectories_ = adaptive_scenario_search(
            sim, s_init, policies, search_cfg, reward_cfg, pair=pair
        )
        self.n_steps_simulated_ = sim.total_steps_simulated - before
        self.summary_ = select_summary(self.trajectories_)
        return self

    def predict(self):
        """The selected behaviour summary of the fitted search."""
        if not hasattr(self, "summary_"):
            raise InvalidStateError("call fit before predict")
        return self.summary_


class NFirstBaseline(BaseEstimator):
    """Uniform-sampling baseline: the first ``n_episodes`` random episodes."""

    def __init__(
        self,
        n_episodes: int = 6,
        horizon: int = 100,
        alpha: float = 10.0,
        beta: float = 5.0,
        seed: int = 0,
    ):
        self.n_episodes = n_episodes
        self.horizon = horizon
        self.alpha = alpha
        self.beta = beta
        self.seed = seed

    def fit(self, sim: CoupledSimulator, s_init, policies, pair=("first", "second")):
        reward_cfg = RewardConfig(alpha=self.alpha, beta=self.beta, horizon=self.horizon)
        before = sim.total_steps_simulated
        self.trajectories_ = n_first_baseline(
            sim,
            s_init,
            policies,
            n=self.n_episodes,
            horizon=self.horizon,
            reward_cfg=reward_cfg,
            seed=self.seed,
            pair=pair,
        )
        self.n_steps_simulated_ = sim.total_steps_simulated - before
        self.best_ = select_summary(self.trajectories_)
        return self
