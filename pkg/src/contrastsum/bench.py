"""Benchmark harness ranking the shipped robot policies.

Runs a fixed set of seeded single-instance episodes per agent and
scenario under uniformly random environment actions, scores each episode,
and reports the induced ranking. The same action stream is reused across
agents within an episode so the comparison is paired.
"""

from __future__ import annotations

import random
from typing import Sequence

from .crowdnav import CrowdScenario, builtin_scenario, get_policy, run_single_episode, score_episode
from .errors import InvalidInputError

DEFAULT_EPISODES = 100
DEFAULT_HORIZON = 100
# Gap the shipped lo < med < hi ordering must clear, in score units.
REQUIRED_ORDERING = ("lo", "med", "hi")
REQUIRED_GAP = 1.0


def _episode_actions(base_seed: int, scenario_id: str, episode: int, horizon: int, m: int):
    rng = random.Random(f"{base_seed}:{scenario_id}:{episode}")
    return [rng.randrange(m) for _ in range(horizon)]


def bench_agents(
    agent_names: Sequence[str],
    scenarios: Sequence[CrowdScenario] | None = None,
    episodes: int = DEFAULT_EPISODES,
    horizon: int = DEFAULT_HORIZON,
    base_seed: int = 0,
    num_env_actions: int = 5,
) -> dict:
    """Mean episode score per agent per scenario plus the overall ranking."""
    if len(agent_names) < 2:
        raise InvalidInputError("benchmark needs at least 2 agents")
    if scenarios is None:
        scenarios = [builtin_scenario("corner-NE"), builtin_scenario("corner-SE")]
    policies = {name: get_policy(name) for name in agent_names}

    results: dict[str, dict] = {name: {"scenarios": {}, "overall": 0.0} for name in agent_names}
    for scen in scenarios:
        streams = [
            _episode_actions(base_seed, scen.id, e, horizon, num_env_actions)
            for e in range(episodes)
        ]
        for name, policy in policies.items():
            total = 0.0
            outcomes = {"goal": 0, "collision": 0, "running": 0}
            for actions in streams:
                positions, kind, _ = run_single_episode(scen, policy, iter(actions), horizon)
                total += score_episode(positions, scen.robot.goal, kind)
                outcomes[kind] += 1
            results[name]["scenarios"][scen.id] = {
                "mean_score": total / episodes,
                "outcomes": outcomes,
            }
    for name in agent_names:
        per = [s["mean_score"] for s in results[name]["scenarios"].values()]
        results[name]["overall"] = sum(per) / len(per)

    ranking = sorted(agent_names, key=lambda n: results[n]["overall"], reverse=True)
    return {
        "episodes": episodes,
        "horizon": horizon,
        "base_seed": base_seed,
        "scenario_ids": [s.id for s in scenarios],
        "agents": results,
        "ranking": ranking,
    }


def ordering_violation(report: dict) -> str | None:
    """None if the shipped lo < med < hi ordering holds with the required
    gap wherever all three agents were benchmarked; else a message."""
    agents = report["agents"]
    if not all(name in agents for name in REQUIRED_ORDERING):
        return None
    scores = [agents[name]["overall"] for name in REQUIRED_ORDERING]
    for worse, better, s_w, s_b in zip(
        REQUIRED_ORDERING, REQUIRED_ORDERING[1:], scores, scores[1:]
    ):
        if not (s_b - s_w > REQUIRED_GAP):
            return (
                f"expected mean score of {better!r} to exceed {worse!r} by more than "
                f"{REQUIRED_GAP}, got {s_b:.3f} vs {s_w:.3f}"
            )
    return None
