"""Run configuration: a single JSON document naming agents, scenarios,
search parameters and the output directory.

Schema (all keys optional unless noted):

    {
      "agents": ["lo", "med", "hi"],            # required, >= 2 for search
      "scenarios": ["corner-NE", "corner-SE"],  # names or inline scenario objects
      "search": {"n_itr": 200, "queue_size": 10, "horizon": 100,
                 "simulations_per_decision": 30, "exploration": 1.414,
                 "seed": 0},
      "reward": {"alpha": 10.0, "beta": 5.0},
      "baseline_episodes": 6,
      "out": "runs/latest"
    }

Inline scenario objects use the same shape as the trajectory-file header
(see ``trajfile.scenario_to_dict``).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .crowdnav import BUILTIN_SCENARIOS, CrowdScenario, POLICY_PARAMS, builtin_scenario
from .divergence import RewardConfig
from .errors import ConfigurationError, InvalidInputError
from .search import SearchConfig
from .trajfile import scenario_from_dict


@dataclass
class RunConfig:
    agents: list[str]
    scenarios: list[CrowdScenario]
    search: SearchConfig = field(default_factory=SearchConfig)
    reward_alpha: float = 10.0
    reward_beta: float = 5.0
    baseline_episodes: int = 6
    out: Path = Path("runs/latest")

    def reward_config(self) -> RewardConfig:
        return RewardConfig(
            alpha=self.reward_alpha, beta=self.reward_beta, horizon=self.search.horizon
        )


def _resolve_scenario(entry) -> CrowdScenario:
    if isinstance(entry, str):
        if entry not in BUILTIN_SCENARIOS:
            raise ConfigurationError(
                f"unknown scenario {entry!r}; built-ins: {list(BUILTIN_SCENARIOS)}"
            )
        return builtin_scenario(entry)
    if isinstance(entry, dict):
        try:
            return scenario_from_dict(entry)
        except (KeyError, TypeError, InvalidInputError) as exc:
            raise ConfigurationError(f"malformed inline scenario: {exc}") from exc
    raise ConfigurationError(f"scenario entry must be a name or object, got {type(entry)}")


def load_config(
    path: str | Path,
    seed: int | None = None,
    out: str | None = None,
    scenario: str | None = None,
) -> RunConfig:
    """Parse and validate a run configuration, applying CLI overrides."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from exc

    agents = raw.get("agents", [])
    if not isinstance(agents, list) or not agents:
        raise ConfigurationError("config must list at least one agent under 'agents'")
    for a in agents:
        if a not in POLICY_PARAMS:
            raise ConfigurationError(f"unknown agent {a!r}; known: {sorted(POLICY_PARAMS)}")

    scenario_entries = raw.get("scenarios", list(BUILTIN_SCENARIOS))
    if scenario is not None:
        scenario_entries = [scenario]
    scenarios = [_resolve_scenario(e) for e in scenario_entries]
    if not scenarios:
        raise ConfigurationError("config must include at least one scenario")

    search_kwargs = dict(raw.get("search", {}))
    if seed is not None:
        search_kwargs["seed"] = seed
    try:
        search_cfg = SearchConfig(**search_kwargs)
    except (TypeError, InvalidInputError) as exc:
        raise ConfigurationError(f"bad search parameters: {exc}") from exc

    reward = raw.get("reward", {})
    return RunConfig(
        agents=list(agents),
        scenarios=scenarios,
        search=search_cfg,
        reward_alpha=float(reward.get("alpha", 10.0)),
        reward_beta=float(reward.get("beta", 5.0)),
        baseline_episodes=int(raw.get("baseline_episodes", 6)),
        out=Path(out if out is not None else raw.get("out", "runs/latest")),
    )


def derive_seed(base: int, *parts: str) -> int:
    """Stable per-job seed derived from the run seed and job identifiers."""
    blob = ":".join([str(base), *parts]).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")
