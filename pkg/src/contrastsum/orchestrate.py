"""Run orchestration: one search or baseline job per (agent pair,
scenario), persisted trajectories, and a manifest tying it together.

Jobs are independent (own simulator, own derived seed, own output
directory), so callers may parallelize them; this module runs them
sequentially for determinism of the manifest.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

from .config import RunConfig, derive_seed
from .core import enumerate_pairs
from .coupled import CoupledSimulator
from .crowdnav import CrowdNavEnvironment, get_policy
from .search import adaptive_scenario_search, n_first_baseline, select_summary
from .trajfile import write_trajectory


def _job_dir(out: Path, scenario_id: str, pair) -> Path:
    return out / scenario_id / f"{pair.first}_vs_{pair.second}"


def _persist(trajs, summary, job_dir: Path, scenario, reward_cfg) -> dict:
    queue_paths = []
    for rank, traj in enumerate(trajs):
        p = write_trajectory(job_dir / f"queue_{rank:02d}.traj.jsonl", traj, scenario, reward_cfg)
        queue_paths.append(str(p))
    summary_path = write_trajectory(job_dir / "summary.traj.jsonl", summary, scenario, reward_cfg)
    return {"summary_file": str(summary_path), "queue_files": queue_paths}


def run_all_pairs(cfg: RunConfig, mode: str = "adaptive") -> dict:
    """One job per (pair, scenario); returns (and writes) the manifest."""
    pairs = enumerate_pairs(cfg.agents)
    reward_cfg = cfg.reward_config()
    entries = []
    for scenario in cfg.scenarios:
        for pair in pairs:
            seed = derive_seed(cfg.search.seed, scenario.id, pair.first, pair.second, mode)
            sim = CoupledSimulator(CrowdNavEnvironment())
            policies = (get_policy(pair.first), get_policy(pair.second))
            if mode == "adaptive":
                search_cfg = dataclasses.replace(cfg.search, seed=seed)
                trajs = adaptive_scenario_search(
                    sim,
                    scenario,
                    policies,
                    search_cfg,
                    reward_cfg,
                    pair=(pair.first, pair.second),
                )
            else:
                trajs = n_first_baseline(
                    sim,
                    scenario,
                    policies,
                    n=cfg.baseline_episodes,
                    horizon=cfg.search.horizon,
                    reward_cfg=reward_cfg,
                    seed=seed,
                    pair=(pair.first, pair.second),
                )
            summary = select_summary(trajs)
            job_dir = _job_dir(cfg.out, scenario.id, pair)
            paths = _persist(trajs, summary, job_dir, scenario, reward_cfg)
            entries.append(
                {
                    "pair": [pair.first, pair.second],
                    "scenario": scenario.id,
                    "mode": mode,
                    "seed": seed,
                    "summary_total_reward": summary.total_reward,
                    "steps_simulated": sim.total_steps_simulated,
                    **paths,
                }
            )
    manifest = {
        "mode": mode,
        "agents": cfg.agents,
        "scenarios": [s.id for s in cfg.scenarios],
        "entries": entries,
    }
    cfg.out.mkdir(parents=True, exist_ok=True)
    (cfg.out / f"manifest_{mode}.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return manifest
