"""Versioned line-delimited trajectory files with bit-exact replay.

Layout: one JSON object per line — a header, one record per step, and a
footer. Floats are serialized with Python's shortest round-trip repr, so
parsing them back yields the identical binary value; replay re-simulates
from the header and compares every recorded field for exact equality.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .core import EnvAction, Trajectory
from .coupled import CoupledSimulator
from .crowdnav import (
    DEFAULT_ENV_ACTION_ANGLES_DEG,
    CrowdNavEnvironment,
    CrowdScenario,
    HumanState,
    RobotState,
    get_policy,
)
from .divergence import RewardConfig, action_divergence
from .errors import VerificationError

FORMAT_VERSION = 1


# -- scenario (de)serialization ----------------------------------------------


def scenario_to_dict(s: CrowdScenario) -> dict:
    return {
        "id": s.id,
        "bounds": list(s.bounds),
        "goal_radius": s.goal_radius,
        "dt": s.dt,
        "robot": {
            "position": list(s.robot.position),
            "velocity": list(s.robot.velocity),
            "goal": list(s.robot.goal),
            "radius": s.robot.radius,
            "max_speed": s.robot.max_speed,
        },
        "humans": [
            {
                "position": list(h.position),
                "velocity": list(h.velocity),
                "goal": list(h.goal),
                "radius": h.radius,
                "preferred_speed": h.preferred_speed,
            }
            for h in s.humans
        ],
    }


def scenario_from_dict(d: dict) -> CrowdScenario:
    return CrowdScenario(
        id=d["id"],
        bounds=tuple(d["bounds"]),
        goal_radius=d["goal_radius"],
        dt=d["dt"],
        robot=RobotState(
            position=tuple(d["robot"]["position"]),
            velocity=tuple(d["robot"]["velocity"]),
            goal=tuple(d["robot"]["goal"]),
            radius=d["robot"]["radius"],
            max_speed=d["robot"]["max_speed"],
        ),
        humans=tuple(
            HumanState(
                position=tuple(h["position"]),
                velocity=tuple(h["velocity"]),
                goal=tuple(h["goal"]),
                radius=h["radius"],
                preferred_speed=h["preferred_speed"],
            )
            for h in d["humans"]
        ),
    )


def config_hash(header_config: dict) -> str:
    blob = json.dumps(header_config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


# -- writing -----------------------------------------------------------------


def _humans_row(instance_state) -> list[list[float]]:
    return [list(k) for k in instance_state.human_kin]


def write_trajectory(
    path: str | Path,
    traj: Trajectory,
    scenario: CrowdScenario,
    reward_cfg: RewardConfig,
    angles_deg=DEFAULT_ENV_ACTION_ANGLES_DEG,
) -> Path:
    """Persist a trajectory by re-simulating its action sequence, recording
    the full per-instance state at every step.

    The re-simulation is cross-checked against the trajectory's own
    records while writing, so a file can only come into existence if the
    action sequence reproduces the search-time evolution.
    """
    path = Path(path)
    env = CrowdNavEnvironment(angles_deg)
    sim = CoupledSimulator(env)
    policies = (get_policy(traj.pair[0]), get_policy(traj.pair[1]))
    sim.reset(scenario)

    header_config = {
        "scenario": scenario_to_dict(scenario),
        "pair": list(traj.pair),
        "reward": {"alpha": reward_cfg.alpha, "beta": reward_cfg.beta},
        "horizon": reward_cfg.horizon,
        "env_action_angles_deg": list(angles_deg),
        "seed": traj.seed,
    }
    header = {
        "kind": "header",
        "format_version": FORMAT_VERSION,
        "config_hash": config_hash(header_config),
        **header_config,
        "scenario_id": scenario.id,
    }

    lines = [json.dumps(header, sort_keys=True)]
    for rec in traj.steps:
        res = sim.step(EnvAction(rec.env_action.index, env.num_env_actions), policies)
        if res.agent_actions != rec.agent_actions or res.agent_states != rec.agent_states:
            raise VerificationError(
                f"trajectory does not reproduce under its own actions at step {rec.t}"
            )
        states = sim.coupled_state().env_states
        lines.append(
            json.dumps(
                {
                    "kind": "step",
                    "t": rec.t,
                    "env_action": rec.env_action.index,
                    "reward": rec.reward,
                    "agent_action_1": list(rec.agent_actions[0].values),
                    "agent_action_2": list(rec.agent_actions[1].values),
                    "agent_state_1": list(rec.agent_states[0].values),
                    "agent_state_2": list(rec.agent_states[1].values),
                    "humans_1": _humans_row(states[0]),
                    "humans_2": _humans_row(states[1]),
                },
                sort_keys=True,
            )
        )
    footer = {
        "kind": "footer",
        "steps": len(traj.steps),
        "terminal_kinds": list(sim.terminal_kinds()),
        "terminal_reward": traj.terminal_reward,
        "total_reward": traj.total_reward,
    }
    lines.append(json.dumps(footer, sort_keys=True))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return path


# -- reading / replay --------------------------------------------------------


@dataclass(frozen=True)
class TrajectoryFileData:
    header: dict
    steps: list[dict]
    footer: dict

    @property
    def scenario(self) -> CrowdScenario:
        return scenario_from_dict(self.header["scenario"])


def read_trajectory_file(path: str | Path) -> TrajectoryFileData:
    lines = [json.loads(l) for l in Path(path).read_text().splitlines() if l.strip()]
    if not lines or lines[0].get("kind") != "header" or lines[-1].get("kind") != "footer":
        raise VerificationError(f"{path}: not a trajectory file (missing header/footer)")
    header, footer = lines[0], lines[-1]
    if header.get("format_version") != FORMAT_VERSION:
        raise VerificationError(
            f"{path}: format version {header.get('format_version')} != {FORMAT_VERSION}"
        )
    steps = lines[1:-1]
    if any(s.get("kind") != "step" for s in steps):
        raise VerificationError(f"{path}: corrupt record between header and footer")
    if footer["steps"] != len(steps):
        raise VerificationError(f"{path}: footer step count mismatch")
    # Loaded files must satisfy the trajectory reward identity.
    total = 0.0
    for s in steps:
        total += s["reward"]
    total += footer["terminal_reward"]
    if total != footer["total_reward"]:
        raise VerificationError(f"{path}: total_reward does not re-accumulate")
    return TrajectoryFileData(header=header, steps=steps, footer=footer)


@dataclass(frozen=True)
class ReplayReport:
    path: str
    passed: bool
    steps_checked: int
    first_divergence: str | None = None

    def summary_line(self) -> str:
        if self.passed:
            return f"PASS {self.path} ({self.steps_checked} steps)"
        return f"FAIL {self.path}: {self.first_divergence}"


def replay(path: str | Path) -> ReplayReport:
    """Re-simulate a persisted trajectory and compare every record bit-exactly."""
    data = read_trajectory_file(path)
    scenario = data.scenario
    env = CrowdNavEnvironment(tuple(data.header["env_action_angles_deg"]))
    sim = CoupledSimulator(env)
    pair = data.header["pair"]
    policies = (get_policy(pair[0]), get_policy(pair[1]))
    sim.reset(scenario)

    for rec in data.steps:
        res = sim.step(EnvAction(rec["env_action"], env.num_env_actions), policies)
        states = sim.coupled_state().env_states
        got = {
            "agent_action_1": list(res.agent_actions[0].values),
            "agent_action_2": list(res.agent_actions[1].values),
            "agent_state_1": list(res.agent_states[0].values),
            "agent_state_2": list(res.agent_states[1].values),
            "humans_1": _humans_row(states[0]),
            "humans_2": _humans_row(states[1]),
            "reward": action_divergence(*res.agent_actions),
        }
        for field_name, value in got.items():
            if rec[field_name] != value:
                return ReplayReport(
                    path=str(path),
                    passed=False,
                    steps_checked=rec["t"],
                    first_divergence=f"step {rec['t']}, field {field_name}",
                )
    kinds = list(sim.terminal_kinds())
    if kinds != data.footer["terminal_kinds"]:
        return ReplayReport(
            path=str(path),
            passed=False,
            steps_checked=len(data.steps),
            first_divergence="footer terminal kinds",
        )
    return ReplayReport(path=str(path), passed=True, steps_checked=len(data.steps))
