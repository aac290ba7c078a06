"""Acceptance suite: eight quantitative criteria, one per test, each
printing a single PASS/FAIL line with its measured evidence.

Criteria 3 and 5 persist their trajectories into a session directory;
criterion 6 then replays every persisted file, in-process and from a
fresh interpreter.
"""

import itertools
import random
import subprocess
import sys
import time

import pytest

from contrastsum.bench import bench_agents, ordering_violation
from contrastsum.config import RunConfig
from contrastsum.core import ActionVector, EnvAction, StateVector, enumerate_pairs
from contrastsum.coupled import CoupledSimulator
from contrastsum.crowdnav import CrowdNavEnvironment, builtin_scenario, get_policy
from contrastsum.divergence import RewardConfig, action_divergence, state_divergence
from contrastsum.orchestrate import run_all_pairs
from contrastsum.search import (
    SearchConfig,
    TrajectoryQueue,
    adaptive_scenario_search,
    n_first_baseline,
    select_summary,
)
from contrastsum.toy import ToyInitialState, random_toy_setup
from contrastsum.trajfile import replay, write_trajectory

from test_divergence import FIXED_PAIRS
from test_search import tagged

AGENTS = ["lo", "med", "hi"]
SCENARIO_NAMES = ("corner-NE", "corner-SE")
TOY_INIT = ToyInitialState(id="origin")

# Desk-scale search budget for the dominance criterion: 50-step horizon,
# 6 search iterations of 5 simulations per decision, against the best of
# 6 uniformly sampled episodes at the same seed.
DOMINANCE_SEARCH = dict(n_itr=6, queue_size=3, horizon=50, simulations_per_decision=5)
DOMINANCE_REWARD = RewardConfig(alpha=10.0, beta=5.0, horizon=50)
SEEDS = range(10)


@pytest.fixture(scope="session")
def persisted(tmp_path_factory):
    """Paths of every trajectory file persisted by earlier criteria."""
    return {"dir": tmp_path_factory.mktemp("acceptance"), "files": []}


def emit(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    assert ok, detail


def test_criterion_1_formula_correctness(capsys):
    start = time.monotonic()
    worst = 0.0
    for a, b, expected in FIXED_PAIRS:
        worst = max(worst, abs(action_divergence(ActionVector(a), ActionVector(b)) - expected))
        worst = max(worst, abs(state_divergence(StateVector(a), StateVector(b)) - expected))
    rng = random.Random(0)
    property_ok = True
    for _ in range(10_000):
        dim = rng.randint(1, 4)
        x = ActionVector([rng.uniform(-50, 50) for _ in range(dim)])
        y = ActionVector([rng.uniform(-50, 50) for _ in range(dim)])
        d = action_divergence(x, y)
        property_ok &= d >= 0.0 and d == action_divergence(y, x) and d > 0.0
        property_ok &= action_divergence(x, x) == 0.0
    elapsed = time.monotonic() - start
    ok = worst <= 1e-12 and property_ok and elapsed < 1.0
    emit(
        capsys, 1,
        ok,
        f"d_a/d_s match {len(FIXED_PAIRS)} fixed pairs (worst err {worst:.1e}), "
        f"properties hold on 10,000 random pairs, {elapsed:.2f}s",
    )


def test_criterion_2_oracle_equivalence(capsys):
    start = time.monotonic()
    horizon = 4
    reward_cfg = RewardConfig(alpha=10.0, beta=5.0, horizon=horizon)
    exact = 0
    for landscape in range(5):
        env, policies = random_toy_setup(seed=landscape)
        m = env.num_env_actions
        # Brute-force oracle over all m^T sequences, same accumulation order.
        sim = CoupledSimulator(env)
        oracle = None
        for seq in itertools.product(range(m), repeat=horizon):
            sim.reset(TOY_INIT)
            total = 0.0
            for a in seq:
                if sim.is_terminal() or sim.step_count >= horizon:
                    break
                res = sim.step(EnvAction(a, m), policies)
                total += action_divergence(*res.agent_actions)
            if sim.is_terminal():
                total += reward_cfg.alpha * state_divergence(*sim.agent_states())
            elif sim.step_count >= horizon:
                total += reward_cfg.beta * state_divergence(*sim.agent_states())
            if oracle is None or total > oracle:
                oracle = total
        cfg = SearchConfig(
            n_itr=30, queue_size=1, horizon=horizon,
            simulations_per_decision=150, exploration=10.0, seed=landscape,
        )
        trajs = adaptive_scenario_search(CoupledSimulator(env), TOY_INIT, policies, cfg, reward_cfg)
        exact += trajs[0].total_reward == oracle
    elapsed = time.monotonic() - start
    ok = exact == 5 and elapsed < 10.0
    emit(
        capsys, 2,
        ok,
        f"adaptive top-1 equals brute-force max (81 sequences) exactly on "
        f"{exact}/5 toy landscapes, {elapsed:.2f}s",
    )


def test_criterion_3_search_dominance(capsys, persisted):
    start = time.monotonic()
    results = []
    for scen_name in SCENARIO_NAMES:
        scenario = builtin_scenario(scen_name)
        for pair in enumerate_pairs(AGENTS):
            policies = (get_policy(pair.first), get_policy(pair.second))
            wins = 0
            for seed in SEEDS:
                cfg = SearchConfig(seed=seed, **DOMINANCE_SEARCH)
                adaptive = select_summary(
                    adaptive_scenario_search(
                        CoupledSimulator(CrowdNavEnvironment()),
                        scenario, policies, cfg, DOMINANCE_REWARD,
                        pair=(pair.first, pair.second),
                    )
                )
                baseline = n_first_baseline(
                    CoupledSimulator(CrowdNavEnvironment()),
                    scenario, policies, n=6, horizon=cfg.horizon,
                    reward_cfg=DOMINANCE_REWARD, seed=seed,
                    pair=(pair.first, pair.second),
                )
                best = select_summary(baseline)
                if adaptive.total_reward >= best.total_reward:
                    wins += 1
                if seed == 0:
                    stem = f"{scen_name}_{pair.first}_{pair.second}"
                    for tag, traj in (("adaptive", adaptive), ("baseline", best)):
                        path = write_trajectory(
                            persisted["dir"] / f"{stem}_{tag}.traj.jsonl",
                            traj, scenario, DOMINANCE_REWARD,
                        )
                        persisted["files"].append(path)
            results.append((scen_name, f"{pair.first}-{pair.second}", wins))
    elapsed = time.monotonic() - start
    ok = all(w >= 9 for _, _, w in results) and elapsed < 600.0
    detail = ", ".join(f"{s}/{p}: {w}/10" for s, p, w in results)
    emit(capsys, 3, ok, f"adaptive >= best-of-6-baseline wins per combo [{detail}], {elapsed:.0f}s")


def test_criterion_4_null_contrast(capsys):
    start = time.monotonic()
    policies = (get_policy("hi"), get_policy("hi"))
    cfg = SearchConfig(n_itr=4, queue_size=4, horizon=40, simulations_per_decision=4, seed=0)
    trajs = adaptive_scenario_search(
        CoupledSimulator(CrowdNavEnvironment()),
        builtin_scenario("corner-NE"), policies, cfg,
        RewardConfig(alpha=10.0, beta=5.0, horizon=40), pair=("hi", "hi"),
    )
    elapsed = time.monotonic() - start
    zero = [t.total_reward for t in trajs]
    ok = bool(trajs) and all(r == 0.0 for r in zero) and elapsed < 60.0
    emit(
        capsys, 4,
        ok,
        f"identical-policy pair: all {len(trajs)} retained trajectories have "
        f"total_reward exactly 0.0, {elapsed:.1f}s",
    )


def test_criterion_5_agent_ordering(capsys):
    start = time.monotonic()
    report = bench_agents(AGENTS, episodes=100)
    violation = ordering_violation(report)
    scores = {n: report["agents"][n]["overall"] for n in AGENTS}
    elapsed = time.monotonic() - start
    ok = violation is None and elapsed < 120.0
    emit(
        capsys, 5,
        ok,
        f"100-episode mean scores lo={scores['lo']:.2f} < med={scores['med']:.2f} "
        f"< hi={scores['hi']:.2f}, pairwise gaps > 1.0, {elapsed:.1f}s",
    )


def test_criterion_6_determinism_replay(capsys, persisted):
    files = persisted["files"]
    assert files, "criterion 3 must run first and persist its trajectories"
    in_process = [replay(p) for p in files]
    proc = subprocess.run(
        [sys.executable, "-m", "contrastsum.cli", "replay", *map(str, files)],
        capture_output=True,
        text=True,
    )
    ok = all(r.passed for r in in_process) and proc.returncode == 0
    emit(
        capsys, 6,
        ok,
        f"{len(files)}/{len(files)} persisted trajectories replay bit-exactly, "
        f"in-process and in a fresh interpreter",
    )


def test_criterion_7_queue_property(capsys):
    rng = random.Random(0)
    mismatches = 0
    for _ in range(1_000):
        capacity = rng.randint(1, 8)
        rewards = [rng.choice([0.0, 1.0, 1.5, 2.0, 3.0]) for _ in range(rng.randint(0, 40))]
        q = TrajectoryQueue(capacity)
        for i, r in enumerate(rewards):
            q.add(tagged(r, i))
        got = [(t.total_reward, t.init_state_id) for t in q.trajectories()]
        naive = [
            (r, str(i))
            for i, r in sorted(enumerate(rewards), key=lambda p: -p[1])[:capacity]
        ]
        mismatches += got != naive
    emit(
        capsys, 7,
        mismatches == 0,
        "TrajectoryQueue equals naive top-K on 1,000 randomized insertion sequences",
    )


def test_criterion_8_pair_enumeration(capsys, tmp_path):
    counts_ok = all(
        len(enumerate_pairs([f"a{i}" for i in range(n)])) == n * (n - 1) // 2
        for n in range(2, 21)
    )
    cfg = RunConfig(
        agents=AGENTS,
        scenarios=[builtin_scenario(n) for n in SCENARIO_NAMES],
        search=SearchConfig(n_itr=2, queue_size=2, horizon=20, simulations_per_decision=2, seed=0),
        out=tmp_path / "out",
    )
    manifest = run_all_pairs(cfg, mode="adaptive")
    ok = counts_ok and len(manifest["entries"]) == 6
    emit(
        capsys, 8,
        ok,
        f"pair counts match N(N-1)/2 for N in [2, 20]; 3 agents x 2 scenarios "
        f"manifest has {len(manifest['entries'])} summaries",
    )
