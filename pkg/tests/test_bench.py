import pytest

from contrastsum.bench import (
    REQUIRED_GAP,
    REQUIRED_ORDERING,
    bench_agents,
    ordering_violation,
)
from contrastsum.crowdnav import POLICY_PARAMS
from contrastsum.errors import InvalidInputError


def fake_report(lo, med, hi):
    return {"agents": {"lo": {"overall": lo}, "med": {"overall": med}, "hi": {"overall": hi}}}


class TestBenchAgents:
    def test_needs_two_agents(self):
        with pytest.raises(InvalidInputError):
            bench_agents(["lo"], episodes=1)

    def test_report_structure_and_determinism(self):
        a = bench_agents(["lo", "hi"], episodes=4, horizon=40, base_seed=7)
        b = bench_agents(["lo", "hi"], episodes=4, horizon=40, base_seed=7)
        assert a == b
        assert a["episodes"] == 4
        assert set(a["agents"]) == {"lo", "hi"}
        assert sorted(a["ranking"]) == ["hi", "lo"]
        for agent in a["agents"].values():
            assert set(agent["scenarios"]) == {"corner-NE", "corner-SE"}
            for s in agent["scenarios"].values():
                assert sum(s["outcomes"].values()) == 4

    def test_seed_changes_report(self):
        a = bench_agents(["lo", "hi"], episodes=4, horizon=40, base_seed=0)
        b = bench_agents(["lo", "hi"], episodes=4, horizon=40, base_seed=1)
        assert a != b

    def test_streams_are_paired_across_agents(self):
        """An agent's score depends only on the seed, never on which other
        agents are benchmarked alongside it (shared action streams)."""
        a = bench_agents(["lo", "hi"], episodes=4, horizon=40)
        b = bench_agents(["hi", "med", "lo"], episodes=4, horizon=40)
        assert a["agents"]["lo"] == b["agents"]["lo"]
        assert a["agents"]["hi"] == b["agents"]["hi"]


class TestOrderingViolation:
    def test_ok_when_ordered_with_gap(self):
        assert ordering_violation(fake_report(0.0, 5.0, 10.0)) is None

    def test_violation_when_reordered(self):
        msg = ordering_violation(fake_report(10.0, 5.0, 0.0))
        assert msg is not None and "med" in msg

    def test_violation_when_gap_too_small(self):
        msg = ordering_violation(fake_report(0.0, 5.0, 5.0 + REQUIRED_GAP))
        assert msg is not None

    def test_skipped_when_agent_missing(self):
        report = {"agents": {"lo": {"overall": 0.0}, "hi": {"overall": 1.0}}}
        assert ordering_violation(report) is None

    def test_required_ordering_constant(self):
        assert REQUIRED_ORDERING == ("lo", "med", "hi")
