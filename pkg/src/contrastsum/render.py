"""Rendering of persisted trajectories to per-step vector frames.

Both instances are drawn overlaid by default (robot glyphs in distinct
colors, each instance's humans at reduced opacity); ``side_by_side=True``
draws one panel per instance instead. Frames are SVG; an index document
sequences them for viewing or external video encoding, e.g.

    ffmpeg -framerate 8 -i frame_%04d.png out.mp4   (after svg -> png)
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.patches import Circle

from .trajfile import TrajectoryFileData, read_trajectory_file

ROBOT_COLORS = ("tab:blue", "tab:orange")
HUMAN_ALPHA = 0.25


def _frame_states(data: TrajectoryFileData):
    """Per-frame (robot positions pair, human rows pair); frame 0 is the
    initial state, so a k-step trajectory yields k+1 frames."""
    scen = data.scenario
    start = (scen.robot.position[0], scen.robot.position[1])
    humans0 = [[h.position[0], h.position[1], 0.0, 0.0] for h in scen.humans]
    frames = [((start, start), (humans0, humans0))]
    for rec in data.steps:
        robots = (tuple(rec["agent_state_1"]), tuple(rec["agent_state_2"]))
        frames.append((robots, (rec["humans_1"], rec["humans_2"])))
    return frames


def _draw_instance(ax, scen, robot_pos, humans, color, human_color, trail):
    for hx, hy, _, _ in humans:
        ax.add_patch(Circle((hx, hy), scen.humans[0].radius, color=human_color, alpha=HUMAN_ALPHA))
    if len(trail) > 1:
        ax.plot([p[0] for p in trail], [p[1] for p in trail], color=color, lw=1.0, alpha=0.6)
    ax.add_patch(Circle(robot_pos, scen.robot.radius, color=color))


def _setup_axes(ax, scen):
    xmin, ymin, xmax, ymax = scen.bounds
    ax.set_xlim(xmin, xmax)
    ax.set_ylim(ymin, ymax)
    ax.set_aspect("equal")
    ax.add_patch(
        Circle(scen.robot.goal, scen.goal_radius, fill=False, color="green", lw=1.5)
    )
    ax.plot(*scen.robot.goal, marker="*", color="green", ms=10)


def render(
    trajectory_path: str | Path,
    out_dir: str | Path,
    side_by_side: bool = False,
) -> dict:
    """Write one SVG frame per step plus an index document; returns the index."""
    data = read_trajectory_file(trajectory_path)
    scen = data.scenario
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pair = data.header["pair"]
    frames = _frame_states(data)
    trails: tuple[list, list] = ([], [])
    frame_files = []

    for k, (robots, humans) in enumerate(frames):
        trails[0].append(robots[0])
        trails[1].append(robots[1])
        if side_by_side:
            fig, axes = plt.subplots(1, 2, figsize=(8, 4))
        else:
            fig, ax = plt.subplots(figsize=(4.5, 4.5))
            axes = (ax, ax)
        for i in (0, 1):
            if side_by_side or i == 0:
                _setup_axes(axes[i], scen)
            _draw_instance(
                axes[i], scen, robots[i], humans[i], ROBOT_COLORS[i], ROBOT_COLORS[i], trails[i]
            )
            if side_by_side:
                axes[i].set_title(pair[i])
        if not side_by_side:
            axes[0].set_title(f"{pair[0]} (blue) vs {pair[1]} (orange)  t={k}")
        name = f"frame_{k:04d}.svg"
        fig.savefig(out / name)
        plt.close(fig)
        frame_files.append(name)

    index = {
        "trajectory": str(trajectory_path),
        "pair": pair,
        "scenario": data.header["scenario_id"],
        "total_reward": data.footer["total_reward"],
        "frames": frame_files,
        "layout": "side-by-side" if side_by_side else "overlay",
    }
    (out / "index.json").write_text(json.dumps(index, indent=2))
    html = ["<html><body>"]
    html += [f'<img src="{f}" style="display:block">' for f in frame_files]
    html.append("</body></html>")
    (out / "index.html").write_text("\n".join(html))
    return index
