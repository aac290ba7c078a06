"""Robot-in-a-crowd navigation environment.

A robot steers toward a goal through 10 reactive humans. Humans walk
toward their own goals under social-force style repulsion from each other
and from the robot of their own simulation instance. The discrete
environment action rotates every human's goal-directed heading for the
current step, perturbing crowd motion without touching the robot.

Everything is deterministic: given an initial scenario and an environment
action sequence, the evolution is a pure function. Hot-path kernels work
on raw (px, py, vx, vy) tuples; the dataclass types carry the static
per-body parameters and the public API.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .core import ActionVector, StateVector
from .errors import ConfigurationError, InvalidInputError

Vec2 = tuple[float, float]
Kin = tuple[float, float, float, float]  # px, py, vx, vy

GOAL_REACHED = "goal"
COLLISION = "collision"
RUNNING = "running"

# Heading rotations (degrees) applied to every human's goal bearing.
DEFAULT_ENV_ACTION_ANGLES_DEG = (-30.0, -15.0, 0.0, 15.0, 30.0)

# Human dynamics constants.
_REP_STRENGTH = 1.5
_REP_RANGE = 0.4
_REP_CUTOFF = 3.0
_HUMAN_SPEED_CAP = 1.6
_AT_GOAL_EPS = 1e-9


@dataclass(frozen=True)
class HumanState:
    position: Vec2
    velocity: Vec2
    goal: Vec2
    radius: float = 0.3
    preferred_speed: float = 1.0

    def __post_init__(self):
        if self.radius <= 0 or self.preferred_speed <= 0:
            raise InvalidInputError("human radius and preferred_speed must be > 0")
        for v in (*self.position, *self.velocity, *self.goal):
            if not math.isfinite(v):
                raise InvalidInputError("human state contains non-finite value")


@dataclass(frozen=True)
class RobotState:
    position: Vec2
    velocity: Vec2
    goal: Vec2
    radius: float = 0.3
    max_speed: float = 1.0

    def __post_init__(self):
        if self.radius <= 0 or self.max_speed <= 0:
            raise InvalidInputError("robot radius and max_speed must be > 0")
        if _norm(self.velocity) > self.max_speed + 1e-9:
            raise InvalidInputError("robot velocity exceeds max_speed")


@dataclass(frozen=True)
class CrowdScenario:
    """Initial state of one navigation task: arena, crowd, robot, goal."""

    id: str
    bounds: tuple[float, float, float, float]  # xmin, ymin, xmax, ymax
    humans: tuple[HumanState, ...]
    robot: RobotState
    goal_radius: float = 0.3
    dt: float = 0.25

    def __post_init__(self):
        if len(self.humans) != 10:
            raise ConfigurationError(f"scenario needs exactly 10 humans, got {len(self.humans)}")
        if self.goal_radius <= 0 or self.dt <= 0:
            raise ConfigurationError("goal_radius and dt must be > 0")
        xmin, ymin, xmax, ymax = self.bounds
        if not (xmin < xmax and ymin < ymax):
            raise ConfigurationError("malformed arena bounds")
        if _dist(self.robot.position, self.robot.goal) <= self.goal_radius:
            raise ConfigurationError("robot must start outside its goal radius")
        bodies = [(self.robot.position, self.robot.radius)] + [
            (h.position, h.radius) for h in self.humans
        ]
        for i in range(len(bodies)):
            for j in range(i + 1, len(bodies)):
                if _dist(bodies[i][0], bodies[j][0]) <= bodies[i][1] + bodies[j][1]:
                    raise ConfigurationError(f"initial overlap between bodies {i} and {j}")

    @cached_property
    def human_statics(self) -> tuple[tuple[float, float, float, float], ...]:
        """(goal_x, goal_y, radius, preferred_speed) per human."""
        return tuple((h.goal[0], h.goal[1], h.radius, h.preferred_speed) for h in self.humans)


@dataclass(frozen=True)
class PolicyHandle:
    """Named deterministic robot policy with its fixed parameter set."""

    name: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    def __hash__(self):
        return hash((self.name, tuple(sorted(self.params.items()))))


@dataclass(frozen=True)
class EnvActionDescriptor:
    index: int
    heading_rotation_deg: float


@dataclass(frozen=True)
class CrowdInstanceState:
    robot_pos: Vec2
    robot_vel: Vec2
    human_kin: tuple[Kin, ...]
    scenario: CrowdScenario

    @property
    def robot(self) -> RobotState:
        base = self.scenario.robot
        return RobotState(
            position=self.robot_pos,
            velocity=self.robot_vel,
            goal=base.goal,
            radius=base.radius,
            max_speed=base.max_speed,
        )

    @property
    def humans(self) -> tuple[HumanState, ...]:
        return tuple(
            HumanState(
                position=(k[0], k[1]),
                velocity=(k[2], k[3]),
                goal=(s[0], s[1]),
                radius=s[2],
                preferred_speed=s[3],
            )
            for k, s in zip(self.human_kin, self.scenario.human_statics)
        )


# -- small 2-d helpers -------------------------------------------------------


def _norm(v: Vec2) -> float:
    return math.hypot(v[0], v[1])


def _dist(a: Vec2, b: Vec2) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def _clip_speed(v: Vec2, cap: float) -> Vec2:
    s = _norm(v)
    if s > cap:
        k = cap / s
        return (v[0] * k, v[1] * k)
    return v


# -- environment action set --------------------------------------------------


def env_action_set(
    angles_deg: Sequence[float] = DEFAULT_ENV_ACTION_ANGLES_DEG,
) -> list[EnvActionDescriptor]:
    """The discrete set of crowd-heading perturbations, one per index."""
    return [EnvActionDescriptor(i, a) for i, a in enumerate(angles_deg)]


# -- human dynamics ----------------------------------------------------------


def _step_humans_kin(
    kin: Sequence[Kin],
    statics: Sequence[tuple[float, float, float, float]],
    robot_pos: Vec2,
    robot_radius: float,
    cos_a: float,
    sin_a: float,
    bounds: tuple[float, float, float, float],
    dt: float,
) -> tuple[Kin, ...]:
    xmin, ymin, xmax, ymax = bounds
    n = len(kin)
    cutoff2 = _REP_CUTOFF * _REP_CUTOFF
    exp = math.exp
    sqrt = math.sqrt

    fx = [0.0] * n
    fy = [0.0] * n
    # Pairwise repulsion is equal and opposite; compute each pair once.
    for i in range(n):
        pix, piy = kin[i][0], kin[i][1]
        ri = statics[i][2]
        for j in range(i + 1, n):
            dx, dy = pix - kin[j][0], piy - kin[j][1]
            d2 = dx * dx + dy * dy
            if d2 > cutoff2 or d2 < 1e-24:
                continue
            d = sqrt(d2)
            mag = _REP_STRENGTH * exp((ri + statics[j][2] - d) / _REP_RANGE) / d
            mx, my = mag * dx, mag * dy
            fx[i] += mx
            fy[i] += my
            fx[j] -= mx
            fy[j] -= my
        dx, dy = pix - robot_pos[0], piy - robot_pos[1]
        d2 = dx * dx + dy * dy
        if d2 <= cutoff2 and d2 > 1e-24:
            d = sqrt(d2)
            mag = _REP_STRENGTH * exp((ri + robot_radius - d) / _REP_RANGE) / d
            fx[i] += mag * dx
            fy[i] += mag * dy

    out = []
    for i in range(n):
        px, py = kin[i][0], kin[i][1]
        goal_x, goal_y, radius, pref = statics[i]
        gx, gy = goal_x - px, goal_y - py
        g = math.hypot(gx, gy)
        if g < _AT_GOAL_EPS:
            vx, vy = fx[i], fy[i]
        else:
            speed = min(pref, g / dt) / g
            vx = (cos_a * gx - sin_a * gy) * speed + fx[i]
            vy = (sin_a * gx + cos_a * gy) * speed + fy[i]
        s = math.hypot(vx, vy)
        if s > _HUMAN_SPEED_CAP:
            k = _HUMAN_SPEED_CAP / s
            vx, vy = vx * k, vy * k
        nx = px + vx * dt
        ny = py + vy * dt
        if nx < xmin + radius:
            nx = xmin + radius
        elif nx > xmax - radius:
            nx = xmax - radius
        if ny < ymin + radius:
            ny = ymin + radius
        elif ny > ymax - radius:
            ny = ymax - radius
        out.append((nx, ny, (nx - px) / dt, (ny - py) / dt))
    return tuple(out)


def step_humans(
    humans: Sequence[HumanState],
    robot: RobotState,
    heading_rotation_rad: float,
    bounds: tuple[float, float, float, float],
    dt: float,
) -> tuple[HumanState, ...]:
    """Advance all humans by one step under the perturbed goal headings."""
    kin = [(h.position[0], h.position[1], h.velocity[0], h.velocity[1]) for h in humans]
    statics = [(h.goal[0], h.goal[1], h.radius, h.preferred_speed) for h in humans]
    new_kin = _step_humans_kin(
        kin,
        statics,
        robot.position,
        robot.radius,
        math.cos(heading_rotation_rad),
        math.sin(heading_rotation_rad),
        bounds,
        dt,
    )
    return tuple(
        HumanState(
            position=(k[0], k[1]),
            velocity=(k[2], k[3]),
            goal=h.goal,
            radius=h.radius,
            preferred_speed=h.preferred_speed,
        )
        for k, h in zip(new_kin, humans)
    )


# -- robot policies ----------------------------------------------------------

POLICY_PARAMS: dict[str, dict[str, float]] = {
    # Pure goal attraction, no avoidance at all.
    "lo": {},
    # Goal attraction plus distance-based repulsion with a tangential
    # deflection so head-on blockers are passed rather than pushed against.
    "med": {
        "sense_range": 2.0,
        "strength": 0.75,
        "range": 0.45,
        "tangent": 0.7,
    },
    # Predictive avoidance: distance repulsion scaled up when the
    # time-to-closest-approach is short, plus anticipatory slow-down.
    "hi": {
        "sense_range": 3.5,
        "strength": 1.1,
        "range": 0.5,
        "tangent": 0.9,
        "pred_horizon": 4.0,
        "urgency_tau": 1.2,
        "margin": 0.15,
        "slowdown_dist": 0.5,
        "min_slow": 0.4,
    },
}


def get_policy(name: str) -> PolicyHandle:
    if name not in POLICY_PARAMS:
        raise ConfigurationError(
            f"unknown policy {name!r}; known: {sorted(POLICY_PARAMS)}"
        )
    return PolicyHandle(name=name, params=POLICY_PARAMS[name])


def _policy_cmd(
    policy: PolicyHandle,
    px: float,
    py: float,
    goal: Vec2,
    max_speed: float,
    robot_radius: float,
    kin: Sequence[Kin],
    radii: Sequence[float],
) -> Vec2:
    gx, gy = goal[0] - px, goal[1] - py
    g = math.hypot(gx, gy)
    if g < 1e-12:
        return (0.0, 0.0)
    bx, by = gx / g, gy / g
    dvx, dvy = bx * max_speed, by * max_speed

    name = policy.name
    if name == "lo":
        return (dvx, dvy)
    if name == "med":
        ax, ay = _distance_avoidance(policy.params, px, py, robot_radius, kin, radii, (bx, by))
        slow = 1.0
    elif name == "hi":
        ax, ay, slow = _predictive_avoidance(
            policy.params, px, py, robot_radius, kin, radii, (bx, by), (dvx, dvy)
        )
    else:
        raise ConfigurationError(f"unknown policy {name!r}")
    return _clip_speed((dvx * slow + ax, dvy * slow + ay), max_speed)


def robot_policy(
    policy: PolicyHandle,
    robot: RobotState,
    humans: Sequence[HumanState],
) -> ActionVector:
    """Velocity command (m/s, length 2) for the robot, clipped to max_speed."""
    kin = [(h.position[0], h.position[1], h.velocity[0], h.velocity[1]) for h in humans]
    radii = [h.radius for h in humans]
    return ActionVector(
        _policy_cmd(
            policy,
            robot.position[0],
            robot.position[1],
            robot.goal,
            robot.max_speed,
            robot.radius,
            kin,
            radii,
        )
    )


def _side_sign(ux: float, uy: float, bearing: Vec2) -> float:
    cross = ux * bearing[1] - uy * bearing[0]
    if abs(cross) < 1e-9:
        return 1.0
    return math.copysign(1.0, cross)


def _distance_avoidance(params, px, py, robot_radius, kin, radii, bearing):
    fx, fy = 0.0, 0.0
    sense = params["sense_range"]
    strength = params["strength"]
    rng = params["range"]
    tangent = params["tangent"]
    for k, radius in zip(kin, radii):
        dx, dy = px - k[0], py - k[1]
        d = math.hypot(dx, dy)
        if d >= sense or d < 1e-12:
            continue
        ux, uy = dx / d, dy / d
        w = strength * math.exp((robot_radius + radius - d) / rng)
        s = _side_sign(ux, uy, bearing)
        fx += w * (ux + tangent * -uy * s)
        fy += w * (uy + tangent * ux * s)
    return fx, fy


def _predictive_avoidance(params, px, py, robot_radius, kin, radii, bearing, intended):
    """Repulsion from each human, scaled by how soon the closest approach
    happens; returns the force and a slow-down factor for the goal term."""
    fx, fy = 0.0, 0.0
    slow = 1.0
    sense = params["sense_range"]
    for k, radius in zip(kin, radii):
        rx, ry = k[0] - px, k[1] - py
        d = math.hypot(rx, ry)
        if d >= sense or d < 1e-12:
            continue
        vx, vy = k[2] - intended[0], k[3] - intended[1]
        vv = vx * vx + vy * vy
        if vv < 1e-12:
            t_star = 0.0
            d_min = d
        else:
            t_star = min(max(-(rx * vx + ry * vy) / vv, 0.0), params["pred_horizon"])
            d_min = math.hypot(rx + vx * t_star, ry + vy * t_star)
        r_sum = robot_radius + radius + params["margin"]
        urgency = math.exp(-t_star / params["urgency_tau"])
        w = params["strength"] * math.exp((r_sum - min(d, d_min)) / params["range"])
        w *= 0.3 + 0.7 * urgency
        ux, uy = rx / -d, ry / -d  # away from the human's current position
        s = _side_sign(ux, uy, bearing)
        fx += w * (ux + params["tangent"] * -uy * s)
        fy += w * (uy + params["tangent"] * ux * s)
        # Slow down when a close approach is imminent directly ahead.
        gap = d - r_sum
        if gap < params["slowdown_dist"] and (rx * bearing[0] + ry * bearing[1]) > 0:
            slow = min(slow, max(params["min_slow"], gap / params["slowdown_dist"]))
    return fx, fy, slow


# -- terminal check ----------------------------------------------------------


def _terminal_kind_kin(
    robot_pos: Vec2,
    goal: Vec2,
    goal_radius: float,
    robot_radius: float,
    kin: Sequence[Kin],
    radii: Sequence[float],
) -> str:
    px, py = robot_pos
    dx, dy = px - goal[0], py - goal[1]
    if dx * dx + dy * dy <= goal_radius * goal_radius:
        return GOAL_REACHED
    for k, radius in zip(kin, radii):
        hx, hy = px - k[0], py - k[1]
        r = robot_radius + radius
        if hx * hx + hy * hy <= r * r:
            return COLLISION
    return RUNNING


def check_terminal(robot: RobotState, humans: Sequence[HumanState], goal_radius: float) -> str:
    """Goal reached beats collision when both hold at once."""
    return _terminal_kind_kin(
        robot.position,
        robot.goal,
        goal_radius,
        robot.radius,
        [(h.position[0], h.position[1], 0.0, 0.0) for h in humans],
        [h.radius for h in humans],
    )


# -- coupled-sim environment adapter ----------------------------------------


class CrowdNavEnvironment:
    """Adapter exposing crowd navigation through the coupled-sim contract."""

    action_dim = 2

    def __init__(self, angles_deg: Sequence[float] = DEFAULT_ENV_ACTION_ANGLES_DEG):
        self.actions = env_action_set(angles_deg)
        self._rotations = tuple(
            (math.cos(math.radians(a.heading_rotation_deg)),
             math.sin(math.radians(a.heading_rotation_deg)))
            for a in self.actions
        )

    @property
    def num_env_actions(self) -> int:
        return len(self.actions)

    def initial_state(self, s_init: CrowdScenario) -> CrowdInstanceState:
        if not isinstance(s_init, CrowdScenario):
            raise ConfigurationError("initial state must be a CrowdScenario")
        return CrowdInstanceState(
            robot_pos=s_init.robot.position,
            robot_vel=s_init.robot.velocity,
            human_kin=tuple(
                (h.position[0], h.position[1], h.velocity[0], h.velocity[1])
                for h in s_init.humans
            ),
            scenario=s_init,
        )

    def step(self, state: CrowdInstanceState, action_index: int, policy: PolicyHandle):
        scen = state.scenario
        statics = scen.human_statics
        cos_a, sin_a = self._rotations[action_index]
        robot = scen.robot
        kin = _step_humans_kin(
            state.human_kin,
            statics,
            state.robot_pos,
            robot.radius,
            cos_a,
            sin_a,
            scen.bounds,
            scen.dt,
        )
        radii = [s[2] for s in statics]
        cmd = _policy_cmd(
            policy,
            state.robot_pos[0],
            state.robot_pos[1],
            robot.goal,
            robot.max_speed,
            robot.radius,
            kin,
            radii,
        )
        new_state = CrowdInstanceState(
            robot_pos=(
                state.robot_pos[0] + cmd[0] * scen.dt,
                state.robot_pos[1] + cmd[1] * scen.dt,
            ),
            robot_vel=cmd,
            human_kin=kin,
            scenario=scen,
        )
        return new_state, ActionVector(cmd)

    def agent_state(self, state: CrowdInstanceState) -> StateVector:
        return StateVector(state.robot_pos)

    def terminal_kind(self, state: CrowdInstanceState) -> str:
        scen = state.scenario
        return _terminal_kind_kin(
            state.robot_pos,
            scen.robot.goal,
            scen.goal_radius,
            scen.robot.radius,
            state.human_kin,
            [s[2] for s in scen.human_statics],
        )


# -- built-in scenarios ------------------------------------------------------


def _circle_crossing_humans(center: Vec2, radius: float, phase_deg: float) -> tuple[HumanState, ...]:
    humans = []
    for k in range(10):
        theta = math.radians(phase_deg + 36.0 * k)
        c, s = math.cos(theta), math.sin(theta)
        start = (center[0] + radius * c, center[1] + radius * s)
        goal = (center[0] - radius * c, center[1] - radius * s)
        humans.append(HumanState(position=start, velocity=(0.0, 0.0), goal=goal))
    return tuple(humans)


def builtin_scenario(name: str) -> CrowdScenario:
    """Named corner-to-corner navigation tasks through a circle-crossing crowd."""
    bounds = (0.0, 0.0, 12.0, 12.0)
    center = (6.0, 6.0)
    if name == "corner-NE":
        robot = RobotState(position=(1.0, 1.0), velocity=(0.0, 0.0), goal=(11.0, 11.0))
        humans = _circle_crossing_humans(center, 3.5, phase_deg=8.0)
    elif name == "corner-SE":
        robot = RobotState(position=(1.0, 11.0), velocity=(0.0, 0.0), goal=(11.0, 1.0))
        humans = _circle_crossing_humans(center, 3.5, phase_deg=17.0)
    else:
        raise ConfigurationError(f"unknown scenario {name!r}")
    return CrowdScenario(id=name, bounds=bounds, humans=humans, robot=robot)


BUILTIN_SCENARIOS = ("corner-NE", "corner-SE")


# -- episode scoring for the benchmark harness -------------------------------

SUCCESS_BONUS = 10.0
COLLISION_PENALTY = -10.0
STEP_PENALTY = -0.01
PROGRESS_WEIGHT = 1.0


def score_episode(
    robot_positions: Sequence[Vec2],
    goal: Vec2,
    terminal_kind: str,
) -> float:
    """Scalar quality of one single-instance episode.

    Progress shaping (distance-to-goal decrease) plus a per-step penalty,
    with a success bonus or collision penalty at the end. Used only to
    verify the shipped lo < med < hi policy ordering.
    """
    if len(robot_positions) < 1:
        raise InvalidInputError("need at least the initial robot position")
    score = 0.0
    prev = _dist(robot_positions[0], goal)
    for pos in robot_positions[1:]:
        cur = _dist(pos, goal)
        score += PROGRESS_WEIGHT * (prev - cur) + STEP_PENALTY
        prev = cur
    if terminal_kind == GOAL_REACHED:
        score += SUCCESS_BONUS
    elif terminal_kind == COLLISION:
        score += COLLISION_PENALTY
    return score


def run_single_episode(
    scenario: CrowdScenario,
    policy: PolicyHandle,
    env_action_indices: Iterable[int],
    horizon: int,
    env: CrowdNavEnvironment | None = None,
) -> tuple[list[Vec2], str, int]:
    """Roll one instance forward under a fixed environment-action stream.

    Returns (robot positions incl. initial, terminal kind, steps taken).
    """
    env = env or CrowdNavEnvironment()
    state = env.initial_state(scenario)
    positions = [state.robot_pos]
    kind = env.terminal_kind(state)
    steps = 0
    it = iter(env_action_indices)
    while kind == RUNNING and steps < horizon:
        state, _ = env.step(state, next(it), policy)
        positions.append(state.robot_pos)
        kind = env.terminal_kind(state)
        steps += 1
    return positions, kind, steps
