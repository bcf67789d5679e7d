"""Nominal fields, the stepping pipeline, trajectory integration, and patrol.

One avoidance step runs, in order: field evaluation per obstacle, weights
(smooth for disjoint obstacles, nearest-member one-hot inside declared
groups), gamma-gated rotation angles, rotated frames, per-obstacle gains and
modulations, combination, optional consistency reshaping of the nominal
field, and explicit Euler integration ``x_{t+1} = x_t + v_t dt``.

Patrol mode replaces the nominal field with the previous unit direction: the
modulated direction is re-normalised every step, producing orbits that hug
the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .basis import (
    RotationSchedule,
    Variant,
    VARIANT_FALLBACK,
    angle_between,
    basis_2d,
    basis_3d,
    manipulate_basis,
    rotation_angle,
)
from .errors import (
    DegenerateVariantError,
    DimensionError,
    DomainError,
    FieldSingularError,
    InsideObstacleError,
    MissingGoalError,
    NonFiniteStateError,
    NoValidVariantError,
    ZeroVelocityError,
)
from .geometry import GammaEval, ObstacleSpec
from .modulation import (
    CombinationPolicy,
    assemble_modulation,
    combine,
    combine_coordinates,
    consistency_transform,
    eigen_gains,
    obstacle_weights,
    trap_weights,
)

STALL_TOL = 1e-4
STALL_WINDOW = 50
INSIDE_TOL = 1e-6


# --------------------------------------------------------------------------
# Nominal vector fields


@dataclass(frozen=True)
class LinearAttractor:
    """f(x) = -(x - goal); a globally convergent straight-line pull."""

    goal: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "goal", tuple(float(v) for v in self.goal))

    def __call__(self, state: np.ndarray) -> np.ndarray:
        return np.asarray(self.goal) - state


@dataclass(frozen=True)
class LimitCycle:
    """Planar limit-cycle field (zero third component), rescaled to ``speed``.

    f1 = x2 - x1 q, f2 = -x1 - x2 q with q = x1^2 + x2 sin(x1) - 1.
    """

    speed: float = 10.0

    def __call__(self, state: np.ndarray) -> np.ndarray:
        x1, x2 = float(state[0]), float(state[1])
        q = x1 * x1 + x2 * math.sin(x1) - 1.0
        raw = np.zeros(state.shape[0])
        raw[0] = x2 - x1 * q
        raw[1] = -x1 - x2 * q
        n = math.sqrt(float(raw @ raw))
        if n == 0.0:
            raise FieldSingularError("limit-cycle field vanishes at this state")
        return raw * (self.speed / n)


@dataclass(frozen=True)
class ConstantField:
    """Uniform field, e.g. a steady drift."""

    direction: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "direction", tuple(float(v) for v in self.direction))

    def __call__(self, state: np.ndarray) -> np.ndarray:
        return np.asarray(self.direction, dtype=float)


VectorField = Callable[[np.ndarray], np.ndarray]


def field_eval(field_fn: VectorField, state) -> np.ndarray:
    """Evaluate a nominal field at a finite state."""
    s = np.asarray(state, dtype=float)
    if not np.all(np.isfinite(s)):
        raise NonFiniteStateError("state contains NaN or inf")
    return np.asarray(field_fn(s), dtype=float)


def goal_of(field_fn) -> tuple[float, ...] | None:
    return getattr(field_fn, "goal", None)


# --------------------------------------------------------------------------
# Side-selection indicators


@dataclass(frozen=True)
class FixedIndicator:
    """Constant side choice."""

    y: int = 1

    def __post_init__(self):
        if self.y not in (1, -1):
            raise DomainError("fixed indicator must be +1 or -1")


@dataclass(frozen=True)
class GoalLineIndicator:
    """Side of the line through the goal and the obstacle center (2-D only)."""


@dataclass(frozen=True)
class ComponentSignIndicator:
    """-1 where the named state component is positive, +1 where negative.

    ``axis`` is one-based (axis=2 reads the second coordinate). ``flip``
    inverts the rule off the dividing line.
    """

    axis: int = 2
    flip: bool = False

    def __post_init__(self):
        if self.axis < 1:
            raise DomainError("component axis is one-based and must be >= 1")


def indicator_sign(policy, state, obstacle: ObstacleSpec, goal=None) -> int:
    """Evaluate a side-selection policy to +1 or -1.

    Exactly on a dividing line the result is +1 (documented tie-break; the
    set is measure zero).
    """
    if policy is None or isinstance(policy, FixedIndicator):
        return 1 if policy is None else policy.y
    s = np.asarray(state, dtype=float)
    if isinstance(policy, ComponentSignIndicator):
        v = float(s[policy.axis - 1])
        if v == 0.0:
            return 1
        y = -1 if v > 0.0 else 1
        return -y if policy.flip else y
    if isinstance(policy, GoalLineIndicator):
        if goal is None:
            raise MissingGoalError("goal-line indicator requires a goal point")
        if s.shape[0] != 2:
            raise DimensionError("goal-line indicator is defined in 2-D only")
        u = np.asarray(obstacle.center) - np.asarray(goal, dtype=float)
        w = s - np.asarray(goal, dtype=float)
        cross = u[0] * w[1] - u[1] * w[0]
        return -1 if cross < 0.0 else 1
    raise DomainError(f"unknown indicator policy {policy!r}")


# --------------------------------------------------------------------------
# Scenario and trajectory containers


@dataclass(frozen=True)
class Scenario:
    """Declarative description of one experiment."""

    dim: int
    field: Any
    obstacles: tuple[ObstacleSpec, ...]
    starts: tuple[tuple[float, ...], ...]
    dt: float = 0.01
    max_steps: int = 5000
    goal_tol: float = 0.1
    policy: CombinationPolicy = field(default_factory=CombinationPolicy)
    sched: RotationSchedule = field(default_factory=RotationSchedule)
    mode: str = "avoid"
    method: str = "oamoc"
    stall_tol: float = STALL_TOL
    stall_window: int = STALL_WINDOW
    boundary_tol: float = INSIDE_TOL
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        object.__setattr__(
            self, "starts", tuple(tuple(float(v) for v in s) for s in self.starts)
        )
        if self.dim not in (2, 3):
            raise DimensionError("scenario dimension must be 2 or 3")
        if self.mode not in ("avoid", "patrol"):
            raise DomainError(f"unknown mode {self.mode!r}")
        if self.method not in ("oamoc", "baseline"):
            raise DomainError(f"unknown method {self.method!r}")
        if self.dt <= 0 or not np.isfinite(self.dt):
            raise DomainError("dt must be positive")
        if self.max_steps < 1:
            raise DomainError("max_steps must be at least 1")
        if self.goal_tol <= 0:
            raise DomainError("goal_tol must be positive")
        if not self.starts:
            raise DomainError("at least one start point is required")
        for obs in self.obstacles:
            if obs.dim != self.dim:
                raise DimensionError("obstacle dimension disagrees with scenario")
        for s in self.starts:
            if len(s) != self.dim:
                raise DimensionError("start dimension disagrees with scenario")
            for obs in self.obstacles:
                diff = np.asarray(s) - obs._center
                val = float(np.sum(diff**obs._two_p / obs._scales))
                if val <= 1.0:
                    raise DomainError(
                        f"start {s} is not strictly outside obstacle at {obs.center}"
                    )
        if self.mode == "patrol" and not self.obstacles:
            raise DomainError("patrol mode needs at least one obstacle")


@dataclass
class StepRecord:
    """Diagnostics for one integration step.

    ``thetas`` has one column in 2-D (the frame angle) and two in 3-D (the
    angles about the e3 and e2 columns, in that order); one row per obstacle.
    ``radial_gains`` holds each obstacle's lambda_1 after the tail rule.
    """

    step: int
    state: np.ndarray
    velocity: np.ndarray
    gammas: np.ndarray
    min_gamma: float
    thetas: np.ndarray
    weights: np.ndarray
    radial_gains: np.ndarray


@dataclass
class Trajectory:
    """Time-stamped result of one simulated start."""

    records: list[StepRecord]
    status: str
    dt: float
    start: tuple[float, ...]

    def states(self) -> np.ndarray:
        return np.array([r.state for r in self.records])

    @property
    def final_state(self) -> np.ndarray:
        return self.records[-1].state

    @property
    def min_gamma(self) -> float:
        return min(r.min_gamma for r in self.records)

    def __len__(self) -> int:
        return len(self.records)


# --------------------------------------------------------------------------
# Stepping internals


class _Context:
    """Scenario unpacked into flat arrays for the stepping loop."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.dim = scenario.dim
        obs = scenario.obstacles
        self.n_obs = len(obs)
        self.obstacles = obs
        if obs:
            self.centers = np.array([o._center for o in obs])
            self.scales = np.array([o._scales for o in obs])
            self.two_p = np.array([o._two_p for o in obs])
            self.grad_coef = self.two_p / self.scales
        self.goal = goal_of(scenario.field)
        self.goal_arr = None if self.goal is None else np.asarray(self.goal, float)
        self.policy = scenario.policy
        self.sched = scenario.sched
        self.rotate = scenario.method == "oamoc"
        self.consistency = (
            scenario.policy.consistency and scenario.method == "oamoc"
        )
        self.theta_slots = 1 if self.dim == 2 else 2
        # group id -> member indices, in declaration order
        groups: dict[int, list[int]] = {}
        for i, o in enumerate(obs):
            if o.group_id is not None:
                groups.setdefault(o.group_id, []).append(i)
        self.groups = groups

    def gammas_and_grads(self, state: np.ndarray):
        diff = state - self.centers
        vals = np.sum(diff**self.two_p / self.scales, axis=1)
        grads = self.grad_coef * diff ** (self.two_p - 1)
        return vals, grads

    def gammas_only(self, state: np.ndarray) -> np.ndarray:
        diff = state - self.centers
        return np.sum(diff**self.two_p / self.scales, axis=1)


def _combined_weights(gammas: np.ndarray, ctx: _Context) -> np.ndarray:
    """Per-obstacle weights: one-hot inside groups, smooth across the rest."""
    n = gammas.size
    if n == 1:
        return np.ones(1)
    grouped = set()
    reps = []
    for members in ctx.groups.values():
        sub = gammas[members]
        rep = members[int(np.argmin(sub))]
        reps.append(rep)
        grouped.update(members)
    candidates = [i for i in range(n) if i not in grouped] + reps
    candidates.sort()
    w = np.zeros(n)
    cg = np.maximum(gammas[candidates], 1.0)
    w[candidates] = obstacle_weights(cg)
    return w


def _frames_for(grad_eval, ctx: _Context):
    """Frames for one obstacle: [(E, eta)] honouring the variant fallback."""
    if ctx.dim == 2:
        return [(basis_2d(grad_eval), 1.0)]
    frames = []
    for variant, eta in ctx.policy.variants:
        E = None
        try:
            E = basis_3d(grad_eval, variant)
        except DegenerateVariantError:
            for fb in VARIANT_FALLBACK:
                if fb is variant:
                    continue
                try:
                    E = basis_3d(grad_eval, fb)
                    break
                except DegenerateVariantError:
                    continue
        if E is None:
            raise NoValidVariantError("gradient defines no usable variant")
        frames.append((E, eta))
    return frames


def _compute_velocity(state: np.ndarray, f: np.ndarray, ctx: _Context,
                      prev: list[np.ndarray]):
    """One pipeline pass; returns (velocity, M, diagnostics)."""
    n = ctx.n_obs
    thetas = np.zeros((n, ctx.theta_slots))
    if n == 0:
        return f.copy(), np.eye(ctx.dim), (np.zeros(0), np.inf, thetas, np.zeros(0), np.zeros(0))
    gammas, grads = ctx.gammas_and_grads(state)
    min_gamma = float(gammas.min())
    weights = _combined_weights(gammas, ctx)
    product_mode = ctx.policy.mode == "product"
    rho = ctx.policy.reactivity
    f_norm = math.sqrt(float(f @ f))
    mods = []
    radial = np.zeros(n)
    for j in range(n):
        raw_gamma = float(gammas[j])
        gam = max(raw_gamma, 1.0)
        grad = grads[j]
        gnorm = math.sqrt(float(grad @ grad))
        ge = GammaEval(gam, grad, gnorm)
        frames = _frames_for(ge, ctx)
        e1 = grad / gnorm
        inside = raw_gamma < 1.0
        outbound = float(e1 @ f) >= 0.0
        moving_away = ctx.policy.tail_effect and not inside and outbound
        if ctx.rotate and f_norm > 0.0:
            y = indicator_sign(
                ctx.obstacles[j].indicator, state, ctx.obstacles[j], ctx.goal
            )
            theta_f = angle_between(f, e1)
            if ctx.dim == 2:
                thetas[j, 0] = rotation_angle(theta_f, gam, ctx.sched, y)
            else:
                for slot, axis in enumerate((3, 2)):
                    if axis in ctx.sched.axes:
                        thetas[j, slot] = rotation_angle(
                            theta_f, gam, ctx.sched, y, axis=axis
                        )
            frames = [
                (manipulate_basis(E, f, ge, ctx.sched, y), eta) for E, eta in frames
            ]
        mu_w = weights[j] if product_mode else 1.0
        lams = eigen_gains(gam, rho, mu_w, moving_away, ctx.dim)
        if inside:
            # Overshoot within the scenario tolerance: against inward motion
            # the raw gamma's negative radial gain pushes back out; outward
            # motion passes through unscaled so the excursion cannot lock in.
            lams[0] = 1.0 if outbound else 1.0 - raw_gamma ** (-1.0 / rho)
        radial[j] = lams[0]
        if ctx.dim == 2:
            M_j = assemble_modulation(frames[0][0], lams)
        else:
            M_j = combine_coordinates(frames, lams)
        mods.append(M_j)
    M = combine(mods, weights, ctx.policy.mode)
    if ctx.consistency and prev:
        if ctx.policy.consistency_window == "matrix_sum":
            velocity = (M + prev[-1]) @ f
        else:
            f_used = consistency_transform(prev, f, ctx.policy.consistency_window)
            velocity = M @ f_used
    else:
        velocity = M @ f
    return velocity, M, (gammas, min_gamma, thetas, weights, radial)


def step_oamoc(state, scenario: Scenario, history=()):
    """Run one avoidance step from ``state``.

    ``history`` is the ordered list of past combined modulation matrices
    (oldest first); with the default policy only the last entry matters.
    Returns (next_state, record, M) where M is this step's combined matrix.
    """
    ctx = scenario if isinstance(scenario, _Context) else _Context(scenario)
    s = np.asarray(state, dtype=float)
    if not np.all(np.isfinite(s)):
        raise NonFiniteStateError("state contains NaN or inf")
    if ctx.n_obs:
        gam = ctx.gammas_only(s)
        if float(gam.min()) < 1.0 - ctx.scenario.boundary_tol:
            raise InsideObstacleError(
                f"state {s.tolist()} is inside an obstacle (min gamma {gam.min():.9g})"
            )
    f = field_eval(ctx.scenario.field, s)
    velocity, M, diag = _compute_velocity(s, f, ctx, list(history))
    gammas, min_gamma, thetas, weights, radial = diag
    rec = StepRecord(0, s, velocity, gammas, min_gamma, thetas, weights, radial)
    return s + velocity * ctx.scenario.dt, rec, M


def _simulate_avoid(start, ctx: _Context) -> Trajectory:
    sc = ctx.scenario
    state = np.asarray(start, dtype=float)
    records: list[StepRecord] = []
    history: list[np.ndarray] = []
    keep_full = ctx.policy.consistency_window == "full"
    stall_run = 0
    status = "max_steps"
    for t in range(sc.max_steps):
        if not np.all(np.isfinite(state)):
            raise NonFiniteStateError(f"state diverged at step {t}")
        if ctx.n_obs:
            gam_now = ctx.gammas_only(state)
            if float(gam_now.min()) < 1.0 - sc.boundary_tol:
                raise InsideObstacleError(
                    f"step {t}: state {state.tolist()} is inside an obstacle "
                    f"(min gamma {gam_now.min():.9g})"
                )
        f = field_eval(sc.field, state)
        velocity, M, diag = _compute_velocity(state, f, ctx, history)
        gammas, min_gamma, thetas, weights, radial = diag
        records.append(
            StepRecord(t, state, velocity, gammas, min_gamma, thetas, weights, radial)
        )
        if ctx.goal_arr is not None:
            dist = state - ctx.goal_arr
            if math.sqrt(float(dist @ dist)) <= sc.goal_tol:
                status = "converged"
                break
        f_norm = math.sqrt(float(f @ f))
        v_norm = math.sqrt(float(velocity @ velocity))
        if v_norm < sc.stall_tol * f_norm:
            stall_run += 1
            if stall_run >= sc.stall_window:
                status = "stalled"
                break
        else:
            stall_run = 0
        # Chatter guard: a state pinned between obstacles can oscillate with
        # a large velocity that never satisfies the magnitude rule, so also
        # treat a collapsed net displacement over the window as stagnation.
        if t >= sc.stall_window:
            moved = state - records[t - sc.stall_window].state
            budget = 100.0 * sc.stall_tol * f_norm * sc.stall_window * sc.dt
            if math.sqrt(float(moved @ moved)) < budget:
                status = "stalled"
                break
        if ctx.consistency:
            if keep_full:
                history.append(M)
            else:
                history[:] = [M]
        state = state + velocity * sc.dt
    return Trajectory(records, status, sc.dt, tuple(float(v) for v in start))


def patrol_step(state, velocity_dir, scenario: Scenario, ctx: _Context | None = None):
    """One patrol step: move along the unit direction, then re-aim it.

    The position integrates with the incoming direction; the next direction
    is the modulated previous one, re-normalised to unit length.
    """
    ctx = ctx or _Context(scenario)
    s = np.asarray(state, dtype=float)
    d = np.asarray(velocity_dir, dtype=float)
    nd = math.sqrt(float(d @ d))
    if abs(nd - 1.0) > 1e-9:
        raise DomainError("patrol direction must be a unit vector")
    _, M, diag = _compute_velocity(s, d, ctx, [])
    new_dir = M @ d
    n = math.sqrt(float(new_dir @ new_dir))
    if n < 1e-14:
        raise ZeroVelocityError("modulation annihilated the patrol direction")
    return s + d * scenario.dt, new_dir / n, diag


def _simulate_patrol(start, ctx: _Context) -> Trajectory:
    sc = ctx.scenario
    state = np.asarray(start, dtype=float)
    direction = ctx.centers[0] - state
    direction = direction / math.sqrt(float(direction @ direction))
    records: list[StepRecord] = []
    status = "max_steps"
    for t in range(sc.max_steps):
        try:
            next_state, next_dir, diag = patrol_step(state, direction, sc, ctx)
        except ZeroVelocityError:
            status = "stalled"
            break
        gammas, min_gamma, thetas, weights, radial = diag
        records.append(
            StepRecord(t, state, direction, gammas, min_gamma, thetas, weights, radial)
        )
        # Block a move that would land inside; the unrotated method ends here.
        nxt = ctx.gammas_only(next_state)
        if float(nxt.min()) < 1.0 - sc.boundary_tol:
            status = "stalled"
            break
        state, direction = next_state, next_dir
    return Trajectory(records, status, sc.dt, tuple(float(v) for v in start))


def simulate(scenario: Scenario) -> list[Trajectory]:
    """Simulate every start of a scenario; one trajectory per start, in order.

    Statuses: "converged" (goal reached within tolerance), "stalled"
    (velocity collapsed, or a patrol hit the boundary), "max_steps".
    """
    ctx = _Context(scenario)
    runner = _simulate_patrol if scenario.mode == "patrol" else _simulate_avoid
    return [runner(s, ctx) for s in scenario.starts]
