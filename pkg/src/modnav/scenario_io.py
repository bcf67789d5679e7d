"""Scenario documents and trajectory files.

Scenarios are YAML with a strict schema: unknown keys are rejected so a typo
in a tuning parameter cannot silently change the dynamics. Trajectories are
CSV with 17 significant digits, which round-trips 64-bit floats exactly.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
import yaml

from .basis import RotationSchedule, Variant
from .dynamics import (
    ComponentSignIndicator,
    ConstantField,
    FixedIndicator,
    GoalLineIndicator,
    LimitCycle,
    LinearAttractor,
    Scenario,
    StepRecord,
    Trajectory,
)
from .errors import ScenarioError
from .geometry import ObstacleSpec
from .modulation import CombinationPolicy

_TOP_KEYS = {
    "name", "dimension", "field", "obstacles", "starts", "dt", "max_steps",
    "goal_tol", "method", "mode", "rotation", "policy", "stall_tol",
    "stall_window", "boundary_tol", "outputs",
}
_FIELD_KEYS = {"kind", "goal", "speed", "direction"}
_OBSTACLE_KEYS = {"center", "a", "p", "group", "indicator"}
_INDICATOR_KEYS = {"rule", "y", "axis", "flip"}
_ROTATION_KEYS = {"delta1", "delta2", "axes", "per_axis"}
_POLICY_KEYS = {
    "combination", "reactivity", "tail_effect", "consistency",
    "consistency_window", "variants",
}
_OUTPUT_KEYS = {"trajectory", "plot"}


def _require_map(node, where):
    if not isinstance(node, dict):
        raise ScenarioError(f"{where}: expected a mapping, got {type(node).__name__}")
    return node


def _check_keys(node, allowed, where):
    unknown = set(node) - allowed
    if unknown:
        raise ScenarioError(
            f"{where}: unknown key(s) {sorted(unknown)}; allowed: {sorted(allowed)}"
        )


def _vector(node, dim, where):
    if not isinstance(node, (list, tuple)) or len(node) != dim:
        raise ScenarioError(f"{where}: expected a list of {dim} numbers")
    try:
        return tuple(float(v) for v in node)
    except (TypeError, ValueError):
        raise ScenarioError(f"{where}: entries must be numbers") from None


def _parse_field(node, dim):
    node = _require_map(node, "field")
    _check_keys(node, _FIELD_KEYS, "field")
    kind = node.get("kind")
    if kind == "linear_attractor":
        if "goal" not in node:
            raise ScenarioError("field: linear_attractor requires a goal")
        return LinearAttractor(_vector(node["goal"], dim, "field.goal"))
    if kind == "limit_cycle":
        return LimitCycle(float(node.get("speed", 10.0)))
    if kind == "constant":
        if "direction" not in node:
            raise ScenarioError("field: constant requires a direction")
        return ConstantField(_vector(node["direction"], dim, "field.direction"))
    raise ScenarioError(f"field.kind: unknown kind {kind!r}")


def _parse_indicator(node, where):
    if node is None:
        return None
    node = _require_map(node, where)
    _check_keys(node, _INDICATOR_KEYS, where)
    rule = node.get("rule")
    if rule == "fixed":
        return FixedIndicator(int(node.get("y", 1)))
    if rule == "goal_line":
        return GoalLineIndicator()
    if rule == "sign_of_component":
        return ComponentSignIndicator(
            int(node.get("axis", 2)), bool(node.get("flip", False))
        )
    raise ScenarioError(f"{where}.rule: unknown rule {rule!r}")


def _parse_obstacle(node, dim, where):
    node = _require_map(node, where)
    _check_keys(node, _OBSTACLE_KEYS, where)
    for key in ("center", "a", "p"):
        if key not in node:
            raise ScenarioError(f"{where}: missing required key {key!r}")
    center = _vector(node["center"], dim, f"{where}.center")
    a = _vector(node["a"], dim, f"{where}.a")
    if any(v <= 0 for v in a):
        raise ScenarioError(f"{where}.a: axis scale must be positive")
    p_raw = node["p"]
    if not isinstance(p_raw, (list, tuple)) or len(p_raw) != dim:
        raise ScenarioError(f"{where}.p: expected a list of {dim} integers")
    p = []
    for v in p_raw:
        if not isinstance(v, int) or v < 1:
            raise ScenarioError(f"{where}.p: exponents must be integers >= 1")
        p.append(v)
    group = node.get("group")
    if group is not None and not isinstance(group, int):
        raise ScenarioError(f"{where}.group: must be an integer tag")
    indicator = _parse_indicator(node.get("indicator"), f"{where}.indicator")
    return ObstacleSpec(center, a, tuple(p), group_id=group, indicator=indicator)


def _parse_rotation(node):
    if node is None:
        return RotationSchedule()
    node = _require_map(node, "rotation")
    _check_keys(node, _ROTATION_KEYS, "rotation")
    kwargs = {}
    if "delta1" in node:
        kwargs["delta1"] = float(node["delta1"])
    if "delta2" in node:
        kwargs["delta2"] = float(node["delta2"])
    if "axes" in node:
        axes = node["axes"]
        if not isinstance(axes, list) or not axes:
            raise ScenarioError("rotation.axes: expected a non-empty list")
        kwargs["axes"] = tuple(int(a) for a in axes)
    if "per_axis" in node:
        rows = node["per_axis"]
        if not isinstance(rows, list):
            raise ScenarioError("rotation.per_axis: expected a list of [axis, delta1, delta2]")
        out = []
        for row in rows:
            if not isinstance(row, list) or len(row) != 3:
                raise ScenarioError("rotation.per_axis: each entry is [axis, delta1, delta2]")
            out.append((int(row[0]), float(row[1]), float(row[2])))
        kwargs["per_axis"] = tuple(out)
    try:
        return RotationSchedule(**kwargs)
    except Exception as exc:
        raise ScenarioError(f"rotation: {exc}") from None


def _parse_policy(node):
    if node is None:
        return CombinationPolicy()
    node = _require_map(node, "policy")
    _check_keys(node, _POLICY_KEYS, "policy")
    kwargs = {}
    if "combination" in node:
        kwargs["mode"] = str(node["combination"])
    if "reactivity" in node:
        kwargs["reactivity"] = float(node["reactivity"])
    if "tail_effect" in node:
        kwargs["tail_effect"] = bool(node["tail_effect"])
    if "consistency" in node:
        kwargs["consistency"] = bool(node["consistency"])
    if "consistency_window" in node:
        kwargs["consistency_window"] = str(node["consistency_window"])
    if "variants" in node:
        variants = _require_map(node["variants"], "policy.variants")
        pairs = []
        for key, eta in variants.items():
            try:
                var = Variant(str(key))
            except ValueError:
                raise ScenarioError(
                    f"policy.variants: unknown variant {key!r} (use xy, xz, yz)"
                ) from None
            pairs.append((var, float(eta)))
        kwargs["variants"] = tuple(pairs)
    try:
        return CombinationPolicy(**kwargs)
    except Exception as exc:
        raise ScenarioError(f"policy: {exc}") from None


def parse_scenario(document: str) -> Scenario:
    """Parse a YAML scenario document into a validated Scenario."""
    try:
        data = yaml.safe_load(document)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"scenario syntax error: {exc}") from None
    data = _require_map(data, "scenario")
    _check_keys(data, _TOP_KEYS, "scenario")
    if "dimension" not in data:
        raise ScenarioError("scenario: missing required key 'dimension'")
    dim = data["dimension"]
    if dim not in (2, 3):
        raise ScenarioError("dimension: must be 2 or 3")
    if "field" not in data:
        raise ScenarioError("scenario: missing required key 'field'")
    field = _parse_field(data["field"], dim)
    obstacles = []
    for i, entry in enumerate(data.get("obstacles", []) or []):
        obstacles.append(_parse_obstacle(entry, dim, f"obstacles[{i}]"))
    starts_node = data.get("starts")
    if not isinstance(starts_node, list) or not starts_node:
        raise ScenarioError("starts: expected a non-empty list of points")
    starts = tuple(
        _vector(s, dim, f"starts[{i}]") for i, s in enumerate(starts_node)
    )
    if "outputs" in data and data["outputs"] is not None:
        _check_keys(_require_map(data["outputs"], "outputs"), _OUTPUT_KEYS, "outputs")
    kwargs = dict(
        dim=dim,
        field=field,
        obstacles=tuple(obstacles),
        starts=starts,
        policy=_parse_policy(data.get("policy")),
        sched=_parse_rotation(data.get("rotation")),
    )
    for key, cast in (
        ("dt", float), ("max_steps", int), ("goal_tol", float),
        ("method", str), ("mode", str), ("stall_tol", float),
        ("stall_window", int), ("boundary_tol", float), ("name", str),
    ):
        if key in data:
            kwargs[key] = cast(data[key])
    try:
        return Scenario(**kwargs)
    except ScenarioError:
        raise
    except Exception as exc:
        raise ScenarioError(f"scenario: {exc}") from None


def load_scenario(path) -> Scenario:
    return parse_scenario(Path(path).read_text())


def output_paths(document: str) -> dict:
    """Optional output paths declared in a scenario document."""
    data = yaml.safe_load(document)
    if isinstance(data, dict) and isinstance(data.get("outputs"), dict):
        return {k: str(v) for k, v in data["outputs"].items()}
    return {}


def _indicator_node(policy):
    if policy is None:
        return None
    if isinstance(policy, FixedIndicator):
        return {"rule": "fixed", "y": policy.y}
    if isinstance(policy, GoalLineIndicator):
        return {"rule": "goal_line"}
    if isinstance(policy, ComponentSignIndicator):
        node = {"rule": "sign_of_component", "axis": policy.axis}
        if policy.flip:
            node["flip"] = True
        return node
    raise ScenarioError(f"cannot serialise indicator {policy!r}")


def serialize_scenario(sc: Scenario) -> str:
    """Render a Scenario back to YAML; parse(serialize(s)) == s."""
    field = sc.field
    if isinstance(field, LinearAttractor):
        field_node = {"kind": "linear_attractor", "goal": list(field.goal)}
    elif isinstance(field, LimitCycle):
        field_node = {"kind": "limit_cycle", "speed": field.speed}
    elif isinstance(field, ConstantField):
        field_node = {"kind": "constant", "direction": list(field.direction)}
    else:
        raise ScenarioError(f"cannot serialise field {field!r}")
    obstacles = []
    for o in sc.obstacles:
        node = {"center": list(o.center), "a": list(o.axis_scales), "p": list(o.exponents)}
        if o.group_id is not None:
            node["group"] = o.group_id
        ind = _indicator_node(o.indicator)
        if ind is not None:
            node["indicator"] = ind
        obstacles.append(node)
    rotation = {
        "delta1": sc.sched.delta1,
        "delta2": sc.sched.delta2,
        "axes": list(sc.sched.axes),
    }
    if sc.sched.per_axis:
        rotation["per_axis"] = [[a, d1, d2] for a, d1, d2 in sc.sched.per_axis]
    policy = {
        "combination": sc.policy.mode,
        "reactivity": sc.policy.reactivity,
        "tail_effect": sc.policy.tail_effect,
        "consistency": sc.policy.consistency,
        "consistency_window": sc.policy.consistency_window,
        "variants": {v.value: eta for v, eta in sc.policy.variants},
    }
    data = {}
    if sc.name:
        data["name"] = sc.name
    data.update(
        dimension=sc.dim,
        field=field_node,
        obstacles=obstacles,
        starts=[list(s) for s in sc.starts],
        dt=sc.dt,
        max_steps=sc.max_steps,
        goal_tol=sc.goal_tol,
        method=sc.method,
        mode=sc.mode,
        rotation=rotation,
        policy=policy,
        stall_tol=sc.stall_tol,
        stall_window=sc.stall_window,
        boundary_tol=sc.boundary_tol,
    )
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None)


# --------------------------------------------------------------------------
# Trajectory files


def _theta_names(dim: int) -> list[str]:
    return ["theta"] if dim == 2 else ["theta12", "theta13"]


def trajectory_header(dim: int, n_obstacles: int) -> list[str]:
    cols = ["step", "t"]
    cols += [f"xi{i}" for i in range(1, dim + 1)]
    cols += [f"xidot{i}" for i in range(1, dim + 1)]
    cols.append("min_gamma")
    cols += [f"gamma_{j}" for j in range(1, n_obstacles + 1)]
    for j in range(1, n_obstacles + 1):
        cols += [f"{name}_{j}" for name in _theta_names(dim)]
    cols.append("status")
    return cols


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_trajectory(traj: Trajectory, path) -> None:
    """Write a trajectory as CSV, one row per step, deterministic bytes."""
    if not traj.records:
        raise ScenarioError("refusing to write an empty trajectory")
    dim = traj.records[0].state.shape[0]
    n_obs = traj.records[0].gammas.shape[0]
    buf = io.StringIO()
    buf.write(",".join(trajectory_header(dim, n_obs)) + "\n")
    for r in traj.records:
        cells = [str(r.step), _fmt(r.step * traj.dt)]
        cells += [_fmt(v) for v in r.state]
        cells += [_fmt(v) for v in r.velocity]
        cells.append(_fmt(r.min_gamma))
        cells += [_fmt(v) for v in r.gammas]
        cells += [_fmt(v) for v in r.thetas.ravel()]
        cells.append(traj.status)
        buf.write(",".join(cells) + "\n")
    out = Path(path)
    try:
        out.write_text(buf.getvalue())
    except OSError as exc:
        raise OSError(f"cannot write trajectory to {out}: {exc}") from exc


def read_trajectory(path) -> Trajectory:
    """Read a trajectory CSV back into records (diagnostic columns only)."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read trajectory from {path}: {exc}") from exc
    if not lines:
        raise ScenarioError(f"{path}: empty trajectory file")
    header = lines[0].split(",")
    dim = sum(1 for c in header if c.startswith("xi") and not c.startswith("xidot"))
    n_theta = len(_theta_names(dim))
    n_obs = sum(1 for c in header if c.startswith("gamma_"))
    records = []
    status = "max_steps"
    dt = 0.0
    for line in lines[1:]:
        cells = line.split(",")
        step = int(cells[0])
        t = float(cells[1])
        pos = 2
        state = np.array([float(v) for v in cells[pos:pos + dim]]); pos += dim
        vel = np.array([float(v) for v in cells[pos:pos + dim]]); pos += dim
        min_gamma = float(cells[pos]); pos += 1
        gammas = np.array([float(v) for v in cells[pos:pos + n_obs]]); pos += n_obs
        flat = [float(v) for v in cells[pos:pos + n_obs * n_theta]]; pos += n_obs * n_theta
        thetas = np.array(flat).reshape(n_obs, n_theta)
        status = cells[pos]
        if step == 1:
            dt = t
        records.append(
            StepRecord(step, state, vel, gammas, min_gamma, thetas,
                       np.zeros(n_obs), np.zeros(n_obs))
        )
    start = tuple(float(v) for v in records[0].state) if records else ()
    return Trajectory(records, status, dt, start)
