"""Dynamical-system obstacle avoidance via modulated orthonormal coordinates.

A nominal vector field is reshaped by a state-dependent modulation matrix
``M = E diag(lambda) E^T`` built from an orthonormal frame whose first column
is an obstacle's outward normal. Rotating that frame by a boundary-gated
angle schedule removes the head-on stagnation point, combines across several
obstacles, and, in a self-propelled variant, patrols convex shapes.
"""

from .basis import (
    RotationSchedule,
    Variant,
    angle_between,
    axis_angle_rotation,
    basis_2d,
    basis_3d,
    basis_3d_rotated,
    manipulate_basis,
    prestep_basis_3d,
    rotate_basis_2d,
    rotation_2d,
    rotation_angle,
)
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
    field_eval,
    indicator_sign,
    patrol_step,
    simulate,
    step_oamoc,
)
from .geometry import (
    GammaEval,
    ObstacleSpec,
    Region,
    gamma_eval,
    region_classify,
    surface_outline,
)
from .modulation import (
    CombinationPolicy,
    alt_modulation,
    assemble_modulation,
    combine,
    combine_coordinates,
    consistency_magnitude,
    consistency_transform,
    eigen_gains,
    obstacle_weights,
    trap_weights,
)
from .plotting import emit_plot
from .scenario_io import (
    load_scenario,
    parse_scenario,
    read_trajectory,
    serialize_scenario,
    write_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "CombinationPolicy",
    "ComponentSignIndicator",
    "ConstantField",
    "FixedIndicator",
    "GammaEval",
    "GoalLineIndicator",
    "LimitCycle",
    "LinearAttractor",
    "ObstacleSpec",
    "Region",
    "RotationSchedule",
    "Scenario",
    "StepRecord",
    "Trajectory",
    "Variant",
    "alt_modulation",
    "angle_between",
    "assemble_modulation",
    "axis_angle_rotation",
    "basis_2d",
    "basis_3d",
    "basis_3d_rotated",
    "combine",
    "combine_coordinates",
    "consistency_magnitude",
    "consistency_transform",
    "eigen_gains",
    "emit_plot",
    "field_eval",
    "gamma_eval",
    "indicator_sign",
    "load_scenario",
    "manipulate_basis",
    "obstacle_weights",
    "parse_scenario",
    "patrol_step",
    "prestep_basis_3d",
    "read_trajectory",
    "region_classify",
    "rotate_basis_2d",
    "rotation_2d",
    "rotation_angle",
    "serialize_scenario",
    "simulate",
    "step_oamoc",
    "surface_outline",
    "trap_weights",
    "write_trajectory",
]
