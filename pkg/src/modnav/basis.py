"""Orthonormal coordinate frames derived from obstacle-field gradients.

Every frame is a d x d array whose columns are unit vectors; the first column
is the outward normal (the normalised gradient). In 2-D the frame has a closed
form. In 3-D it is built from a pre-step matrix that treats one coordinate
pair exactly, then rotated so the first column matches the full normal.

Handedness convention: rotations are right-handed (anticlockwise about the
axis when viewed from its tip), so a rotation about (0, 0, 1) restricted to
the first two coordinates equals the plane rotation used in 2-D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DegenerateGradientError,
    DegenerateVariantError,
    DomainError,
    NonUnitAxisError,
    ZeroFieldError,
)
from .geometry import GammaEval

EPS_GRADIENT = 1e-12


class Variant(Enum):
    """Which gradient pair seeds the 3-D pre-step frame."""

    XY = "xy"
    XZ = "xz"
    YZ = "yz"

    @property
    def pair(self) -> tuple[int, int]:
        return {"xy": (0, 1), "xz": (0, 2), "yz": (1, 2)}[self.value]


# Fallback order when the requested variant is degenerate at a point.
VARIANT_FALLBACK = (Variant.XY, Variant.XZ, Variant.YZ)


@dataclass(frozen=True)
class RotationSchedule:
    """Tuning of the gamma-gated frame rotation.

    ``delta1`` in (0, 1] scales the angle, ``delta2 >= 1`` controls how far
    from the boundary the rotation fades in. In 3-D, ``axes`` lists the frame
    columns (2 and/or 3, one-based) about which the frame is rotated;
    ``per_axis`` optionally overrides (delta1, delta2) for a single axis.
    """

    delta1: float = 0.5
    delta2: float = 2.0
    axes: tuple[int, ...] = (2, 3)
    per_axis: tuple[tuple[int, float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(int(a) for a in self.axes))
        object.__setattr__(
            self,
            "per_axis",
            tuple((int(a), float(d1), float(d2)) for a, d1, d2 in self.per_axis),
        )
        for d1, d2 in [(self.delta1, self.delta2)] + [(d1, d2) for _, d1, d2 in self.per_axis]:
            if not 0.0 < d1 <= 1.0:
                raise DomainError(f"delta1 must be in (0, 1], got {d1}")
            if d2 < 1.0:
                raise DomainError(f"delta2 must be >= 1, got {d2}")
        for a in self.axes:
            if a not in (2, 3):
                raise DomainError(f"rotation axis must be 2 or 3, got {a}")
        for a, _, _ in self.per_axis:
            if a not in (2, 3):
                raise DomainError(f"per-axis override names axis {a}, must be 2 or 3")

    def deltas_for(self, axis: int) -> tuple[float, float]:
        for a, d1, d2 in self.per_axis:
            if a == axis:
                return d1, d2
        return self.delta1, self.delta2


def basis_2d(g: GammaEval) -> np.ndarray:
    """2-D frame: e1 = (g1, g2)/|g|, e2 = (g2, -g1)/|g|."""
    n = g.gradient_norm
    if n <= EPS_GRADIENT:
        raise DegenerateGradientError(
            "gradient norm below threshold; no outward normal at this point"
        )
    g1, g2 = g.gradient
    return np.array([[g1, g2], [g2, -g1]]) / n


def prestep_basis_3d(g: GammaEval, variant: Variant = Variant.XY) -> np.ndarray:
    """Pre-step 3-D frame treating only the variant's gradient pair.

    The first column is the in-plane normalised gradient, the second its
    in-plane perpendicular, the third the remaining coordinate axis.
    """
    g1, g2, g3 = g.gradient
    if variant is Variant.XY:
        s = math.hypot(g1, g2)
        if s <= EPS_GRADIENT:
            raise DegenerateVariantError("gradient components 1 and 2 both vanish")
        return np.array([[g1 / s, g2 / s, 0.0], [g2 / s, -g1 / s, 0.0], [0.0, 0.0, 1.0]])
    if variant is Variant.XZ:
        s = math.hypot(g1, g3)
        if s <= EPS_GRADIENT:
            raise DegenerateVariantError("gradient components 1 and 3 both vanish")
        return np.array([[g1 / s, g3 / s, 0.0], [0.0, 0.0, 1.0], [g3 / s, -g1 / s, 0.0]])
    s = math.hypot(g2, g3)
    if s <= EPS_GRADIENT:
        raise DegenerateVariantError("gradient components 2 and 3 both vanish")
    return np.array([[0.0, 0.0, 1.0], [g2 / s, g3 / s, 0.0], [g3 / s, -g2 / s, 0.0]])


def _basis_3d_closed_form(g: GammaEval) -> np.ndarray:
    # XY variant only: azimuth-tilt-azimuth composition collapses to this form.
    g1, g2, g3 = g.gradient
    e3 = 1.0 / g.gradient_norm
    e2 = 1.0 / math.hypot(g1, g2)
    return np.array(
        [
            [g1 * e3, g2 * e2, -g1 * g3 * e2 * e3],
            [g2 * e3, -g1 * e2, -g2 * g3 * e2 * e3],
            [g3 * e3, 0.0, e3 / e2],
        ]
    )


def basis_3d_rotated(g: GammaEval, variant: Variant = Variant.XY) -> np.ndarray:
    """3-D frame via explicit rotation of the pre-step matrix.

    Rotates the pre-step frame in the plane spanned by its first column and
    the full normal, which sends column one onto the normal and preserves
    orthonormality. Used as the general path for all variants and as the
    cross-check for the closed form.
    """
    if g.gradient_norm <= EPS_GRADIENT:
        raise DegenerateGradientError("gradient norm below threshold")
    pre = prestep_basis_3d(g, variant)
    e1 = g.gradient / g.gradient_norm
    c = float(np.clip(pre[:, 0] @ e1, -1.0, 1.0))
    axis = np.cross(pre[:, 0], e1)
    n = float(np.sqrt(axis @ axis))
    if n <= 1e-15:
        # excluded gradient component is zero: pre-step normal already matches
        return pre
    return axis_angle_rotation(axis / n, math.acos(c)) @ pre


def basis_3d(g: GammaEval, variant: Variant = Variant.XY) -> np.ndarray:
    """3-D frame with e1 the normalised gradient.

    The XY variant uses the closed form; the others rotate their pre-step
    matrix explicitly. Both constructions agree where they overlap (tested).
    """
    if g.gradient_norm <= EPS_GRADIENT:
        raise DegenerateGradientError("gradient norm below threshold")
    if variant is Variant.XY:
        g1, g2, _ = g.gradient
        if math.hypot(g1, g2) <= EPS_GRADIENT:
            raise DegenerateVariantError("gradient components 1 and 2 both vanish")
        return _basis_3d_closed_form(g)
    return basis_3d_rotated(g, variant)


def rotation_2d(theta: float) -> np.ndarray:
    """Plane rotation, anticlockwise for theta > 0."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotate_basis_2d(E: np.ndarray, theta: float) -> np.ndarray:
    """Rotate a 2-D frame; rotating by theta then -theta restores it."""
    if E.shape != (2, 2):
        raise DomainError(f"expected a 2x2 frame, got shape {E.shape}")
    return rotation_2d(theta) @ E


def axis_angle_rotation(axis, theta: float) -> np.ndarray:
    """Right-handed rotation by ``theta`` about a unit 3-vector ``axis``."""
    a = np.asarray(axis, dtype=float)
    if a.shape != (3,):
        raise NonUnitAxisError(f"axis must be a 3-vector, got shape {a.shape}")
    n2 = float(a @ a)
    if abs(n2 - 1.0) > 2e-10:
        raise NonUnitAxisError(f"axis norm is {math.sqrt(n2):.12g}, expected 1")
    c, s = math.cos(theta), math.sin(theta)
    x, y, z = a
    omc = 1.0 - c
    return np.array(
        [
            [x * x * omc + c, x * y * omc - z * s, x * z * omc + y * s],
            [x * y * omc + z * s, y * y * omc + c, y * z * omc - x * s],
            [x * z * omc - y * s, y * z * omc + x * s, z * z * omc + c],
        ]
    )


def rotation_angle(theta_f_e1: float, gamma_value: float, sched: RotationSchedule,
                   y: int, axis: int | None = None) -> float:
    """Gamma-gated rotation angle.

    theta = y * delta1 * theta_f_e1 * (1 - gamma^(-1/delta2)); it vanishes on
    the boundary (gamma = 1), which is what preserves impenetrability, and
    saturates at y * delta1 * theta_f_e1 far away.
    """
    assert gamma_value >= 1.0, "rotation angle queried inside the obstacle"
    assert -1e-12 <= theta_f_e1 <= math.pi + 1e-12, "angle to normal out of range"
    assert y in (1, -1), "indicator must be +1 or -1"
    d1, d2 = sched.deltas_for(axis) if axis is not None else (sched.delta1, sched.delta2)
    return y * d1 * theta_f_e1 * (1.0 - gamma_value ** (-1.0 / d2))


def angle_between(f, e1) -> float:
    """Angle in [0, pi] between a field vector and a unit frame column."""
    f = np.asarray(f, dtype=float)
    nf = float(np.sqrt(f @ f))
    if nf == 0.0:
        raise ZeroFieldError("cannot measure the angle of a zero field vector")
    return math.acos(float(np.clip((f @ e1) / nf, -1.0, 1.0)))


def manipulate_basis(E: np.ndarray, f, g: GammaEval, sched: RotationSchedule,
                     y: int) -> np.ndarray:
    """Rotate a frame by the gamma-gated schedule driven by the field angle.

    In 2-D the whole frame turns by one angle. In 3-D the frame is rotated
    about its own e3 column (turning the e1-e2 plane) and then about its e2
    column (turning the e1-e3 plane), for whichever axes the schedule lists.
    The rotation fades to the identity as gamma approaches 1.
    """
    theta_f = angle_between(f, E[:, 0])
    # States can overshoot the boundary by round-off; treat them as on it.
    gam = max(float(g.value), 1.0)
    d = E.shape[0]
    if d == 2:
        return rotate_basis_2d(E, rotation_angle(theta_f, gam, sched, y))
    R = np.eye(3)
    for axis in sorted(sched.axes, reverse=True):
        theta = rotation_angle(theta_f, gam, sched, y, axis=axis)
        R = axis_angle_rotation(E[:, axis - 1], theta) @ R
    return R @ E
