"""Superellipsoid obstacles and the scalar field that classifies space around them.

An obstacle is the level set ``gamma(x) = 1`` of

    gamma(x) = sum_i (x_i - c_i)^(2 p_i) / a_i

with per-axis scales ``a_i > 0`` and integer exponents ``p_i >= 1``.
``gamma < 1`` is inside, ``gamma = 1`` the boundary, ``gamma > 1`` outside.
The gradient is analytic: ``d gamma / d x_i = 2 p_i (x_i - c_i)^(2 p_i - 1) / a_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any

import numpy as np

from .errors import DimensionError, DomainError


class Region(Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


DEFAULT_BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class ObstacleSpec:
    """One convex superellipsoid obstacle.

    Parameters
    ----------
    center : tuple of float
        Obstacle center, length 2 or 3.
    axis_scales : tuple of float
        Denominators ``a_i`` (units of length^(2 p_i)), all positive.
    exponents : tuple of int
        Exponents ``p_i >= 1``; the surface power along axis i is ``2 p_i``.
    group_id : int, optional
        Obstacles sharing a group id are treated as one intersecting cluster
        and weighted by nearest-member selection instead of the smooth rule.
    indicator : object, optional
        Per-obstacle side-selection policy (see ``dynamics.indicator_sign``).
        ``None`` means a fixed ``+1``.
    """

    center: tuple[float, ...]
    axis_scales: tuple[float, ...]
    exponents: tuple[int, ...]
    group_id: int | None = None
    indicator: Any = None

    def __post_init__(self):
        center = tuple(float(v) for v in self.center)
        scales = tuple(float(v) for v in self.axis_scales)
        exps = tuple(int(v) for v in self.exponents)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "axis_scales", scales)
        object.__setattr__(self, "exponents", exps)
        d = len(center)
        if d not in (2, 3):
            raise DimensionError(f"obstacle dimension must be 2 or 3, got {d}")
        if len(scales) != d or len(exps) != d:
            raise DimensionError(
                "center, axis_scales and exponents must have equal length"
            )
        if any(not np.isfinite(v) for v in center):
            raise DomainError("obstacle center must be finite")
        if any(a <= 0 or not np.isfinite(a) for a in scales):
            raise DomainError("axis scale must be positive")
        if any(p < 1 for p in exps):
            raise DomainError("exponent must be a positive integer")

    @classmethod
    def from_radii(cls, center, radii, exponents, **kwargs) -> "ObstacleSpec":
        """Build from semi-axis lengths ``r_i``, converting ``a_i = r_i^(2 p_i)``."""
        exps = tuple(int(p) for p in exponents)
        scales = tuple(float(r) ** (2 * p) for r, p in zip(radii, exps))
        return cls(tuple(center), scales, exps, **kwargs)

    @property
    def dim(self) -> int:
        return len(self.center)

    @cached_property
    def radii(self) -> tuple[float, ...]:
        """Semi-axis lengths ``r_i = a_i^(1 / (2 p_i))``."""
        return tuple(a ** (1.0 / (2 * p)) for a, p in zip(self.axis_scales, self.exponents))

    # cached work arrays for the evaluation hot path
    @cached_property
    def _center(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float)

    @cached_property
    def _scales(self) -> np.ndarray:
        return np.asarray(self.axis_scales, dtype=float)

    @cached_property
    def _two_p(self) -> np.ndarray:
        return np.asarray([2 * p for p in self.exponents])

    @cached_property
    def _grad_coef(self) -> np.ndarray:
        return self._two_p / self._scales


@dataclass(frozen=True)
class GammaEval:
    """Scalar-field value and gradient at one query point."""

    value: float
    gradient: np.ndarray
    gradient_norm: float


def gamma_eval(obs: ObstacleSpec, point) -> GammaEval:
    """Evaluate the obstacle field and its analytic gradient at ``point``.

    The gradient at the exact center is the zero vector; callers that need a
    normal direction must treat that as the degenerate case.
    """
    pt = np.asarray(point, dtype=float)
    if pt.shape != (obs.dim,):
        raise DimensionError(
            f"point has shape {pt.shape}, expected ({obs.dim},)"
        )
    if not np.all(np.isfinite(pt)):
        raise DomainError("query point must be finite")
    diff = pt - obs._center
    two_p = obs._two_p
    value = float(np.sum(diff**two_p / obs._scales))
    grad = obs._grad_coef * diff ** (two_p - 1)
    return GammaEval(value, grad, float(np.sqrt(grad @ grad)))


def region_classify(g: GammaEval, boundary_tol: float = DEFAULT_BOUNDARY_TOL) -> Region:
    """Classify a field evaluation as inside, boundary, or outside."""
    if boundary_tol <= 0 or not np.isfinite(boundary_tol):
        raise DomainError("boundary_tol must be a positive real")
    if abs(g.value - 1.0) <= boundary_tol:
        return Region.BOUNDARY
    if g.value < 1.0 - boundary_tol:
        return Region.INSIDE
    return Region.OUTSIDE


def surface_outline(obs: ObstacleSpec, axes: tuple[int, int] = (0, 1), samples: int = 256) -> np.ndarray:
    """Sample the gamma = 1 curve in the plane of ``axes`` through the center.

    Returns an array of shape (samples, 2) tracing the superellipse
    ``x_i = c_i + r_i sgn(cos t) |cos t|^(1/p_i)`` (and sin for the second
    axis), which lies exactly on the level set restricted to that plane.
    Intended for plotting only.
    """
    i, j = axes
    t = np.linspace(0.0, 2.0 * np.pi, samples)
    r = obs.radii
    p_i, p_j = obs.exponents[i], obs.exponents[j]
    x = obs.center[i] + r[i] * np.sign(np.cos(t)) * np.abs(np.cos(t)) ** (1.0 / p_i)
    y = obs.center[j] + r[j] * np.sign(np.sin(t)) * np.abs(np.sin(t)) ** (1.0 / p_j)
    return np.column_stack([x, y])
