"""Modulation matrices: gains, assembly, multi-obstacle and variant combination.

A modulation matrix reshapes a nominal velocity field so trajectories slide
around an obstacle: ``M = E diag(lambda) E^T`` with ``E`` an orthonormal frame
whose first column is the outward normal. The radial gain ``lambda_1`` drops
to zero on the boundary (impenetrability), the tangential gains exceed one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import Variant
from .errors import (
    DomainError,
    NoValidVariantError,
    NonOrthogonalBasisError,
)

ORTHONORMAL_TOL = 1e-8


@dataclass(frozen=True)
class CombinationPolicy:
    """How per-obstacle modulations are merged and which remedies are active.

    mode : "weighted_sum" applies smooth weights outside the per-obstacle
        gains; "product" multiplies per-obstacle matrices whose gains carry
        the weights instead.
    variants : coordinate variants used in 3-D with their (unnormalised) eta
        weights; ignored in 2-D.
    reactivity : exponent rho > 0; gains use gamma^(1/rho), so larger values
        make the modulation act from further away.
    tail_effect : pin the radial gain to 1 while moving away from an obstacle
        so trajectories are not decelerated after passing it.
    consistency : reshape the current nominal field with the previous step's
        modulation before applying the current one.
    consistency_window : "previous" (default), "full" (ordered product of all
        past matrices), or "matrix_sum" (adds the previous matrix to the
        current one instead of chaining).
    """

    mode: str = "weighted_sum"
    variants: tuple[tuple[Variant, float], ...] = ((Variant.XY, 1.0),)
    reactivity: float = 1.0
    tail_effect: bool = True
    consistency: bool = True
    consistency_window: str = "previous"

    def __post_init__(self):
        if self.mode not in ("weighted_sum", "product"):
            raise DomainError(f"unknown combination mode {self.mode!r}")
        if self.consistency_window not in ("previous", "full", "matrix_sum"):
            raise DomainError(f"unknown consistency window {self.consistency_window!r}")
        if self.reactivity <= 0:
            raise DomainError("reactivity must be positive")
        variants = tuple((Variant(v), float(eta)) for v, eta in self.variants)
        object.__setattr__(self, "variants", variants)
        if any(eta < 0 for _, eta in variants):
            raise DomainError("variant weights must be non-negative")
        if not variants:
            raise DomainError("at least one coordinate variant is required")


def eigen_gains(gamma_value: float, rho: float = 1.0, mu_w: float = 1.0,
                tail_away: bool = False, dim: int = 2) -> np.ndarray:
    """Diagonal gains (lambda_1, ..., lambda_d) for one obstacle.

    lambda_1 = 1 - mu_w / gamma^(1/rho) shrinks the radial component;
    lambda_i = 1 + mu_w / gamma^(1/rho) amplifies the tangential ones.
    ``tail_away`` (the state is moving away from the obstacle) overrides the
    radial gain to exactly 1.
    """
    drop = mu_w * gamma_value ** (-1.0 / rho)
    lams = np.full(dim, 1.0 + drop)
    lams[0] = 1.0 if tail_away else 1.0 - drop
    return lams


def assemble_modulation(E: np.ndarray, lambdas: np.ndarray) -> np.ndarray:
    """M = E diag(lambdas) E^T; symmetric with spectrum ``lambdas``."""
    d = E.shape[0]
    err = float(np.abs(E.T @ E - np.eye(d)).max())
    if err > ORTHONORMAL_TOL:
        raise NonOrthogonalBasisError(
            f"frame deviates from orthonormality by {err:.3g}"
        )
    return (E * lambdas) @ E.T


def alt_modulation(E: np.ndarray, gamma_value: float) -> np.ndarray:
    """Identity-plus-rank-one form of the single-obstacle modulation.

    M = I - e1 e1^T / gamma + sum_{i>=2} e_i e_i^T / gamma. Algebraically
    equal to ``assemble_modulation`` with the plain gains; kept as an
    independent construction so the two can cross-validate each other.
    """
    d = E.shape[0]
    if float(np.abs(E.T @ E - np.eye(d)).max()) > ORTHONORMAL_TOL:
        raise NonOrthogonalBasisError("frame deviates from orthonormality")
    e1 = E[:, 0]
    M = np.eye(d) - np.outer(e1, e1) / gamma_value
    for i in range(1, d):
        M += np.outer(E[:, i], E[:, i]) / gamma_value
    return M


def obstacle_weights(gammas) -> np.ndarray:
    """Smooth nearest-obstacle weights, normalised to sum to one.

    w_j is the product over i != j of (gamma_i - 1) / ((gamma_j - 1) +
    (gamma_i - 1)). A gamma of exactly 1 returns the one-hot limit (the
    obstacle being touched dominates) instead of dividing by zero.
    """
    g = np.asarray(gammas, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise DomainError("gammas must be a non-empty 1-D sequence")
    if np.any(g < 1.0):
        raise DomainError("weights are defined only outside every obstacle")
    n = g.size
    if n == 1:
        return np.ones(1)
    excess = g - 1.0
    on_boundary = np.flatnonzero(excess == 0.0)
    if on_boundary.size:
        w = np.zeros(n)
        w[on_boundary[0]] = 1.0
        return w
    w = np.empty(n)
    for j in range(n):
        num = np.delete(excess, j)
        w[j] = np.prod(num / (excess[j] + num))
    return w / w.sum()


def trap_weights(gammas) -> np.ndarray:
    """One-hot weights for a connected obstacle group: nearest member wins.

    Ties break toward the lowest index.
    """
    g = np.asarray(gammas, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise DomainError("gammas must be a non-empty 1-D sequence")
    w = np.zeros(g.size)
    w[int(np.argmin(g))] = 1.0
    return w


def combine(modulations, weights, mode: str = "weighted_sum") -> np.ndarray:
    """Merge per-obstacle modulations.

    Product mode multiplies in obstacle-index order (matrix products do not
    commute, so the order is part of the contract) and expects the weights to
    already live inside each matrix's gains. Weighted-sum mode computes
    ``sum_j w_j M_j`` with weights summing to one.
    """
    mats = list(modulations)
    if not mats:
        raise DomainError("no modulations to combine")
    d = mats[0].shape[0]
    if any(m.shape != (d, d) for m in mats):
        raise DomainError("modulation dimensions disagree")
    if mode == "product":
        out = mats[0]
        for m in mats[1:]:
            out = out @ m
        return out
    if mode == "weighted_sum":
        w = np.asarray(weights, dtype=float)
        if w.shape != (len(mats),):
            raise DomainError("one weight per modulation is required")
        out = w[0] * mats[0]
        for wj, m in zip(w[1:], mats[1:]):
            out = out + wj * m
        return out
    raise DomainError(f"unknown combination mode {mode!r}")


def combine_coordinates(variant_bases, lambdas: np.ndarray) -> np.ndarray:
    """Sum of per-variant modulations: sum_i eta_i E_i diag(lambda) E_i^T.

    The eta weights are applied as given (no normalisation); with several
    variants the result scales speed, which is harmless wherever only the
    direction matters (patrol re-normalises every step).
    """
    pairs = list(variant_bases)
    if not pairs:
        raise NoValidVariantError("no usable coordinate variant at this point")
    out = None
    for E, eta in pairs:
        M = eta * assemble_modulation(E, lambdas)
        out = M if out is None else out + M
    return out


def consistency_transform(history, f_now, window: str = "previous") -> np.ndarray:
    """Reshape the nominal field with past modulation matrices.

    ``history`` is ordered oldest first. The default window applies only the
    previous step's matrix; the "full" window folds the entire history in
    order (oldest applied first). An empty history returns the field as is.
    """
    f = np.asarray(f_now, dtype=float)
    hist = list(history)
    if not hist:
        return f
    if window == "previous":
        return hist[-1] @ f
    if window == "full":
        out = f
        for M in hist:
            out = M @ out
        return out
    raise DomainError(f"unknown consistency window {window!r}")


def consistency_magnitude(gamma_value: float, dim: int) -> float:
    """Magnitude factor (1 - 1/gamma) (1 + 1/gamma)^(d-1) of the reshaped field.

    Diagnostic only; it vanishes on the boundary and tends to 1 far away.
    """
    inv = 1.0 / gamma_value
    return (1.0 - inv) * (1.0 + inv) ** (dim - 1)
