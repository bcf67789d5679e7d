"""Static plots of obstacle outlines and trajectories (diagnostic only)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .geometry import surface_outline

_PAIRS_3D = ((0, 1), (0, 2), (1, 2))
_AXIS_NAMES = ("xi1", "xi2", "xi3")


def _draw_panel(ax, trajs, obstacles, pair):
    i, j = pair
    for obs in obstacles:
        outline = surface_outline(obs, axes=pair)
        ax.fill(outline[:, 0], outline[:, 1], color="0.85", zorder=1)
        ax.plot(outline[:, 0], outline[:, 1], color="0.4", lw=1.0, zorder=2)
    for traj in trajs:
        states = traj.states()
        ax.plot(states[:, i], states[:, j], lw=1.2, zorder=3)
        ax.plot(states[0, i], states[0, j], "o", ms=4, color="tab:green", zorder=4)
        ax.plot(states[-1, i], states[-1, j], "x", ms=5, color="tab:red", zorder=4)
    ax.set_xlabel(_AXIS_NAMES[i])
    ax.set_ylabel(_AXIS_NAMES[j])
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, alpha=0.3)


def emit_plot(trajs, obstacles, path) -> None:
    """Render trajectories over obstacle outlines to a vector-graphics file.

    2-D scenarios get one panel; 3-D ones get the three axis-pair
    projections, with obstacle cross-sections taken through each center.
    """
    trajs = list(trajs)
    dim = trajs[0].records[0].state.shape[0] if trajs else (
        obstacles[0].dim if obstacles else 2
    )
    if dim == 2:
        fig, ax = plt.subplots(figsize=(6, 5))
        _draw_panel(ax, trajs, obstacles, (0, 1))
    else:
        fig, axes = plt.subplots(1, 3, figsize=(15, 4.5))
        for ax, pair in zip(axes, _PAIRS_3D):
            _draw_panel(ax, trajs, obstacles, pair)
    fig.tight_layout()
    out = Path(path)
    try:
        fig.savefig(out)
    except OSError as exc:
        raise OSError(f"cannot write plot to {out}: {exc}") from exc
    finally:
        plt.close(fig)
