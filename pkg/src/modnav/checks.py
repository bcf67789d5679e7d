"""Randomised invariant suite: gradients, frames, modulation oracle, impenetrability.

These checks back the ``verify`` CLI command and the acceptance tests. All
randomness is seeded, so a given build either always passes or always fails.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .basis import (
    RotationSchedule,
    Variant,
    basis_2d,
    basis_3d,
    manipulate_basis,
)
from .dynamics import (
    ComponentSignIndicator,
    FixedIndicator,
    GoalLineIndicator,
    LinearAttractor,
    Scenario,
    simulate,
)
from .errors import InsideObstacleError
from .geometry import GammaEval, ObstacleSpec, gamma_eval
from .modulation import alt_modulation, assemble_modulation, eigen_gains

GRADIENT_SAMPLES = 1000
GRADIENT_RTOL = 1e-6
ORTHOGONALITY_SAMPLES = 10_000
ORTHOGONALITY_TOL = 1e-10
ORACLE_SAMPLES = 1000
ORACLE_TOL = 1e-12
IMPENETRABILITY_SCENARIOS = 500
IMPENETRABILITY_BOUND = 1.0 - 1e-6


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.name}  ({self.seconds:.2f}s)  {self.detail}"


def check_gradient_oracle(samples: int = GRADIENT_SAMPLES, seed: int = 1001) -> CheckResult:
    """Analytic gradients against central finite differences."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(samples):
        d = int(rng.integers(2, 4))
        p = rng.choice([1, 2, 3, 8], size=d)
        r = rng.uniform(0.5, 4.0, size=d)
        center = rng.uniform(-5.0, 5.0, size=d)
        obs = ObstacleSpec.from_radii(center, r, p)
        offset = rng.uniform(0.3, 6.0, size=d) * rng.choice([-1.0, 1.0], size=d)
        point = center + offset
        analytic = gamma_eval(obs, point).gradient
        fd = np.empty(d)
        for i in range(d):
            h = 1e-6 * max(1.0, abs(point[i]))
            hi = point.copy(); hi[i] += h
            lo = point.copy(); lo[i] -= h
            fd[i] = (gamma_eval(obs, hi).value - gamma_eval(obs, lo).value) / (2 * h)
        scale = max(float(np.abs(analytic).max()), 1e-12)
        worst = max(worst, float(np.abs(fd - analytic).max()) / scale)
    ok = worst <= GRADIENT_RTOL
    return CheckResult(
        "gradient-oracle", ok,
        f"worst relative error {worst:.3g} over {samples} samples (tol {GRADIENT_RTOL:g})",
        time.perf_counter() - t0,
    )


def _random_gamma_eval(rng, d: int) -> GammaEval:
    grad = rng.normal(size=d)
    while float(grad @ grad) < 1e-12:
        grad = rng.normal(size=d)
    grad *= 10.0 ** rng.uniform(-3.0, 3.0)
    gamma = 1.0 + 10.0 ** rng.uniform(-6.0, 2.0) if rng.random() > 0.05 else 1.0
    return GammaEval(gamma, grad, float(np.sqrt(grad @ grad)))


def check_orthogonality(samples: int = ORTHOGONALITY_SAMPLES, seed: int = 1002) -> CheckResult:
    """Every constructed or manipulated frame stays orthonormal."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    variants = list(Variant)
    worst = 0.0
    eye2, eye3 = np.eye(2), np.eye(3)
    for k in range(samples):
        d = 2 if k % 2 == 0 else 3
        eye = eye2 if d == 2 else eye3
        ge = _random_gamma_eval(rng, d)
        if d == 2:
            E = basis_2d(ge)
        else:
            E = basis_3d(ge, variants[k % 3])
        worst = max(worst, float(np.abs(E.T @ E - eye).max()))
        sched = RotationSchedule(
            delta1=rng.uniform(0.05, 1.0), delta2=rng.uniform(1.0, 8.0)
        )
        f = rng.normal(size=d)
        while float(f @ f) < 1e-12:
            f = rng.normal(size=d)
        y = 1 if rng.random() < 0.5 else -1
        Ebar = manipulate_basis(E, f, ge, sched, y)
        worst = max(worst, float(np.abs(Ebar.T @ Ebar - eye).max()))
    ok = worst <= ORTHOGONALITY_TOL
    return CheckResult(
        "orthogonality", ok,
        f"worst |E^T E - I| {worst:.3g} over {samples} frames (tol {ORTHOGONALITY_TOL:g})",
        time.perf_counter() - t0,
    )


def check_modulation_oracle(samples: int = ORACLE_SAMPLES, seed: int = 1003) -> CheckResult:
    """The rank-one form equals E diag(lambda) E^T for random frames."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    worst = 0.0
    for k in range(samples):
        d = 2 if k % 2 == 0 else 3
        E, _ = np.linalg.qr(rng.normal(size=(d, d)))
        gamma = 1.0 if k % 97 == 0 else rng.uniform(1.0, 100.0)
        M1 = assemble_modulation(E, eigen_gains(gamma, dim=d))
        M2 = alt_modulation(E, gamma)
        worst = max(worst, float(np.abs(M1 - M2).max()))
    ok = worst <= ORACLE_TOL
    return CheckResult(
        "modulation-oracle", ok,
        f"worst |M_eig - M_rank1| {worst:.3g} over {samples} frames (tol {ORACLE_TOL:g})",
        time.perf_counter() - t0,
    )


def _random_indicator(rng, d: int):
    roll = rng.random()
    if d == 2 and roll < 0.4:
        return GoalLineIndicator()
    if roll < 0.7:
        return ComponentSignIndicator(axis=int(rng.integers(1, d + 1)))
    return FixedIndicator(1 if rng.random() < 0.5 else -1)


def _segment_hits(start, goal, obstacles) -> bool:
    seg = goal - start
    length2 = float(seg @ seg)
    for obs in obstacles:
        c = np.asarray(obs.center)
        t = float(np.clip((c - start) @ seg / length2, 0.0, 1.0))
        nearest = start + t * seg
        bound = max(obs.radii) * math.sqrt(len(obs.center))
        if np.linalg.norm(nearest - c) < bound + 0.5:
            return True
    return False


def random_scenarios(count: int, seed: int = 1004):
    """Generate seeded random avoidance scenarios (baseline and rotated pairs).

    Obstacles are pairwise disjoint (bounding-sphere separation), the goal
    and every start lie strictly outside all of them, and sizes keep explicit
    Euler at dt = 0.01 inside its stability margin.
    """
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count // 2):
        d = 2 if k % 4 < 3 else 3
        n_obs = int(rng.integers(1, 5))
        goal = rng.uniform(-5.0, 5.0, size=d)
        obstacles = []
        guard = 0
        while len(obstacles) < n_obs and guard < 400:
            guard += 1
            p = rng.choice([1, 2, 3], size=d)
            r = rng.uniform(2.0, 3.2, size=d)
            center = rng.uniform(-9.0, 9.0, size=d)
            bound = float(r.max()) * math.sqrt(d)
            ok = True
            for other in obstacles:
                ob = max(other.radii) * math.sqrt(d)
                if np.linalg.norm(center - np.asarray(other.center)) < 1.2 * (bound + ob):
                    ok = False
                    break
            if not ok:
                continue
            cand = ObstacleSpec.from_radii(center, r, p, indicator=_random_indicator(rng, d))
            if gamma_eval(cand, goal).value < 1.5:
                continue
            obstacles.append(cand)
        start = None
        for guard in range(400):
            cand = rng.uniform(-14.0, 14.0, size=d)
            if np.linalg.norm(cand - goal) < 3.0:
                continue
            if any(gamma_eval(o, cand).value < 1.5 for o in obstacles):
                continue
            # Prefer starts whose straight path to the goal meets an obstacle,
            # otherwise the check never exercises the boundary.
            if obstacles and guard < 300 and not _segment_hits(cand, goal, obstacles):
                continue
            start = cand
            break
        if start is None:
            raise RuntimeError("could not place a start point")
        for method in ("baseline", "oamoc"):
            out.append(
                Scenario(
                    dim=d,
                    field=LinearAttractor(tuple(goal)),
                    obstacles=tuple(obstacles),
                    starts=(tuple(start),),
                    dt=0.01,
                    max_steps=5000,
                    method=method,
                )
            )
    return out


def check_impenetrability(count: int = IMPENETRABILITY_SCENARIOS, seed: int = 1004) -> CheckResult:
    """No random trajectory ever dips inside an obstacle."""
    t0 = time.perf_counter()
    scenarios = random_scenarios(count, seed)
    worst = math.inf
    statuses: dict[str, int] = {}
    for sc in scenarios:
        try:
            trajs = simulate(sc)
        except InsideObstacleError as exc:
            return CheckResult(
                "impenetrability", False,
                f"penetration raised: {exc}", time.perf_counter() - t0,
            )
        for tr in trajs:
            worst = min(worst, tr.min_gamma)
            statuses[tr.status] = statuses.get(tr.status, 0) + 1
    ok = worst >= IMPENETRABILITY_BOUND
    tally = ", ".join(f"{k}={v}" for k, v in sorted(statuses.items()))
    return CheckResult(
        "impenetrability", ok,
        f"worst min gamma {worst:.9f} over {len(scenarios)} runs ({tally})",
        time.perf_counter() - t0,
    )


def run_all(quick: bool = False) -> list[CheckResult]:
    """Run the whole suite; ``quick`` shrinks sample counts tenfold."""
    div = 10 if quick else 1
    return [
        check_gradient_oracle(max(GRADIENT_SAMPLES // div, 50)),
        check_orthogonality(max(ORTHOGONALITY_SAMPLES // div, 100)),
        check_modulation_oracle(max(ORACLE_SAMPLES // div, 50)),
        check_impenetrability(max(IMPENETRABILITY_SCENARIOS // div, 20)),
    ]
