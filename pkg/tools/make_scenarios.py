"""Regenerate the bundled figure scenarios under src/modnav/scenarios/.

Each file is built through the public Scenario API and rendered with the
canonical serializer, so the bundle always parses. Run from the repo root:

    python tools/make_scenarios.py
"""

from pathlib import Path

from modnav import (
    CombinationPolicy,
    ComponentSignIndicator,
    ConstantField,
    FixedIndicator,
    GoalLineIndicator,
    LimitCycle,
    LinearAttractor,
    ObstacleSpec,
    RotationSchedule,
    Scenario,
    Variant,
    serialize_scenario,
)

OUT = Path(__file__).resolve().parents[1] / "src" / "modnav" / "scenarios"

R36 = (3.6, 3.6)
P1 = (1, 1)
SIGN2 = ComponentSignIndicator(axis=2)


def circle(center, indicator=None, radius=3.6, p=1, group=None, dim=2):
    r = (radius,) * dim
    pp = (p,) * dim
    return ObstacleSpec.from_radii(center, r, pp, group_id=group, indicator=indicator)


def attractor(dim=2):
    return LinearAttractor((0.0,) * dim)


def stack(indicator_for, group=1):
    centers = [(-9.0, 3.0), (-9.0, 1.0), (-9.0, -3.0), (-9.0, -1.0)]
    return tuple(circle(c, indicator_for(c), group=group) for c in centers)


def patrol_policy(variants=((Variant.XY, 1.0),)):
    return CombinationPolicy(tail_effect=False, consistency=False, variants=variants)


SCENARIOS: dict[str, tuple[str, Scenario]] = {}


def add(fid: str, comment: str, scenario: Scenario):
    SCENARIOS[fid] = (comment, scenario)


# ---------------------------------------------------------------- figure 7
add("fig7a", "Nominal linear field in free space, start (-18,0), goal origin.",
    Scenario(dim=2, field=attractor(), obstacles=(), starts=((-18.0, 0.0),)))
add("fig7b", "Unrotated modulation, head-on start: stalls on the facing surface.",
    Scenario(dim=2, field=attractor(), obstacles=(circle((-9.0, 0.0)),),
             starts=((-18.0, 0.0),), method="baseline"))
add("fig7c", "Placeholder for the reference method's contouring remedy, which is "
             "outside this library; runs the plain unrotated method instead.",
    Scenario(dim=2, field=attractor(), obstacles=(circle((-9.0, 0.0)),),
             starts=((-18.0, 0.0),), method="baseline"))
add("fig7d", "Rotated coordinates without the consistency reshaping: converges.",
    Scenario(dim=2, field=attractor(), obstacles=(circle((-9.0, 0.0), SIGN2),),
             starts=((-18.0, 0.0),), method="oamoc",
             policy=CombinationPolicy(consistency=False)))
add("fig7e", "Rotated coordinates with consistency reshaping: converges.",
    Scenario(dim=2, field=attractor(), obstacles=(circle((-9.0, 0.0), SIGN2),),
             starts=((-18.0, 0.0),), method="oamoc"))
add("fig7f", "Rotated coordinates from the closer start (-13,0).",
    Scenario(dim=2, field=attractor(), obstacles=(circle((-9.0, 0.0), SIGN2),),
             starts=((-13.0, 0.0),), method="oamoc"))

# ---------------------------------------------------------------- figure 8
quartic = ObstacleSpec.from_radii((-9.0, 0.0), R36, (2, 2))
quartic_ind = ObstacleSpec.from_radii((-9.0, 0.0), R36, (2, 2), indicator=SIGN2)
add("fig8a", "Quartic obstacle, unrotated method.",
    Scenario(dim=2, field=attractor(), obstacles=(quartic,),
             starts=((-18.0, 0.0), (-18.0, 3.0), (-18.0, -3.0)), method="baseline"))
add("fig8b", "Quartic obstacle, rotated coordinates with the sign-of-xi2 side rule.",
    Scenario(dim=2, field=attractor(), obstacles=(quartic_ind,),
             starts=((-18.0, 0.0), (-18.0, 3.0), (-18.0, -3.0)), method="oamoc"))

# ---------------------------------------------------------------- figure 9
fly_starts = ((-18.0, 1.0), (-18.0, 3.0), (-18.0, 6.0))
add("fig9a", "Flybys, unrotated method, reactivity 1.",
    Scenario(dim=2, field=attractor(), obstacles=(circle((-9.0, 0.0)),),
             starts=fly_starts, method="baseline"))
add("fig9b", "Flybys, unrotated method, reactivity 5 (modulation acts from afar).",
    Scenario(dim=2, field=attractor(), obstacles=(circle((-9.0, 0.0)),),
             starts=fly_starts, method="baseline",
             policy=CombinationPolicy(reactivity=5.0)))
add("fig9c", "Flybys, rotated coordinates, rotation fade delta2 = 2.",
    Scenario(dim=2, field=attractor(), obstacles=(circle((-9.0, 0.0), SIGN2),),
             starts=fly_starts, method="oamoc"))
add("fig9d", "Flybys, rotated coordinates, rotation fade delta2 = 8.",
    Scenario(dim=2, field=attractor(), obstacles=(circle((-9.0, 0.0), SIGN2),),
             starts=fly_starts, method="oamoc",
             sched=RotationSchedule(delta1=0.5, delta2=8.0)))

# ---------------------------------------------------------------- figure 10
multi = lambda ind: (circle((-5.0, 0.0), ind), circle((-12.0, 3.0), ind),
                     circle((-15.0, -5.0), ind))
add("fig10a", "Three obstacles, unrotated method.",
    Scenario(dim=2, field=attractor(), obstacles=multi(None),
             starts=((-18.0, 0.0), (-19.0, -4.0)), method="baseline"))
add("fig10b", "Three obstacles, rotated coordinates with goal-line side rule.",
    Scenario(dim=2, field=attractor(), obstacles=multi(GoalLineIndicator()),
             starts=((-18.0, 0.0), (-19.0, -4.0)), method="oamoc"))

# ---------------------------------------------------------------- figures 11-12
add("fig11a", "Four intersecting obstacles, unrotated method with smooth weights: "
              "the compound frame funnels the head-on start into the stack.",
    Scenario(dim=2, field=attractor(), obstacles=stack(lambda c: None, group=None),
             starts=((-18.0, 0.0),), method="baseline", boundary_tol=0.3))
add("fig11b", "Four intersecting obstacles as one group (nearest-member weights), "
              "rotated coordinates: converges around the stack.",
    Scenario(dim=2, field=attractor(), obstacles=stack(lambda c: SIGN2),
             starts=((-18.0, 8.0),), method="oamoc", dt=0.002, max_steps=8000,
             boundary_tol=0.3, policy=CombinationPolicy(consistency=False)))
add("fig12", "Trap-area start sweep: flank starts converge, adverse starts get "
             "pinned chattering in a boundary-crossing lens and stall. The loose "
             "boundary tolerance lets that failure mode play out instead of raising.",
    Scenario(dim=2, field=attractor(), obstacles=stack(lambda c: SIGN2),
             starts=((-18.0, 8.0), (-18.0, 4.0), (-18.0, -6.0), (-18.0, 0.0),
                     (-13.2, 0.0)),
             method="oamoc", dt=0.002, max_steps=8000, boundary_tol=0.3,
             policy=CombinationPolicy(consistency=False)))

# ---------------------------------------------------------------- figure 13
sphere = lambda: circle((-9.0, 0.0, 0.0), FixedIndicator(-1), dim=3)
start3 = ((-18.0, 0.0, 0.0),)
add("fig13a", "3-D sphere, unrotated method: head-on stall.",
    Scenario(dim=3, field=attractor(3), obstacles=(sphere(),), starts=start3,
             method="baseline"))
add("fig13b", "3-D sphere, frame rotated about its e3 column only (in-plane turn).",
    Scenario(dim=3, field=attractor(3), obstacles=(sphere(),), starts=start3,
             method="oamoc", sched=RotationSchedule(axes=(3,))))
add("fig13c", "3-D sphere, frame rotated about its e2 column only (vertical turn).",
    Scenario(dim=3, field=attractor(3), obstacles=(sphere(),), starts=start3,
             method="oamoc", sched=RotationSchedule(axes=(2,))))
add("fig13d", "3-D sphere, frame rotated about both its e2 and e3 columns.",
    Scenario(dim=3, field=attractor(3), obstacles=(sphere(),), starts=start3,
             method="oamoc", sched=RotationSchedule(axes=(2, 3))))

# ---------------------------------------------------------------- figure 14
cycle_obs = (circle((0.0, 0.0, 0.0), FixedIndicator(-1), dim=3),
             circle((0.0, 0.0, 10.0), FixedIndicator(-1), dim=3),
             circle((-10.0, 0.0, 0.0), FixedIndicator(-1), dim=3))
add("fig14a", "Planar limit-cycle field in free space (3000 iterations).",
    Scenario(dim=3, field=LimitCycle(10.0), obstacles=(), starts=((-15.0, 0.0, 0.0),),
             max_steps=3000))
add("fig14b", "Limit-cycle field with three spheres, unrotated method.",
    Scenario(dim=3, field=LimitCycle(10.0), obstacles=cycle_obs,
             starts=((-15.0, 0.0, 0.0),), max_steps=3000, method="baseline"))
add("fig14c", "Limit-cycle field with three spheres, rotated coordinates.",
    Scenario(dim=3, field=LimitCycle(10.0), obstacles=cycle_obs,
             starts=((-15.0, 0.0, 0.0),), max_steps=3000, method="oamoc"))
add("fig14d", "Same run as fig14c; the original figure only changes the viewpoint.",
    Scenario(dim=3, field=LimitCycle(10.0), obstacles=cycle_obs,
             starts=((-15.0, 0.0, 0.0),), max_steps=3000, method="oamoc"))

# ---------------------------------------------------------------- figure 15
def patrol_scene(obstacles, starts, dim=2, variants=((Variant.XY, 1.0),),
                 method="oamoc", axes=(3,), delta2=1.0, **kw):
    return Scenario(dim=dim, field=ConstantField((0.0,) * dim), obstacles=obstacles,
                    starts=starts, mode="patrol", method=method, dt=0.02,
                    max_steps=5000, policy=patrol_policy(variants),
                    sched=RotationSchedule(delta1=0.5, delta2=delta2, axes=axes), **kw)

add("fig15a", "Patrol with the unrotated method: no inward steering, wanders off.",
    patrol_scene((circle((0.0, 0.0), FixedIndicator(1)),), ((-10.0, 4.0),),
                 method="baseline"))
add("fig15b", "Patrol of a circle with rotated coordinates: converges to the "
              "boundary and circulates.",
    patrol_scene((circle((0.0, 0.0), FixedIndicator(1)),), ((-10.0, 4.0),)))
add("fig15c", "Patrol of a tall ellipse.",
    patrol_scene((ObstacleSpec.from_radii((0.0, 0.0), (1.2, 10.8), (1, 1),
                                          indicator=FixedIndicator(1)),),
                 ((-6.0, 8.0),)))
add("fig15d", "Patrol of a square-ish shape (per-axis power 16).",
    patrol_scene((ObstacleSpec.from_radii((0.0, 0.0), R36, (8, 8),
                                          indicator=FixedIndicator(1)),),
                 ((-10.0, 4.0),)))
s3 = lambda p=1: circle((0.0, 0.0, 0.0), FixedIndicator(1), radius=3.0, p=p, dim=3)
add("fig15e", "3-D patrol in the horizontal plane (xy coordinate variant).",
    patrol_scene((s3(),), ((-10.0, 0.0, 0.0),), dim=3,
                 variants=((Variant.XY, 1.0),)))
add("fig15f", "3-D patrol in the vertical plane (xz coordinate variant).",
    patrol_scene((s3(),), ((-10.0, 0.0, 0.0),), dim=3,
                 variants=((Variant.XZ, 1.0),)))
add("fig15g", "3-D oblique patrol mixing the xz and xy variants, both weighted 1.",
    patrol_scene((s3(),), ((-10.0, 0.0, 0.0),), dim=3,
                 variants=((Variant.XZ, 1.0), (Variant.XY, 1.0))))
add("fig15h", "3-D oblique patrol of a box-like shape (per-axis power 6).",
    patrol_scene((s3(p=3),), ((-10.0, 0.0, 0.0),), dim=3,
                 variants=((Variant.XZ, 1.0), (Variant.XY, 1.0))))


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for fid, (comment, scenario) in sorted(SCENARIOS.items()):
        import dataclasses
        named = dataclasses.replace(scenario, name=fid)
        text = "".join(f"# {line}\n" for line in comment.splitlines())
        text += serialize_scenario(named)
        (OUT / f"{fid}.yaml").write_text(text)
        print("wrote", fid)


if __name__ == "__main__":
    main()
