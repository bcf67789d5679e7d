"""Command-line interface: simulate, sweep, verify, reproduce.

Exit codes: 0 success, 1 invariant or simulation failure, 2 usage error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import checks
from .dynamics import Scenario, goal_of, simulate
from .errors import ModNavError, ScenarioError
from .plotting import emit_plot
from .scenario_io import load_scenario, output_paths, parse_scenario, write_trajectory

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_IO = 3


def bundled_figure_ids() -> list[str]:
    """Figure ids shipped with the package, sorted for display."""
    root = resources.files("modnav").joinpath("scenarios")
    ids = [p.name[:-5] for p in root.iterdir() if p.name.endswith(".yaml")]

    def key(fid: str):
        stem = fid[3:]
        digits = "".join(ch for ch in stem if ch.isdigit())
        letter = "".join(ch for ch in stem if ch.isalpha())
        return (int(digits), letter)

    return sorted(ids, key=key)


def load_bundled(figure_id: str) -> tuple[Scenario, str]:
    fid = figure_id.lower()
    if not fid.startswith("fig"):
        fid = "fig" + fid
    res = resources.files("modnav").joinpath("scenarios", f"{fid}.yaml")
    if not res.is_file():
        raise ScenarioError(
            f"unknown figure id {figure_id!r}; available: {', '.join(bundled_figure_ids())}"
        )
    text = res.read_text()
    return parse_scenario(text), fid


def _summarise(trajs, scenario, out):
    goal = goal_of(scenario.field)
    for i, tr in enumerate(trajs):
        extra = ""
        if goal is not None:
            dist = float(np.linalg.norm(tr.final_state - np.asarray(goal)))
            extra = f"  dist-to-goal {dist:.4g}"
        print(
            f"start[{i}] {tr.start}: {tr.status} after {len(tr)} steps, "
            f"min gamma {tr.min_gamma:.6f}{extra}",
            file=out,
        )


def _write_results(trajs, scenario, out_path, plot_path):
    written = []
    if out_path:
        base = Path(out_path)
        base.parent.mkdir(parents=True, exist_ok=True)
        if len(trajs) == 1:
            write_trajectory(trajs[0], base)
            written.append(base)
        else:
            for i, tr in enumerate(trajs):
                target = base.with_name(f"{base.stem}_{i:02d}{base.suffix or '.csv'}")
                write_trajectory(tr, target)
                written.append(target)
    if plot_path:
        plot = Path(plot_path)
        plot.parent.mkdir(parents=True, exist_ok=True)
        emit_plot(trajs, scenario.obstacles, plot)
        written.append(plot)
    return written


def cmd_simulate(args) -> int:
    document = Path(args.scenario).read_text()
    scenario = parse_scenario(document)
    declared = output_paths(document)
    trajs = simulate(scenario)
    _summarise(trajs, scenario, sys.stdout)
    out = args.out or declared.get("trajectory")
    plot = args.plot or declared.get("plot")
    for path in _write_results(trajs, scenario, out, plot):
        print(f"wrote {path}")
    return EXIT_OK


def _parse_grid(spec: str, dim: int):
    axes_idx = {"x": 0, "y": 1, "z": 2}
    ranges: dict[int, np.ndarray] = {}
    for part in spec.split(","):
        name, _, rng = part.partition("=")
        name = name.strip().lower()
        if name not in axes_idx or axes_idx[name] >= dim:
            raise ScenarioError(f"grid: unknown axis {name!r} for dimension {dim}")
        pieces = rng.split(":")
        if len(pieces) != 3:
            raise ScenarioError("grid: each axis needs start:stop:count")
        lo, hi, count = float(pieces[0]), float(pieces[1]), int(pieces[2])
        if count < 1:
            raise ScenarioError("grid: count must be >= 1")
        ranges[axes_idx[name]] = np.linspace(lo, hi, count)
    if not ranges:
        raise ScenarioError("grid: no axes given")
    grids = [ranges.get(i, np.array([0.0])) for i in range(dim)]
    mesh = np.meshgrid(*grids, indexing="ij")
    return [tuple(float(m[idx]) for m in mesh) for idx in np.ndindex(mesh[0].shape)]


def cmd_sweep(args) -> int:
    import dataclasses

    scenario = load_scenario(args.scenario)
    starts = _parse_grid(args.grid, scenario.dim)
    kept, skipped = [], 0
    for s in starts:
        try:
            dataclasses.replace(scenario, starts=(s,))
        except ModNavError:
            skipped += 1
            continue
        kept.append(s)
    if not kept:
        raise ScenarioError("grid: every start is inside an obstacle")
    swept = dataclasses.replace(scenario, starts=tuple(kept))
    trajs = simulate(swept)
    _summarise(trajs, swept, sys.stdout)
    tally: dict[str, int] = {}
    for tr in trajs:
        tally[tr.status] = tally.get(tr.status, 0) + 1
    print(
        "summary: "
        + ", ".join(f"{k}={v}" for k, v in sorted(tally.items()))
        + (f", skipped {skipped} start(s) inside obstacles" if skipped else "")
    )
    if args.out:
        lines = ["start_index," + ",".join(f"start_{i+1}" for i in range(swept.dim))
                 + ",status,steps,min_gamma"]
        for i, tr in enumerate(trajs):
            coords = ",".join(format(v, ".17g") for v in tr.start)
            lines.append(f"{i},{coords},{tr.status},{len(tr)},{format(tr.min_gamma, '.17g')}")
        Path(args.out).write_text("\n".join(lines) + "\n")
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = checks.run_all(quick=args.quick)
    ok = True
    for res in results:
        print(res.line())
        ok = ok and res.passed
    print("verify:", "all invariants hold" if ok else "INVARIANT FAILURE")
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_reproduce(args) -> int:
    if args.list:
        for fid in bundled_figure_ids():
            print(fid)
        return EXIT_OK
    if not args.figure:
        raise ScenarioError("reproduce: a figure id is required (or --list)")
    scenario, fid = load_bundled(args.figure)
    trajs = simulate(scenario)
    print(f"{fid}: {scenario.name or 'bundled scenario'}")
    _summarise(trajs, scenario, sys.stdout)
    outdir = Path(args.outdir) / fid
    outdir.mkdir(parents=True, exist_ok=True)
    paths = _write_results(trajs, scenario, outdir / "trajectory.csv", outdir / "plot.svg")
    for path in paths:
        print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modnav",
        description="Obstacle-avoiding dynamical-system simulator built on "
        "modulation matrices over rotated orthonormal frames.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a scenario file")
    p_sim.add_argument("scenario", help="path to a scenario YAML file")
    p_sim.add_argument("--out", help="trajectory CSV path (per start when several)")
    p_sim.add_argument("--plot", help="SVG plot path")
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="run a grid of start points")
    p_sweep.add_argument("scenario", help="path to a scenario YAML file")
    p_sweep.add_argument("--grid", required=True,
                         help="per-axis ranges, e.g. x=-18:-10:5,y=-6:6:7")
    p_sweep.add_argument("--out", help="summary CSV path")
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run the invariant suite")
    p_verify.add_argument("--quick", action="store_true",
                          help="tenth-size sample counts")
    p_verify.set_defaults(func=cmd_verify)

    p_rep = sub.add_parser("reproduce", help="run a bundled figure scenario")
    p_rep.add_argument("figure", nargs="?", help="figure id, e.g. fig7d")
    p_rep.add_argument("--outdir", default="out", help="output directory root")
    p_rep.add_argument("--list", action="store_true", help="list bundled figure ids")
    p_rep.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ModNavError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
