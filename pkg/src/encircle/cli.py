"""Batch front-end: scenario files, presets, CSV traces, acceptance checks.

Scenario files are JSON with keys mirroring ScenarioConfig; angles are in
radians, distances in km, times in s.  Subcommands::

    encircle run <config|preset> --out DIR    simulate and write trace/events CSV
    encircle check <config|preset>            run the convergence checks
    encircle preset-list                      list built-in presets
    encircle emit-config <preset> <path>      write a preset as an editable file
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .acceptance import RunSummary, run_checks
from .engagement import AttackerConfig, Maneuver, TargetState
from .guidance import GuidanceParams
from .presets import PRESETS
from .sim import NumericalFailure, ScenarioConfig, ScenarioError, Trace, run
from .topology import CommGraph

FLOAT_FMT = "%.17g"  # lossless round-trip


def config_to_dict(cfg: ScenarioConfig) -> dict:
    return {
        "attackers": [
            {"speed": a.speed, "heading0": a.heading0, "r0": a.r0, "los0": a.los0}
            for a in cfg.attackers
        ],
        "target": {
            "x": cfg.target.x, "y": cfg.target.y, "heading": cfg.target.heading,
            "speed": cfg.target.speed,
        },
        "maneuver": {
            "kind": cfg.maneuver.kind, "amplitude": cfg.maneuver.amplitude,
            "frequency": cfg.maneuver.frequency, "pole": cfg.maneuver.pole,
            "initial": cfg.maneuver.initial,
        },
        "graph": cfg.graph.weights.tolist(),
        "params": {
            "normal_gain": cfg.params.normal_gain,
            "tangent_gain": cfg.params.tangent_gain,
            "closing_speed": cfg.params.closing_speed,
            "accel_pole": cfg.params.accel_pole,
            "initial_ranges": cfg.params.initial_ranges.tolist(),
        },
        "mode": cfg.mode,
        "info_mode": cfg.info_mode,
        "observers": list(cfg.observers),
        "mu0": cfg.mu0,
        "z0": cfg.z0,
        "h": cfg.h,
        "t_end": cfg.t_end,
        "intercept_eps": cfg.intercept_eps,
    }


def config_from_dict(d: dict) -> ScenarioConfig:
    """Build a validated ScenarioConfig; every violated invariant is listed
    in a single ScenarioError."""
    errors: list[str] = []

    def get(section: str, key: str, default=None):
        try:
            return d[section][key] if key else d[section]
        except (KeyError, TypeError):
            if default is not None:
                return default
            errors.append(f"missing key {section}{'.' + key if key else ''}")
            return None

    try:
        attackers = [AttackerConfig(**a) for a in d.get("attackers", [])]
    except (TypeError, ValueError) as exc:
        errors.append(f"attackers: {exc}")
        attackers = []
    try:
        target = TargetState(**d["target"])
    except (KeyError, TypeError, ValueError) as exc:
        errors.append(f"target: {exc}")
        target = TargetState(x=0.0, y=0.0, heading=0.0, speed=1.0)
    try:
        maneuver = Maneuver(**d.get("maneuver", {"kind": "none"}))
    except (TypeError, ValueError) as exc:
        errors.append(f"maneuver: {exc}")
        maneuver = Maneuver(kind="none")
    try:
        graph = CommGraph(np.asarray(d["graph"], dtype=np.float64))
    except (KeyError, TypeError, ValueError) as exc:
        errors.append(f"graph: {exc}")
        graph = CommGraph(np.zeros((max(len(attackers), 2), max(len(attackers), 2))))
    pd = dict(d.get("params", {}))
    if "initial_ranges" not in pd:
        pd["initial_ranges"] = [a.r0 for a in attackers]
    params = object.__new__(GuidanceParams)
    try:
        params = GuidanceParams(**pd)
    except (TypeError, ValueError) as exc:
        errors.append(f"params: {exc}")
        params = GuidanceParams(normal_gain=2.0, tangent_gain=1.0,
                                initial_ranges=np.ones(max(len(attackers), 1)))
    cfg = ScenarioConfig(
        attackers=attackers,
        target=target,
        maneuver=maneuver,
        graph=graph,
        params=params,
        mode=d.get("mode", "known_accel"),
        info_mode=d.get("info_mode", "omniscient"),
        observers=tuple(d.get("observers", (0,))),
        mu0=d.get("mu0", 1.0),
        z0=d.get("z0", 0.0),
        h=d.get("h", 1e-3),
        t_end=d.get("t_end", 20.0),
        intercept_eps=d.get("intercept_eps", 0.01),
    )
    errors.extend(cfg.validation_errors())
    if errors:
        raise ScenarioError(errors)
    return cfg


def load_scenario(path_or_preset: str) -> ScenarioConfig:
    """Load a scenario from a preset name or a JSON file."""
    if path_or_preset in PRESETS:
        return PRESETS[path_or_preset]()
    path = Path(path_or_preset)
    if not path.exists():
        raise ScenarioError([f"no such preset or file: {path_or_preset}"])
    try:
        d = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError([f"cannot parse {path}: {exc}"]) from exc
    return config_from_dict(d)


def emit_config(cfg: ScenarioConfig, path: Path) -> None:
    path.write_text(json.dumps(config_to_dict(cfg), indent=2) + "\n")


def trace_header(n: int) -> list[str]:
    cols = ["t"]
    per = ["R", "lambda", "Vr", "Vlam", "AMr", "AMlam", "mu", "z", "AM_mag", "x", "y"]
    for i in range(1, n + 1):
        cols.extend(f"{name}_{i}" for name in per)
    cols.extend(["target_x", "target_y", "gamma_T", "A_T", "S", "V1", "V2", "V3", "W"])
    return cols


def emit_trace(tr: Trace, path: Path) -> None:
    """Write the trace as a comma-separated table, one row per step, with
    17-significant-digit floats for a deterministic, lossless dump."""
    if tr.steps == 0:
        raise ValueError("refusing to emit an empty trace")
    n = tr.cfg.n
    per = [tr.r, tr.los, tr.v_r, tr.v_los, tr.a_mr, tr.a_mlos, tr.mu, tr.z,
           tr.a_mag, tr.x, tr.y]
    blocks = [tr.t[:, None]]
    for i in range(n):
        blocks.append(np.column_stack([arr[:, i] for arr in per]))
    blocks.append(np.column_stack([
        tr.target_x, tr.target_y, tr.target_heading, tr.target_accel,
        tr.area, tr.v1, tr.v2, tr.v3, tr.w,
    ]))
    table = np.hstack(blocks)
    with path.open("w", newline="\n") as fh:
        fh.write(",".join(trace_header(n)) + "\n")
        np.savetxt(fh, table, fmt=FLOAT_FMT, delimiter=",")


def emit_events(tr: Trace, path: Path) -> None:
    with path.open("w", newline="\n") as fh:
        fh.write("attacker,time,terminal_Vr\n")
        for e in tr.events:
            fh.write(("%d," + FLOAT_FMT + "," + FLOAT_FMT + "\n") % (e.attacker, e.time, e.v_r))


def _apply_overrides(cfg: ScenarioConfig, args: argparse.Namespace) -> ScenarioConfig:
    if args.h is not None:
        cfg.h = args.h
    if args.t_end is not None:
        cfg.t_end = args.t_end
    if args.intercept_eps is not None:
        cfg.intercept_eps = args.intercept_eps
    return cfg


def _print_summary(summary: RunSummary) -> None:
    times = ", ".join(f"{t:.3f}" for t in summary.intercept_times) or "none"
    print(f"intercepts (s): {times}")
    print(f"spread (s): {summary.spread:.4f}")
    print(f"final enclosing area (km^2): {summary.final_area:.6g}")
    print(f"energy monotonicity violations: {summary.lyapunov_violations}")
    print(f"max implied accel (km/s^2): {summary.max_implied_accel:.4g}")


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _apply_overrides(load_scenario(args.scenario), args)
    tr = run(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    emit_trace(tr, out / "trace.csv")
    emit_events(tr, out / "events.csv")
    _print_summary(RunSummary.from_trace(tr))
    print(f"wrote {out / 'trace.csv'} and {out / 'events.csv'}")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    cfg = _apply_overrides(load_scenario(args.scenario), args)
    try:
        tr = run(cfg)
    except NumericalFailure as exc:
        print(f"ERROR numerical failure: {exc}")
        return 2
    results = run_checks(tr)
    for res in results:
        print(res.line())
    _print_summary(RunSummary.from_trace(tr))
    return 0 if all(r.passed for r in results) else 1


def cmd_preset_list(_: argparse.Namespace) -> int:
    for name in sorted(PRESETS):
        print(name)
    return 0


def cmd_emit_config(args: argparse.Namespace) -> int:
    if args.preset not in PRESETS:
        print(f"unknown preset {args.preset!r}; available: {', '.join(sorted(PRESETS))}",
              file=sys.stderr)
        return 1
    emit_config(PRESETS[args.preset](), Path(args.path))
    print(f"wrote {args.path}")
    return 0


def _add_overrides(p: argparse.ArgumentParser) -> None:
    p.add_argument("--h", type=float, default=None, help="integration step (s)")
    p.add_argument("--t-end", dest="t_end", type=float, default=None,
                   help="simulation horizon (s)")
    p.add_argument("--intercept-eps", dest="intercept_eps", type=float, default=None,
                   help="intercept range threshold (km)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="encircle", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate a scenario and write CSV outputs")
    p.add_argument("scenario", help="preset name or JSON config path")
    p.add_argument("--out", default="out", help="output directory")
    _add_overrides(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="run the convergence checks on a scenario")
    p.add_argument("scenario", help="preset name or JSON config path")
    _add_overrides(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("preset-list", help="list built-in presets")
    p.set_defaults(func=cmd_preset_list)

    p = sub.add_parser("emit-config", help="write a preset to an editable JSON file")
    p.add_argument("preset")
    p.add_argument("path")
    p.set_defaults(func=cmd_emit_config)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print("scenario error:", file=sys.stderr)
        for e in exc.errors:
            print(f"  - {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
