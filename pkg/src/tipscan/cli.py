"""Command-line interface for the simulation and analysis pipeline.

Subcommands: ``simulate`` (trajectory CSV), ``analyze`` (records CSV),
``portrait`` (phase-portrait CSVs), ``extrapolate`` (crossing estimate
from a records CSV) and ``presets`` (print the benchmark parameter
table). Options may come from a flat ``key = value`` config file; CLI
flags override file values, which override the model preset.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace

import numpy as np

from . import pipeline, presets, sde
from .models import critical_manifold_and_nullclines, make_model
from .pipeline import (
    InsufficientDataError,
    extrapolate_crossing,
    read_records_csv,
    run_pipeline,
    write_records_csv,
)
from .sde import FLOAT_FMT, SimConfig, integrate, write_trajectory_csv

INT_KEYS = {"sub", "block_size", "stride", "sim.seed", "mc.n_samples", "mc.seed"}
STR_KEYS = {"model", "detrend", "se_method", "stop_rule"}
VALID_KEYS = STR_KEYS | INT_KEYS | {
    "departure_delta",
    "sim.epsilon",
    "sim.r",
    "sim.dt",
    "sim.lambda0",
    "sim.alpha_x",
    "sim.alpha_y",
    "sim.omega",
    "sim.tspan",
    "mc.max_discard_fraction",
}


class CliError(Exception):
    pass


def parse_config_file(path) -> dict:
    """Parse a flat ``key = value`` config file with ``#`` comments."""
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CliError(f"{path}:{lineno}: expected 'key = value'")
            key, _, raw = line.partition("=")
            key = key.strip()
            raw = raw.strip()
            if key not in VALID_KEYS:
                raise CliError(f"{path}:{lineno}: unknown config key {key!r}")
            if key in STR_KEYS:
                values[key] = raw
            elif key in INT_KEYS:
                values[key] = int(raw)
            else:
                values[key] = float(raw)
    return values


def _build_config(args) -> pipeline.PipelineConfig:
    values = {}
    if args.config:
        values.update(parse_config_file(args.config))
    for key, attr in (
        ("model", "model"),
        ("se_method", "se_method"),
        ("detrend", "detrend"),
        ("stride", "stride"),
        ("stop_rule", "stop_rule"),
    ):
        v = getattr(args, attr, None)
        if v is not None:
            values[key] = v
    if getattr(args, "seed", None) is not None:
        values["sim.seed"] = args.seed
        values["mc.seed"] = args.seed
    model = values.pop("model", None)
    if model is None:
        raise CliError("model: required (via --model or config file)")
    if model == "subcritical_hopf" and values.get("sim.epsilon") not in (None, 1.0):
        print(
            "warning: sim.epsilon is ignored by the subcritical_hopf model",
            file=sys.stderr,
        )
        values.pop("sim.epsilon")
    seed = values.pop("sim.seed", 0)
    mc_overrides = {k[3:]: v for k, v in values.items() if k.startswith("mc.")}
    other = {k: v for k, v in values.items() if not k.startswith("mc.")}
    try:
        cfg = presets.preset_config(model, seed=seed, **other)
        if mc_overrides:
            cfg = replace(cfg, mc=replace(cfg.mc, **mc_overrides))
        cfg.validate()
    except (TypeError, ValueError) as exc:
        raise CliError(str(exc)) from exc
    return cfg


def _out_dir(args) -> str:
    out = args.out or os.environ.get("TIPSCAN_OUT_DIR") or "."
    os.makedirs(out, exist_ok=True)
    return out


def _cmd_simulate(args) -> int:
    cfg = _build_config(args)
    model = make_model(cfg.model, epsilon=cfg.sim.epsilon, omega=cfg.sim.omega)
    frame = integrate(model, cfg.sim)
    path = os.path.join(_out_dir(args), f"{cfg.model}_trajectory.csv")
    write_trajectory_csv(frame, path)
    print(path)
    return 0


def _cmd_analyze(args) -> int:
    cfg = _build_config(args)
    records = run_pipeline(cfg)
    path = os.path.join(_out_dir(args), f"{cfg.model}_records.csv")
    write_records_csv(records, path)
    print(path)
    return 0


def _cmd_portrait(args) -> int:
    cfg = _build_config(args)
    model = make_model(cfg.model, epsilon=cfg.sim.epsilon, omega=cfg.sim.omega)
    lambdas = [float(v) for v in args.lambdas.split(",")]
    out = _out_dir(args)
    lo, hi = model.state_box
    grid = np.linspace(lo, hi, args.grid_points)
    for lam in lambdas:
        sets = {}
        if model.has_timescale_split:
            sets.update(critical_manifold_and_nullclines(model, lam, grid))
        for i, (x0, y0) in enumerate(_portrait_starts(model, lam)):
            sets[f"trajectory_{i}"] = _deterministic_trajectory(model, cfg, lam, x0, y0)
        path = os.path.join(out, f"{cfg.model}_portrait_lam{lam:g}.csv")
        with open(path, "w") as fh:
            fh.write("set,x,y\n")
            for name, poly in sets.items():
                for x, y in poly:
                    fh.write("%s,%s,%s\n" % (name, FLOAT_FMT % x, FLOAT_FMT % y))
        print(path)
    return 0


def _portrait_starts(model, lam):
    lo, hi = model.state_box
    span = hi - lo
    corners = [
        (lo + 0.25 * span, lo + 0.75 * span),
        (lo + 0.75 * span, lo + 0.25 * span),
        (lo + 0.8 * span, lo + 0.8 * span),
        (lo + 0.2 * span, lo + 0.2 * span),
    ]
    return corners


def _deterministic_trajectory(model, cfg, lam, x0, y0, tspan=30.0):
    # noise-free autonomous run at fixed forcing, for phase portraits
    sim = replace(
        cfg.sim, r=0.0, lambda0=lam, alpha_x=0.0, alpha_y=0.0, tspan=tspan
    )
    n_steps = int(math.floor(sim.tspan / sim.dt + 1e-9))
    x, y = x0, y0
    pts = [(x, y)]
    for _ in range(n_steps):
        fx, fy = model.drift(x, y, lam)
        xp = x + fx * sim.dt
        yp = y + fy * sim.dt
        fxp, fyp = model.drift(xp, yp, lam)
        x = x + 0.5 * sim.dt * (fx + fxp)
        y = y + 0.5 * sim.dt * (fy + fyp)
        if abs(x) > sde.BLOWUP_LIMIT or abs(y) > sde.BLOWUP_LIMIT:
            break
        pts.append((x, y))
    return np.array(pts)


def _cmd_extrapolate(args) -> int:
    records = read_records_csv(args.records)
    fit_range = None
    if args.t_min is not None or args.t_max is not None:
        fit_range = (
            args.t_min if args.t_min is not None else -math.inf,
            args.t_max if args.t_max is not None else math.inf,
        )
    try:
        est = extrapolate_crossing(records, which=args.which, fit_range=fit_range)
    except InsufficientDataError as exc:
        raise CliError(str(exc)) from exc
    print(f"slope = {est.slope:.6g} +- {est.se_slope:.6g}")
    print(f"intercept = {est.intercept:.6g}")
    if est.t_cross is None:
        print("no crossing (trend not rising)")
    else:
        print(f"t_cross = {est.t_cross:.6g}")
        print(f"lambda_cross = {est.lambda_cross:.6g}")
    return 0


def _cmd_presets(args) -> int:
    print(presets.format_preset_table())
    return 0


def _add_common(parser):
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--model", choices=list(presets.PRESET_TABLE))
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="output directory (default $TIPSCAN_OUT_DIR or .)")
    parser.add_argument("--se-method", dest="se_method", choices=list(pipeline.SE_METHODS))
    parser.add_argument("--detrend", choices=["mean", "linear"])
    parser.add_argument("--stride", type=int)
    parser.add_argument("--stop-rule", dest="stop_rule", choices=list(pipeline.STOP_RULES))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tipscan",
        description="Simulate ramped fast-slow SDEs and estimate eigenvalue-based early warnings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write a trajectory CSV")
    _add_common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("analyze", help="run the sliding-window pipeline, write records CSV")
    _add_common(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("portrait", help="write phase-portrait CSVs for fixed forcing values")
    _add_common(p)
    p.add_argument("--lambdas", default="0.1,0,-0.1", help="comma-separated forcing values")
    p.add_argument("--grid-points", type=int, default=400)
    p.set_defaults(func=_cmd_portrait)

    p = sub.add_parser("extrapolate", help="extrapolate an instability crossing from records")
    p.add_argument("--records", required=True)
    p.add_argument("--which", choices=["leading", "nonleading"], default="leading")
    p.add_argument("--t-min", type=float)
    p.add_argument("--t-max", type=float)
    p.set_defaults(func=_cmd_extrapolate)

    p = sub.add_parser("presets", help="print the benchmark parameter table")
    p.set_defaults(func=_cmd_presets)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
