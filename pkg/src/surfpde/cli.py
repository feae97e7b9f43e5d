"""Batch command-line interface: verify | run | bubble | converge.

Everything is file-driven: scenarios come from INI-style configs and all
results land as CSV artifacts in the output directory.  Exit codes:
0 = all checks passed / run completed, 1 = a check failed, 2 = bad config.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import battery
from .calculus import CSV_HEADER
from .config import (
    ScenarioConfig,
    build_bcs,
    build_chart,
    build_energy,
    default_config,
    parse_config,
    parse_init_spec,
)
from .errors import ConfigError, SurfPdeError


def _load(args, mode: str) -> ScenarioConfig:
    cfg = parse_config(args.config) if args.config else default_config(mode)
    if cfg.mode != mode:
        raise ConfigError(f"scenario.mode: config says {cfg.mode!r} but subcommand is {mode!r}")
    if args.seed is not None:
        cfg.seed = args.seed
    if args.threads is not None:
        cfg.threads = args.threads
    if args.out is not None:
        cfg.out = args.out
    return cfg


def _out_dir(cfg: ScenarioConfig) -> str:
    out = cfg.out or "out"
    os.makedirs(out, exist_ok=True)
    return out


def cmd_verify(args) -> int:
    cfg = _load(args, "verify")
    names = None
    raw = cfg.get("verify", "checks")
    if raw:
        names = [n.strip() for n in raw.split(",") if n.strip()]
    if args.list:
        for name in names or battery.CHECKS:
            print(name)
        return 0
    params = battery.VerifyParams(
        n=cfg.get("verify", "n", 64, int),
        m_edge=cfg.get("verify", "m_edge", 256, int),
        dt=cfg.get("verify", "dt", 1e-4, float),
        eps=cfg.get("verify", "eps", 1e-4, float),
        n_points=cfg.get("verify", "n_points", 200, int),
        seed=cfg.seed,
        tolerance=cfg.get("verify", "tolerance", None, float),
    )
    reports = battery.run_battery(params, names=names, threads=cfg.threads)
    out = _out_dir(cfg)
    path = os.path.join(out, "residuals.csv")
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for rep in reports:
            fh.write(rep.csv_row() + "\n")
    failed = [rep for rep in reports if not rep.passed]
    for rep in reports:
        print(rep)
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed -> {path}")
    return 1 if failed else 0


def cmd_run(args) -> int:
    cfg = _load(args, "run")
    from .solver import SolverState, initial_field, simulate, write_report_csv, write_snapshot_csv
    from .geometry import ParamGrid

    chart = build_chart(cfg)
    grid = ParamGrid.from_chart(chart, cfg.get("grid", "n_r", 64, int), cfg.get("grid", "n_s", 64, int))
    energy = build_energy(cfg)
    bc = build_bcs(cfg, chart)
    preset, params = parse_init_spec(cfg.get("initial", "preset", "constant"))
    params.setdefault("c", cfg.get("initial", "c", 1.0, float))
    params.setdefault("theta0", cfg.get("initial", "theta0", 0.0, float))
    params.setdefault("width", cfg.get("initial", "width", 0.5, float))
    u0 = initial_field(preset, params, chart, grid, 0.0)
    kind = cfg.get("system", "kind", "diffusion")
    if kind not in ("diffusion", "heat"):
        raise ConfigError(f"system.kind: unknown system {kind!r}")
    rho = cfg.get("system", "rho", 1.0, float)
    state = SolverState.from_initial(
        chart,
        grid,
        u0,
        0.0,
        energy,
        bc,
        system=kind,
        rho0=(np.full_like(u0, rho) if kind == "heat" else None),
    )
    history = simulate(
        state,
        t_end=cfg.require("time", "t_end", float),
        dt=cfg.get("time", "dt", None, float),
        cfl_safety=cfg.get("time", "cfl_safety", 0.4, float),
        dt_max=cfg.get("time", "dt_max", None, float),
        method=cfg.get("time", "integrator", "euler"),
        record_every=cfg.get("time", "record_every", 1, int),
    )
    out = _out_dir(cfg)
    write_report_csv(history, os.path.join(out, "report.csv"))
    write_snapshot_csv(history.final_state, os.path.join(out, "snapshot.csv"))
    drift = history.mass[-1] - history.mass[0]
    print(
        f"run finished: t={history.t[-1]:g}, mass drift {drift:.3e}, "
        f"energy-law residual {history.law_residual[-1]:.3e} -> {out}"
    )
    return 0


def cmd_bubble(args) -> int:
    cfg = _load(args, "bubble")
    from .bubble import BubbleGeometry, BubbleState, simulate_bubble, write_bubble_laws_csv, write_bubble_snapshots

    geom = BubbleGeometry.affine(
        cfg.get("bubble", "a0", 1.0, float),
        cfg.get("bubble", "a1", 0.0, float),
        cfg.get("bubble", "b0", 1.2, float),
        cfg.get("bubble", "b1", 0.0, float),
        cfg.get("bubble", "m0", 0.8, float),
        cfg.get("bubble", "m1", 0.0, float),
    )
    kappa = {
        "A": cfg.get("bubble", "kappa_A", 1.0, float),
        "B": cfg.get("bubble", "kappa_B", 1.0, float),
        "S": cfg.get("bubble", "kappa_S", 1.0, float),
    }
    init = {
        s: parse_init_spec(cfg.get("bubble", f"init_{s}", "constant:1.0"))
        for s in ("A", "B", "S")
    }
    state = BubbleState.create(
        geom,
        n_r=cfg.get("bubble", "N_r", 24, int),
        n_theta=cfg.get("bubble", "N_theta", 32, int),
        kappa=kappa,
        init=init,
    )
    history = simulate_bubble(
        state,
        t_end=cfg.require("bubble", "t_end", float),
        dt=cfg.get("bubble", "dt", None, float),
        cfl_safety=cfg.get("bubble", "cfl_safety", 0.4, float),
        method=cfg.get("bubble", "integrator", "euler"),
        record_every=cfg.get("bubble", "record_every", 1, int),
    )
    out = _out_dir(cfg)
    write_bubble_laws_csv(history, os.path.join(out, "bubble_laws.csv"))
    write_bubble_snapshots(history.final_state, out)
    print(
        f"bubble finished: t={history.t[-1]:g}, mass drift {history.mass_drift[-1]:.3e}, "
        f"energy-law residual {history.energy_residual[-1]:.3e} -> {out}"
    )
    return 0


def cmd_converge(args) -> int:
    cfg = _load(args, "converge")
    study_name = cfg.get("converge", "study", "divergence_disc")
    if args.list:
        for name in battery.STUDIES:
            print(name)
        return 0
    if study_name not in battery.STUDIES:
        raise ConfigError(f"converge.study: unknown study {study_name!r}")
    base_n = cfg.get("converge", "base_n", 16, int)
    levels = cfg.get("converge", "levels", 3, int)
    min_order = cfg.get("converge", "min_order", 1.9, float)
    rows, order = battery.STUDIES[study_name](base_n, levels)
    out = _out_dir(cfg)
    path = os.path.join(out, f"converge_{study_name}.csv")
    with open(path, "w") as fh:
        fh.write("level,resolution,residual\n")
        for k, (res, val) in enumerate(rows):
            fh.write(f"{k},{res:.16e},{val:.16e}\n")
    for k, (res, val) in enumerate(rows):
        print(f"level {k}: resolution {res:g} residual {val:.6e}")
    if order is None:
        print("residuals at roundoff; slope fit skipped")
        return 0
    print(f"fitted order {order:.3f} (required >= {min_order:g}) -> {path}")
    return 0 if order >= min_order else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="surfpde",
        description="Surface-calculus verification and evolving-surface diffusion runs",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("verify", cmd_verify),
        ("run", cmd_run),
        ("bubble", cmd_bubble),
        ("converge", cmd_converge),
    ):
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None, help="scenario config (INI)")
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--threads", type=int, default=None, help="worker threads")
        p.add_argument("--seed", type=int, default=None, help="random seed")
        p.add_argument("--list", action="store_true", help="list check/study names and exit")
        p.set_defaults(fn=fn)
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SurfPdeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
