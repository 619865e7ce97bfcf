"""Command-line entry points: simulate, sweep, model, verify-jacobi.

Exit codes: 0 success, 1 configuration error, 2 runtime error, 3 failed
consistency verdict from verify-jacobi.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

import numpy as np

from .analysis import sweep_report, write_json, write_results_csv
from .config import ConfigError, RunConfig, parse_duration, read_config_file, resolve_config
from .energy import ModelParams, evaluate, p_neigh
from .experiments import run_simulate, run_sweep
from .failures import DEFERRAL_POLICY, PRNG_IDENTITY
from .jacobi import FaultSpec, JacobiConfig, run_jacobi
from .topology import partition_distance

PRESETS = ("desk", "paper")


def _load_preset(name: str) -> dict:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    ref = resources.files("stencil_rollback").joinpath(f"presets/{name}.cfg")
    with resources.as_file(ref) as path:
        return read_config_file(path)


def _config_from_args(args) -> RunConfig:
    file_values: dict = {}
    if args.preset:
        file_values.update(_load_preset(args.preset))
    if args.config:
        file_values.update(read_config_file(args.config))
    overrides: dict = {}
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    if getattr(args, "n", None) is not None:
        overrides["n"] = args.n
    if getattr(args, "out_dir", None) is not None:
        overrides["out_dir"] = args.out_dir
    return resolve_config(file_values, overrides)


def _write_outputs(config: RunConfig, rows, traces, report: dict | None) -> Path:
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg_hash = config.hash()
    rows = sorted(rows, key=lambda r: (r.n, r.seed, config.strategies.index(r.strategy)))
    write_results_csv(rows, out_dir / "results.csv", cfg_hash, PRNG_IDENTITY)
    write_json(
        {
            "schema": "stencil-rollback-meta v1",
            "generated": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "config_hash": cfg_hash,
            "prng": PRNG_IDENTITY,
            "deferral_policy": DEFERRAL_POLICY,
            "resolved_config": config.resolved(),
        },
        out_dir / "results.meta.json",
    )
    if config.write_traces:
        trace_dir = out_dir / "traces"
        trace_dir.mkdir(exist_ok=True)
        for payload in traces:
            name = f"trace_{payload['strategy']}_n{payload['n']}_seed{payload['seed']}.json"
            write_json(payload, trace_dir / name)
    if report is not None:
        write_json(report, out_dir / "fit_report.json")
    return out_dir


def cmd_simulate(args) -> int:
    config = _config_from_args(args)
    rows, traces = run_simulate(config)
    out_dir = _write_outputs(config, rows, traces, None)
    print(f"wrote {len(rows)} result rows to {out_dir / 'results.csv'}")
    return 0


def cmd_sweep(args) -> int:
    config = _config_from_args(args)
    rows, traces = run_sweep(config)
    report = sweep_report(rows, config.hash())
    out_dir = _write_outputs(config, rows, traces, report)
    print(f"wrote {len(rows)} result rows to {out_dir / 'results.csv'}")
    for strategy, fit in report["savings_fit"].items():
        c2 = fit["degree2"]["coefficients"]
        print(
            f"{strategy}: savings ~ {c2[0]:.4g}*n^2 + {c2[1]:.4g}*n + {c2[2]:.4g}"
            f"  (R2={fit['degree2']['r2']:.4f}, rss2/rss1="
            f"{fit['degree2']['rss'] / fit['degree1']['rss'] if fit['degree1']['rss'] else 0.0:.4g})"
        )
    for strategy, slope in report["recompute_per_failure_slope"].items():
        print(
            f"{strategy}: per-failure recompute slope {slope['slope']:.4g} /node"
            f" (p={slope['pvalue']:.3f}, points={slope['points']})"
        )
    return 0


def cmd_model(args) -> int:
    mu = parse_duration(args.mtbf)
    params = ModelParams(
        n=args.n,
        mu=mu,
        c_it=args.ckpt_interval,
        iter_seconds=args.iter_seconds,
        delta_power=args.delta_power,
        dim=args.dim,
    )
    values = evaluate(params)
    if args.csv:
        print("quantity,value")
        for i in range(0, args.ckpt_interval + 1):
            print(f"p_neigh({i}),{p_neigh(i, args.dim)!r}")
        for key, value in values.items():
            print(f"{key},{value!r}")
    else:
        print(f"n={args.n} mu={mu:.6g}s c_it={args.ckpt_interval} dim={args.dim}D")
        print(f"{'i':>4} {'p_neigh':>10}")
        for i in range(0, args.ckpt_interval + 1):
            print(f"{i:>4} {p_neigh(i, args.dim):>10.2f}")
        print(f"p_active      = {values['p_active']:.4f} processes")
        print(f"p_idle        = {values['p_idle']:.4f} processes")
        print(f"c_e           = {values['c_e_joules']:.4f} J")
        print(f"savings_rate  = {values['savings_rate_watts']:.4f} W")
        print(f"e_jacobi      = {values['e_jacobi_watts']:.4f} W")
    return 0


def cmd_verify_jacobi(args) -> int:
    config = JacobiConfig(
        grid_rows=args.rows,
        grid_cols=args.cols,
        local_n=args.local_n,
        max_iters=args.iters,
        checkpoint_interval=args.ckpt_interval,
    )
    fault = FaultSpec(victim=args.victim, fail_at_iteration=args.fail_at)
    clean = run_jacobi(config)
    faulty = run_jacobi(
        config, fault, strategy=args.strategy,
        frequency_scaling_emulated=not args.no_frequency_scaling,
    )
    history_ok = clean.summed_squares_history == faulty.summed_squares_history
    grid_ok = np.array_equal(clean.final_grid, faulty.final_grid)
    rec = faulty.recovery
    locality_ok = True
    if rec is not None and args.strategy == "dfr-rect":
        topo = config.topology()
        for rank, count in rec.recovery_compute_counts.items():
            if partition_distance(topo, rank, args.victim) >= rec.d and count != 0:
                locality_ok = False

    print(f"{'iter':>5} {'fault-free':>24} {args.strategy:>24} equal")
    for i, (a, b) in enumerate(zip(clean.summed_squares_history, faulty.summed_squares_history)):
        print(f"{i:>5} {a!r:>24} {b!r:>24} {'yes' if a == b else 'NO'}")
    if rec is not None:
        print(
            f"recovery: d={rec.d} ckpt_iter={rec.ckpt_iter} "
            f"participants={list(rec.participants)} idle={list(rec.idle)}"
        )
        print(f"recovery compute counts: {rec.recovery_compute_counts}")
    print(f"final grid bit-identical: {'yes' if grid_ok else 'NO'}")
    verdict = history_ok and grid_ok and locality_ok
    if args.json_out:
        write_json(
            {
                "schema": "stencil-rollback-verify v1",
                "strategy": args.strategy,
                "pass": verdict,
                "history_fault_free": clean.summed_squares_history,
                "history_faulty": faulty.summed_squares_history,
                "recovery": None
                if rec is None
                else {
                    "d": rec.d,
                    "ckpt_iter": rec.ckpt_iter,
                    "participants": list(rec.participants),
                    "idle": list(rec.idle),
                    "recovery_compute_counts": rec.recovery_compute_counts,
                    "idle_states": rec.idle_states,
                },
            },
            args.json_out,
        )
    print(f"{'PASS' if verdict else 'FAIL'} (strategy={args.strategy})")
    return 0 if verdict else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stencil-rollback",
        description="Rollback-recovery simulation and energy modelling for stencil codes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_args(p):
        p.add_argument("--config", help="flat key=value configuration file")
        p.add_argument("--preset", choices=PRESETS, help="bundled parameter preset")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a single configuration key (repeatable)")
        p.add_argument("--out-dir", help="output directory")

    p_sim = sub.add_parser("simulate", help="run one node count over seeds and strategies")
    add_config_args(p_sim)
    p_sim.add_argument("--n", type=int, help="process/host count")
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="weak-scaling sweep over node_counts with fits")
    add_config_args(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep, n=None)

    p_model = sub.add_parser("model", help="evaluate the analytic energy-savings model")
    p_model.add_argument("--n", type=int, required=True)
    p_model.add_argument("--mtbf", required=True, help="per-node MTBF, e.g. 100h or 50y")
    p_model.add_argument("--ckpt-interval", type=int, default=6)
    p_model.add_argument("--dim", type=int, choices=(1, 2), default=1)
    p_model.add_argument("--delta-power", type=float, default=10.0)
    p_model.add_argument("--iter-seconds", type=float, default=4.0)
    p_model.add_argument("--csv", action="store_true")
    p_model.set_defaults(func=cmd_model)

    p_ver = sub.add_parser("verify-jacobi", help="application-level recovery consistency check")
    p_ver.add_argument("--rows", type=int, default=2)
    p_ver.add_argument("--cols", type=int, default=4)
    p_ver.add_argument("--local-n", type=int, default=100)
    p_ver.add_argument("--iters", type=int, default=10)
    p_ver.add_argument("--ckpt-interval", type=int, default=10)
    p_ver.add_argument("--victim", type=int, default=1)
    p_ver.add_argument("--fail-at", type=int, default=3)
    p_ver.add_argument("--strategy", choices=("global", "dfr-rect"), default="dfr-rect")
    p_ver.add_argument("--no-frequency-scaling", action="store_true")
    p_ver.add_argument("--json-out", help="dump histories and verdict as JSON")
    p_ver.set_defaults(func=cmd_verify_jacobi)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
