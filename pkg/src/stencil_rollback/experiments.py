"""Experiment orchestration: (strategy, n, seed) grids over shared traces.

Every strategy at a given (n, seed) runs against the *same* failure trace
so strategies stay directly comparable.  Projected savings are the
recompute delta against a global-rollback reference run on that same
trace, priced at the configured joules per task; the reference run is
executed on demand when global is not among the requested strategies.
"""

from __future__ import annotations

from .analysis import ResultRow
from .config import RunConfig
from .energy import project_savings
from .engine import RunMetrics, Simulation, failure_free_makespan
from .failures import DEFERRAL_POLICY, PRNG_IDENTITY, generate_trace
from .taskgraph import build_task_graph
from .topology import ProcessTopology


def run_point(config: RunConfig, n: int) -> tuple[list[ResultRow], list[dict]]:
    """All (strategy, seed) runs at one node count."""
    platform = config.platform()
    graph = build_task_graph(
        ProcessTopology.line(n), config.iterations, config.checkpoint_interval, config.task_flops
    )
    horizon = config.horizon_factor * failure_free_makespan(
        platform, n, config.iterations, config.checkpoint_interval
    )
    cfg_hash = config.hash()
    rows: list[ResultRow] = []
    traces: list[dict] = []
    run_order = list(dict.fromkeys(["global", *config.strategies]))
    for seed in config.seeds:
        trace = generate_trace(seed, n, config.node_mtbf, horizon)
        outcomes: dict[str, tuple[RunMetrics, Simulation]] = {}
        for strategy in run_order:
            sim = Simulation(
                graph,
                platform,
                trace,
                strategy,
                frequency_scaling=config.frequency_scaling,
                model_reload_traffic=config.model_reload_traffic,
            )
            metrics, _ = sim.run()
            outcomes[strategy] = (metrics, sim)
        reference = outcomes["global"][0].recomputed_tasks
        for strategy in config.strategies:
            metrics, sim = outcomes[strategy]
            metrics.projected_savings = project_savings(
                reference - metrics.recomputed_tasks, config.joules_per_task
            )
            rows.append(
                ResultRow(
                    strategy=strategy,
                    n=n,
                    seed=seed,
                    failures_fired=metrics.failures_fired,
                    recomputed_tasks=metrics.recomputed_tasks,
                    makespan_s=metrics.makespan,
                    total_energy_J=metrics.total_energy,
                    projected_savings_J=metrics.projected_savings,
                    config_hash=cfg_hash,
                )
            )
            traces.append(_trace_payload(config, cfg_hash, n, seed, horizon, metrics, sim))
    return rows, traces


def _trace_payload(config, cfg_hash, n, seed, horizon, metrics, sim) -> dict:
    return {
        "schema": "stencil-rollback-trace v1",
        "strategy": metrics.strategy,
        "n": n,
        "seed": seed,
        "config": cfg_hash,
        "prng": PRNG_IDENTITY,
        "deferral_policy": DEFERRAL_POLICY,
        "horizon_s": horizon,
        "events": sim.events_log,
        "recovery_windows": [
            {
                "start_s": w.start,
                "end_s": w.end,
                "failed": w.failed,
                "failed_iter": w.failed_iter,
                "ckpt_iter": w.ckpt_iter,
                "participants": list(w.participants),
                "recompute": w.recompute_count,
            }
            for w in sim.windows
        ],
        "metrics": {
            "makespan_s": metrics.makespan,
            "recomputed_tasks": metrics.recomputed_tasks,
            "failures_fired": metrics.failures_fired,
            "total_energy_J": metrics.total_energy,
            "projected_savings_J": metrics.projected_savings,
        },
    }


def run_simulate(config: RunConfig) -> tuple[list[ResultRow], list[dict]]:
    return run_point(config, config.n)


def run_sweep(config: RunConfig) -> tuple[list[ResultRow], list[dict]]:
    if len(config.node_counts) < 3:
        from .config import ConfigError

        raise ConfigError("sweep needs at least 3 node counts for curve fitting")
    rows: list[ResultRow] = []
    traces: list[dict] = []
    for n in config.node_counts:
        point_rows, point_traces = run_point(config, n)
        rows.extend(point_rows)
        traces.extend(point_traces)
    return rows, traces
