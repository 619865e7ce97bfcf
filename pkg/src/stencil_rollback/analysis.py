"""Result rows, the versioned CSV schema, aggregation and curve fits.

The CSV written here is the contract consumed by the plotting frontend:
line one is a metadata comment carrying the schema version, generation
timestamp, configuration hash and PRNG identity; line two is the header;
every following line is one (strategy, n, seed) run.  Reruns with the same
configuration are byte-identical except for the metadata line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
from scipy import stats

CSV_SCHEMA = "stencil-rollback-results v1"
CSV_COLUMNS = (
    "strategy",
    "n",
    "seed",
    "failures_fired",
    "recomputed_tasks",
    "makespan_s",
    "total_energy_J",
    "projected_savings_J",
    "config_hash",
)


@dataclass(frozen=True)
class ResultRow:
    strategy: str
    n: int
    seed: int
    failures_fired: int
    recomputed_tasks: int
    makespan_s: float
    total_energy_J: float
    projected_savings_J: float
    config_hash: str

    def as_csv(self) -> str:
        return ",".join(
            (
                self.strategy,
                str(self.n),
                str(self.seed),
                str(self.failures_fired),
                str(self.recomputed_tasks),
                repr(float(self.makespan_s)),
                repr(float(self.total_energy_J)),
                repr(float(self.projected_savings_J)),
                self.config_hash,
            )
        )


def write_results_csv(rows: list[ResultRow], path: str | Path, config_hash: str, prng: str) -> None:
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    lines = [
        f"# {CSV_SCHEMA} | generated={stamp} | config={config_hash} | prng={prng}",
        ",".join(CSV_COLUMNS),
    ]
    lines.extend(row.as_csv() for row in rows)
    Path(path).write_text("\n".join(lines) + "\n")


def read_results_csv(path: str | Path) -> list[ResultRow]:
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith(f"# {CSV_SCHEMA}"):
        raise ValueError(f"{path}: missing or unsupported results schema (want {CSV_SCHEMA})")
    if lines[1] != ",".join(CSV_COLUMNS):
        raise ValueError(f"{path}: unexpected column header")
    out = []
    for line in lines[2:]:
        if not line.strip():
            continue
        strategy, n, seed, fails, rec, mk, en, sav, ch = line.split(",")
        out.append(
            ResultRow(strategy, int(n), int(seed), int(fails), int(rec),
                      float(mk), float(en), float(sav), ch)
        )
    return out


# ------------------------------------------------------------------ statistics

def group_stats(rows: list[ResultRow]) -> dict:
    """Per (strategy, n): mean/min/max of the reported metrics over seeds."""
    grouped: dict[tuple[str, int], list[ResultRow]] = {}
    for row in rows:
        grouped.setdefault((row.strategy, row.n), []).append(row)
    out = {}
    for key, rs in sorted(grouped.items()):
        def stats_of(getter):
            vals = [getter(r) for r in rs]
            return {"mean": float(np.mean(vals)), "min": float(min(vals)), "max": float(max(vals))}

        out[key] = {
            "runs": len(rs),
            "failures": stats_of(lambda r: r.failures_fired),
            "recomputed": stats_of(lambda r: r.recomputed_tasks),
            "makespan_s": stats_of(lambda r: r.makespan_s),
            "energy_J": stats_of(lambda r: r.total_energy_J),
            "savings_J": stats_of(lambda r: r.projected_savings_J),
        }
    return out


def polynomial_fit(xs, ys, degree: int) -> dict:
    """Least-squares fit; coefficients ordered highest degree first."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    coeffs = np.polyfit(xs, ys, degree)
    pred = np.polyval(coeffs, xs)
    rss = float(np.sum((ys - pred) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - rss / ss_tot
    return {"degree": degree, "coefficients": [float(c) for c in coeffs], "rss": rss, "r2": r2}


def savings_fits(rows: list[ResultRow]) -> dict:
    """Degree-1 and degree-2 fits of mean projected savings versus n."""
    out: dict[str, dict] = {}
    per = group_stats(rows)
    strategies = sorted({s for s, _ in per})
    for strategy in strategies:
        if strategy == "global":
            continue
        points = sorted((n, v["savings_J"]["mean"]) for (s, n), v in per.items() if s == strategy)
        if len(points) < 3:
            continue
        ns = [p[0] for p in points]
        means = [p[1] for p in points]
        out[strategy] = {
            "n": ns,
            "mean_savings_J": means,
            "degree1": polynomial_fit(ns, means, 1),
            "degree2": polynomial_fit(ns, means, 2),
        }
    return out


def recompute_slope(rows: list[ResultRow], strategy: str, per_failure: bool = True) -> dict:
    """Linear trend of recomputed work versus n across individual runs.

    Localised strategies should show no statistically significant slope in
    the per-failure recompute; global rollback a clearly positive one.
    Runs with zero failures carry no per-failure information and are
    skipped.
    """
    xs, ys = [], []
    for row in rows:
        if row.strategy != strategy:
            continue
        if per_failure:
            if row.failures_fired > 0:
                xs.append(row.n)
                ys.append(row.recomputed_tasks / row.failures_fired)
        else:
            xs.append(row.n)
            ys.append(row.recomputed_tasks)
    if len(set(xs)) < 2:
        return {"slope": 0.0, "pvalue": 1.0, "stderr": float("nan"), "points": len(xs)}
    res = stats.linregress(xs, ys)
    return {
        "slope": float(res.slope),
        "pvalue": float(res.pvalue),
        "stderr": float(res.stderr),
        "points": len(xs),
    }


def sweep_report(rows: list[ResultRow], config_hash: str) -> dict:
    strategies = sorted({r.strategy for r in rows})
    report = {
        "schema": "stencil-rollback-fit-report v1",
        "config": config_hash,
        "node_counts": sorted({r.n for r in rows}),
        "per_group": {
            f"{s}@{n}": v for (s, n), v in group_stats(rows).items()
        },
        "savings_fit": savings_fits(rows),
        "recompute_per_failure_slope": {
            s: recompute_slope(rows, s, per_failure=True) for s in strategies
        },
    }
    return report


def write_json(payload: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
