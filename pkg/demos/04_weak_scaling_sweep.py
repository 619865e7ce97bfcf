"""A reduced weak-scaling sweep, in-process.

Recomputed work per failure stays flat for the localised strategies and
grows linearly in n for global rollback, so the projected savings
(recompute delta x 500 J) grow quadratically.  The bundled `desk` preset
runs the full version of this experiment from the command line:

    stencil-rollback sweep --preset desk --out-dir results/
"""

import numpy as np

from stencil_rollback.analysis import group_stats, savings_fits
from stencil_rollback.config import resolve_config
from stencil_rollback.experiments import run_sweep

config = resolve_config(
    {},
    {
        "node_counts": "10,20,40,80",
        "iterations": "100",
        "node_mtbf": "16000",
        "seeds": "0:6",
        "strategies": "global,dfr-min,log",
        "write_traces": "false",
    },
)
rows, _ = run_sweep(config)

stats = group_stats(rows)
print(f"{'strategy':>8} {'n':>4} {'failures':>9} {'recomputed':>11} {'savings kJ':>11}")
for (strategy, n), s in stats.items():
    print(f"{strategy:>8} {n:>4} {s['failures']['mean']:>9.1f} "
          f"{s['recomputed']['mean']:>11.1f} {s['savings_J']['mean'] / 1e3:>11.1f}")

fits = savings_fits(rows)
quad = fits["dfr-min"]["degree2"]
print(f"\ndfr-min savings fit: {quad['coefficients'][0]:.3g}*n^2 "
      f"{quad['coefficients'][1]:+.3g}*n {quad['coefficients'][2]:+.3g}  (R2 {quad['r2']:.4f})")
