"""Analytic model of energy saved by localised rollback with idle scaling.

The savings rate across a system is the product of three factors: the
system failure rate n/mu, the number of processes left idle by a localised
recovery, and the energy saved per idle process per recovery phase.  For
radius-1 stencils the idle count stays close to n, which makes the overall
rate grow quadratically in the process count.
"""

from __future__ import annotations

from dataclasses import dataclass

SECONDS_PER_HOUR = 3600.0
SECONDS_PER_YEAR = 365.0 * 24.0 * SECONDS_PER_HOUR


@dataclass(frozen=True)
class ModelParams:
    n: int
    mu: float  # per-node MTBF, seconds
    c_it: int  # checkpoint interval, iterations
    iter_seconds: float = 4.0
    delta_power: float = 10.0  # watts shed per idle, frequency-scaled host
    dim: int = 1

    def __post_init__(self):
        if self.n < 1 or self.mu <= 0 or self.c_it < 1:
            raise ValueError("n, mu and c_it must be positive")
        if self.iter_seconds <= 0 or self.delta_power < 0:
            raise ValueError("iter_seconds must be > 0 and delta_power >= 0")
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")


def p_neigh(i: int, dim: int = 1) -> float:
    """Neighbour processes supporting a recovery i iterations past a checkpoint."""
    if i < 0:
        raise ValueError("i must be >= 0")
    base = 2 * max(i - 1, 0)
    return float(base if dim == 1 else base * base)


def p_active(c_it: int, dim: int = 1) -> float:
    """Average neighbour involvement for failures uniform over a checkpoint block."""
    if c_it < 1:
        raise ValueError("c_it must be >= 1")
    return sum(p_neigh(j, dim) for j in range(1, c_it + 1)) / c_it


def p_idle(n: int, c_it: int, dim: int = 1) -> float:
    """Processes left idle during a localised recovery (clamped at zero).

    Kernels with global data dependencies have no idle processes at all,
    which is the p_idle = 0, zero-savings limit of this model.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return max(n - p_active(c_it, dim), 0.0)


def c_e(delta_power: float, iter_seconds: float, c_it: int) -> float:
    """Energy saved per idle process per recovery phase, in joules.

    Failures land uniformly inside a checkpoint block, so the average
    rollback spans c_it/2 iterations.
    """
    if delta_power < 0 or iter_seconds <= 0 or c_it < 1:
        raise ValueError("arguments must be positive (delta_power may be 0)")
    return delta_power * iter_seconds * c_it / 2.0


def savings_rate(n: int, mu: float, p_idle_value: float, c_e_value: float) -> float:
    """System-wide rate of energy savings in watts: (n/mu) * P_idle * C_e."""
    if mu <= 0:
        raise ValueError("mu must be > 0")
    return (n / mu) * p_idle_value * c_e_value


def e_jacobi(n: int, mu: float, c_it: int) -> float:
    """Savings rate for the measured Jacobi setup: n^2/mu * 20 * c_it watts.

    The literal 20 J/iteration folds delta_power = 10 W over 4 s halved for
    the average rollback length; use ``savings_rate`` with explicit factors
    to generalise.
    """
    if n < 1 or mu <= 0 or c_it < 1:
        raise ValueError("n, mu and c_it must be positive")
    return (n * n / mu) * 20.0 * c_it


def project_savings(delta_recomputed_tasks: float, joules_per_task: float = 500.0) -> float:
    """Projected joules saved given the recompute delta versus global rollback."""
    if joules_per_task < 0:
        raise ValueError("joules_per_task must be >= 0")
    return delta_recomputed_tasks * joules_per_task


def evaluate(params: ModelParams) -> dict[str, float]:
    """All model quantities for one parameter set."""
    active = p_active(params.c_it, params.dim)
    idle = p_idle(params.n, params.c_it, params.dim)
    ce = c_e(params.delta_power, params.iter_seconds, params.c_it)
    return {
        "p_active": active,
        "p_idle": idle,
        "c_e_joules": ce,
        "savings_rate_watts": savings_rate(params.n, params.mu, idle, ce),
        "e_jacobi_watts": e_jacobi(params.n, params.mu, params.c_it),
    }
