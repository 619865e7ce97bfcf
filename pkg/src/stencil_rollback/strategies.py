"""Rollback planners: who recomputes what after a fail-stop failure.

All planners are pure functions of the failure position ``j``, the offset
``d = failed_iter - last_ckpt_iter`` and the topology.  They return the
set of (process, iteration) tasks to re-execute, the participating
processes and the processes left idle; the engine applies the plan.

Four strategies are provided:

* ``global``   -- every process reloads its checkpoint and redoes every
                  iteration since; recompute is n*(d-1).
* ``dfr-rect`` -- data-flow rollback where every process within distance
                  < d of the failure redoes all d-1 lost iterations on
                  duplicate data (the constant-width recovery group).
* ``dfr-min``  -- data-flow rollback restricted to the shrinking
                  dependency cone: recovery step m involves only processes
                  within distance d-1-m, giving (d-1)^2 tasks interior.
* ``log``      -- message-logging replay: only the replacement recomputes
                  its own d-1 lost iterations; ghost inputs are replayed
                  from logs at no recompute cost.

The recompute range is the open interval (last_ckpt_iter, failed_iter):
the failed iteration itself is executed as normal forefront work after the
replacement rejoins, uniformly for every strategy, so counts compare
fairly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .taskgraph import TaskId
from .topology import ProcessTopology, TopologyError, partition_distance

STRATEGY_TAGS = ("global", "dfr-min", "dfr-rect", "log")


@dataclass(frozen=True)
class RecoveryPlan:
    recompute: frozenset[TaskId]
    participants: frozenset[int]
    idle: frozenset[int]
    rejoin_iteration: int
    strategy: str = ""

    def ordered_recompute(self) -> list[TaskId]:
        """Dependency order: by iteration, then process index."""
        return sorted(self.recompute, key=lambda t: (t.iteration, t.process))


def _clipped_interval(lo: int, hi: int, n: int) -> range:
    return range(max(lo, 0), min(hi, n - 1) + 1)


def plan_global(j: int, d: int, n: int, last_ckpt_iter: int) -> RecoveryPlan:
    """All n processes roll back to the checkpoint and redo d-1 iterations."""
    if d < 0:
        raise ValueError("offset d must be >= 0")
    recompute = frozenset(
        TaskId(p, i)
        for i in range(last_ckpt_iter + 1, last_ckpt_iter + d)
        for p in range(n)
    )
    return RecoveryPlan(
        recompute=recompute,
        participants=frozenset(range(n)),
        idle=frozenset(),
        rejoin_iteration=last_ckpt_iter + d,
        strategy="global",
    )


def plan_dfr(
    j: int,
    d: int,
    topology: ProcessTopology,
    last_ckpt_iter: int,
    variant: str = "minimal",
) -> RecoveryPlan:
    """Data-flow rollback around failed process ``j`` on a 1D line.

    ``variant="rectangular"`` keeps every process within distance < d busy
    for all d-1 recovery steps, mirroring the distance guard of the
    application-level recovery.  ``variant="minimal"`` recomputes only the
    shrinking dependency cone that feeds the replacement's partition.
    """
    if not topology.is_line:
        raise TopologyError("data-flow rollback planning supports 1D lines only")
    if d < 0:
        raise ValueError("offset d must be >= 0")
    if variant not in ("minimal", "rectangular"):
        raise ValueError(f"unknown DFR variant: {variant}")
    n = topology.n
    topology.check_rank(j)

    recompute: set[TaskId] = set()
    participants: set[int] = {j}
    if variant == "rectangular":
        group = _clipped_interval(j - (d - 1), j + (d - 1), n) if d >= 1 else range(j, j + 1)
        for m in range(1, d):
            for p in group:
                recompute.add(TaskId(p, last_ckpt_iter + m))
        participants.update(group)
    else:
        # Cone level m rebuilds only partitions still able to influence the
        # replacement's partition by the rejoin iteration.
        for m in range(1, d):
            radius = d - 1 - m
            for p in _clipped_interval(j - radius, j + radius, n):
                recompute.add(TaskId(p, last_ckpt_iter + m))
                participants.add(p)

    return RecoveryPlan(
        recompute=frozenset(recompute),
        participants=frozenset(participants),
        idle=frozenset(range(n)) - frozenset(participants),
        rejoin_iteration=last_ckpt_iter + d,
        strategy="dfr-rect" if variant == "rectangular" else "dfr-min",
    )


def plan_logbased(j: int, d: int, last_ckpt_iter: int, n: int) -> RecoveryPlan:
    """Replay on the replacement only; ghost inputs come from message logs."""
    if d < 0:
        raise ValueError("offset d must be >= 0")
    recompute = frozenset(
        TaskId(j, i) for i in range(last_ckpt_iter + 1, last_ckpt_iter + d)
    )
    return RecoveryPlan(
        recompute=recompute,
        participants=frozenset({j}),
        idle=frozenset(range(n)) - {j},
        rejoin_iteration=last_ckpt_iter + d,
        strategy="log",
    )


def make_plan(
    strategy: str,
    j: int,
    d: int,
    topology: ProcessTopology,
    last_ckpt_iter: int,
) -> RecoveryPlan:
    """Dispatch on a strategy tag (see STRATEGY_TAGS)."""
    if strategy == "global":
        return plan_global(j, d, topology.n, last_ckpt_iter)
    if strategy == "dfr-min":
        return plan_dfr(j, d, topology, last_ckpt_iter, variant="minimal")
    if strategy == "dfr-rect":
        return plan_dfr(j, d, topology, last_ckpt_iter, variant="rectangular")
    if strategy == "log":
        return plan_logbased(j, d, last_ckpt_iter, topology.n)
    raise ValueError(f"unknown strategy tag: {strategy}")


def recompute_count_closed_form(
    strategy: str, n: int, d: int, j: int
) -> int:
    """Closed-form |plan.recompute| with boundary clipping.

    Kept free of any set construction so it can cross-check the planners:
    global n*(d-1); rectangular (d-1)*|{dist < d}|; minimal the clipped
    cone sum (interior value (d-1)^2); log-based d-1.
    """
    if d <= 1:
        return 0
    if strategy == "global":
        return n * (d - 1)
    if strategy == "log":
        return d - 1
    if strategy == "dfr-rect":
        width = min(j + d - 1, n - 1) - max(j - d + 1, 0) + 1
        return (d - 1) * width
    if strategy == "dfr-min":
        total = 0
        for m in range(1, d):
            radius = d - 1 - m
            total += min(j + radius, n - 1) - max(j - radius, 0) + 1
        return total
    raise ValueError(f"unknown strategy tag: {strategy}")


@dataclass
class ReplayOracle:
    """Brute-force sufficiency check for a recovery plan.

    Replays the plan's tasks in dependency order on the 1D stencil graph,
    starting from the coordinated checkpoint state, and tracks which
    replayed partitions are *exact*.  An input that is neither checkpoint
    data nor an already-replayed plan task is treated as a stale frozen
    value, tainting the result; taint spreads one partition per iteration
    exactly like real data would.  The plan is sufficient iff the failed
    partition's state at the rejoin iteration is rebuilt and untainted.
    """

    n: int
    last_ckpt_iter: int
    tainted: set[TaskId] = field(default_factory=set)
    replayed: set[TaskId] = field(default_factory=set)

    def _input_status(self, tid: TaskId, log_replay: bool) -> str:
        # "exact", "frozen" (stale but present), or input from checkpoint
        if tid.iteration <= self.last_ckpt_iter:
            return "exact"
        if log_replay:
            return "exact"  # message logs hold the true values
        if tid in self.replayed:
            return "tainted" if tid in self.tainted else "exact"
        return "frozen"

    def replay(self, plan: RecoveryPlan, failed: int, log_replay: bool = False) -> bool:
        for tid in plan.ordered_recompute():
            exact = True
            for p in (tid.process - 1, tid.process, tid.process + 1):
                if not 0 <= p < self.n:
                    continue
                status = self._input_status(TaskId(p, tid.iteration - 1), log_replay)
                if status != "exact":
                    exact = False
            self.replayed.add(tid)
            if not exact:
                self.tainted.add(tid)
        target = TaskId(failed, plan.rejoin_iteration - 1)
        if target.iteration <= self.last_ckpt_iter:
            return True  # checkpoint reload alone restores the partition
        return target in self.replayed and target not in self.tainted


def plan_is_sufficient(plan: RecoveryPlan, n: int, failed: int, last_ckpt_iter: int) -> bool:
    """True iff replaying the plan rebuilds the lost partition exactly."""
    oracle = ReplayOracle(n=n, last_ckpt_iter=last_ckpt_iter)
    return oracle.replay(plan, failed, log_replay=(plan.strategy == "log"))
