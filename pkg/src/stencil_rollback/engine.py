"""Deterministic discrete-event executor for stencil task graphs.

Execution model
---------------
One process per host, one activity at a time per host.  A forefront task
(j, i) becomes runnable when the results of its stencil inputs at
iteration i-1 are committed; its start additionally waits for neighbour
data to cross the star network.  Every ``checkpoint_interval`` iterations
a process synchronously ships its subdomain to its checkpoint buddy; the
checkpoint commits only when that transfer completes.

On an admitted failure the failed host's in-flight work is lost, the
replacement appears instantly on the same host, and the configured
rollback strategy plans which (process, iteration) tasks to re-execute.
Survivors finish the activity they are in (failure detection happens at
the next communication call) and then serve their share of the plan
before resuming forefront work.  Hosts outside the plan keep executing
their own forefront tasks until data dependencies starve them.  Failures
arriving during a recovery are deferred to fire when it completes, so no
two recoveries ever overlap.

Time is bitwise deterministic: the event queue orders ties by
(kind rank, host, sequence) and nothing depends on iteration order of
hash-based containers.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .failures import FailureEvent, FailureTrace, admit_failure
from .platform import HostState, PlatformModel, PowerModel, power_draw
from .strategies import RecoveryPlan, make_plan
from .taskgraph import TaskGraph, TaskId, TaskState
from .topology import buddy_map


class InvalidPlanError(RuntimeError):
    """A rollback strategy produced an inconsistent recovery plan."""


class TimelineError(ValueError):
    """A host timeline has gaps or overlaps."""


# activity kinds
TASK = "task"
RECOVER = "recover"
CKPT_SAVE = "ckpt_save"
CKPT_RELOAD = "ckpt_reload"

# event ranks for same-time ordering: completions commit before a recovery
# closes, and a recovery closes before a deferred failure fires
RANK_ACTIVITY = 0
RANK_RECOVERY_DONE = 1
RANK_FAILURE = 2


@dataclass
class Activity:
    kind: str
    process: int
    iteration: int  # -1 for checkpoint reloads
    start: float
    end: float
    data_ready: float  # when the last producer finished (gap classification)


@dataclass(frozen=True)
class RecoveryWindow:
    start: float
    end: float
    failed: int
    failed_iter: int
    ckpt_iter: int
    strategy: str
    participants: tuple[int, ...]
    recompute_count: int


@dataclass
class CheckpointStore:
    """Committed checkpoint iteration per process plus the buddy mapping."""

    store_at: list[int]  # buddy hosting process p's checkpoint
    last_commit: list[int]  # committed iteration per process, -1 = initial state
    size_bytes: float


@dataclass
class StateTimeline:
    """Per-host (start, end, state) intervals partitioning [0, makespan]."""

    intervals: list[list[tuple[float, float, HostState]]]
    makespan: float


@dataclass
class RunMetrics:
    strategy: str
    seed: int
    n: int
    iterations: int
    makespan: float
    recomputed_tasks: int
    failures_fired: int
    per_host_energy: list[float]
    total_energy: float
    projected_savings: float = 0.0


def integrate_timeline(timeline: StateTimeline, power: PowerModel) -> tuple[list[float], float]:
    """Energy per host and in total: sum of power_draw(state) * duration.

    Raises TimelineError if any host's intervals do not exactly partition
    [0, makespan].
    """
    per_host = []
    for host, intervals in enumerate(timeline.intervals):
        cursor = 0.0
        joules = 0.0
        for start, end, state in intervals:
            if abs(start - cursor) > 1e-9 or end < start:
                raise TimelineError(f"host {host}: gap or overlap at t={start}")
            joules += power_draw(state, power) * (end - start)
            cursor = end
        if abs(cursor - timeline.makespan) > 1e-9:
            raise TimelineError(f"host {host}: timeline ends at {cursor}, not makespan")
        per_host.append(joules)
    return per_host, sum(per_host)


def failure_free_makespan(platform: PlatformModel, n: int, iterations: int, c_it: int) -> float:
    """Closed-form makespan of a run with no failures (lockstep execution)."""
    task_s = platform.seconds_per_task()
    xfer = platform.seconds_per_transfer()
    if n == 1:
        return iterations * task_s  # no neighbours, self-buddy checkpoints are free
    # checkpoint saves ship the same payload as a ghost exchange and run
    # concurrently with it, so they hide entirely under the ghost latency
    return iterations * task_s + (iterations - 1) * xfer


class Simulation:
    """One deterministic run of a task graph under failures and a strategy.

    ``strategy`` is a tag from ``strategies.STRATEGY_TAGS`` or a callable
    ``(failed, d, topology, last_ckpt_iter) -> RecoveryPlan`` for custom
    planners.
    """

    def __init__(
        self,
        graph: TaskGraph,
        platform: PlatformModel,
        trace: FailureTrace,
        strategy,
        frequency_scaling: bool = True,
        model_reload_traffic: bool = True,
    ):
        self.graph = graph
        self.platform = platform
        self.trace = trace
        self.frequency_scaling = frequency_scaling
        if callable(strategy):
            self.strategy_tag = getattr(strategy, "tag", "custom")
            self._planner = strategy
        else:
            self.strategy_tag = strategy
            self._planner = lambda j, d, topo, c: make_plan(strategy, j, d, topo, c)

        self.n = graph.n
        self.iters = graph.iterations
        self.c_it = graph.checkpoint_interval
        self.task_s = platform.seconds_per_task()
        self.xfer_s = platform.seconds_per_transfer()
        self.reload_s = self.xfer_s if model_reload_traffic else 0.0
        self.model_reload_traffic = model_reload_traffic

        n, iters = self.n, self.iters
        # committed-result time per logical task; None = not available
        self.avail: list[list[float | None]] = [[None] * iters for _ in range(n)]
        self.state = [[TaskState.PENDING] * iters for _ in range(n)]
        self.gen = [[0] * iters for _ in range(n)]
        self.forefront = [0] * n
        self.host_free = [0.0] * n
        self.host_current: list[tuple | None] = [None] * n  # (epoch, Activity)
        self.epoch = [0] * n
        self.pending_save: list[int | None] = [None] * n
        self.ckpt = CheckpointStore(
            store_at=buddy_map(n), last_commit=[-1] * n, size_bytes=platform.payload_bytes
        )
        self.recovery_queue: list[list[int]] = [[] for _ in range(n)]
        self.reload_pending = [False] * n
        self.reload_done: dict[int, float] = {}
        self.rec_done: dict[TaskId, float] = {}
        self.recovery_active = False
        self.recovery_outstanding = 0
        self.window_start = 0.0
        self.current_plan: RecoveryPlan | None = None
        self.current_failed = -1
        self.current_participants: frozenset[int] = frozenset()
        self.windows_ckpt_iter = -1
        self.plan_set: frozenset[TaskId] = frozenset()
        self.deferred: list[FailureEvent] = []
        self.windows: list[RecoveryWindow] = []
        self.failures_fired = 0
        self.activity_log: list[list[Activity]] = [[] for _ in range(n)]
        self.events_log: list[dict] = []
        self.completed_tasks = 0  # distinct logical tasks at generation >= 1

        self._heap: list[tuple] = []
        self._seq = 0
        self._outstanding = 0
        self._now = 0.0
        self._makespan = 0.0

    # ------------------------------------------------------------------ events

    def _push(self, time: float, rank: int, host: int, payload) -> None:
        self._seq += 1
        heapq.heappush(self._heap, (time, rank, host, self._seq, payload))

    def _schedule(self, host: int, kind: str, process: int, iteration: int,
                  ready: float, duration: float, data_ready: float) -> None:
        start = max(ready, self._now)
        act = Activity(kind, process, iteration, start, start + duration, data_ready)
        self.host_current[host] = (self.epoch[host], act)
        self.host_free[host] = act.end
        self._outstanding += 1
        self._push(act.end, RANK_ACTIVITY, host, act)

    # ---------------------------------------------------------------- dispatch

    def _recovery_ready(self, p: int, m: int) -> float | None:
        """Earliest data-ready instant of recovery task (p, m), or None."""
        plan = self.current_plan
        base_iter = self.windows_ckpt_iter
        if plan.strategy == "log":
            # ghost inputs replayed from logs: only the own chain matters
            if m == base_iter + 1:
                dep = self.reload_done.get(p)
                return dep
            return self.rec_done.get(TaskId(p, m - 1))
        ready = 0.0
        for q in (p - 1, p, p + 1):
            if not 0 <= q < self.n:
                continue
            delay = 0.0 if q == p else self.xfer_s
            if m == base_iter + 1:
                if q in self.current_participants:
                    dep = self.reload_done.get(q)
                    if dep is None:
                        return None
                    ready = max(ready, dep + delay)
                # out-of-group neighbours: frozen ghosts from p's own checkpoint
            else:
                tid = TaskId(q, m - 1)
                if tid in self.plan_set:
                    dep = self.rec_done.get(tid)
                    if dep is None:
                        return None
                    ready = max(ready, dep + delay)
        own = self.reload_done.get(p)
        if own is None:
            return None
        return max(ready, own)

    def _dispatch(self, p: int) -> None:
        if self.host_current[p] is not None:
            return
        if self.reload_pending[p]:
            self.reload_pending[p] = False
            self._schedule(p, CKPT_RELOAD, p, -1, self._now, self.reload_s, self.window_start)
            return
        if self.recovery_queue[p]:
            m = self.recovery_queue[p][0]
            ready = self._recovery_ready(p, m)
            if ready is None:
                return
            self.recovery_queue[p].pop(0)
            self._schedule(p, RECOVER, p, m, ready, self.task_s, ready)
            return
        if self.pending_save[p] is not None:
            duration = 0.0 if self.n == 1 else self.xfer_s
            self._schedule(p, CKPT_SAVE, p, self.pending_save[p], self._now, duration, self._now)
            return
        # forefront = first iteration without a committed result; a plan may
        # have duplicate-executed a lagging survivor's task (state DONE) yet
        # its real state only advances when the forefront execution commits
        i = self.forefront[p]
        while i < self.iters and self.avail[p][i] is not None:
            i += 1
        self.forefront[p] = i
        if i >= self.iters:
            return
        ready = 0.0
        data_ready = 0.0
        if i > 0:
            for q in (p - 1, p, p + 1):
                if not 0 <= q < self.n:
                    continue
                t_in = self.avail[q][i - 1]
                if t_in is None:
                    return  # producer result not committed yet
                data_ready = max(data_ready, t_in)
                ready = max(ready, t_in + (0.0 if q == p else self.xfer_s))
        assert ready >= data_ready
        self.state[p][i] = TaskState.RUNNING
        self._schedule(p, TASK, p, i, ready, self.task_s, data_ready)

    def _dispatch_neighbourhood(self, p: int) -> None:
        for q in (p - 1, p, p + 1):
            if 0 <= q < self.n:
                self._dispatch(q)

    # ------------------------------------------------------------- completions

    def _complete_activity(self, host: int, act: Activity) -> None:
        self.activity_log[host].append(act)
        self.host_current[host] = None
        p, i = act.process, act.iteration
        if act.kind == TASK:
            if self.gen[p][i] == 0:
                self.completed_tasks += 1
            self.gen[p][i] += 1
            self.state[p][i] = TaskState.DONE
            self.avail[p][i] = act.end
            self.forefront[p] = max(self.forefront[p], i + 1)
            if 0 < i < self.iters - 1 and i % self.c_it == 0:
                self.pending_save[p] = i
            self._dispatch_neighbourhood(p)
        elif act.kind == CKPT_SAVE:
            self.ckpt.last_commit[p] = i
            self.pending_save[p] = None
            self.events_log.append(
                {"t": act.end, "kind": "checkpoint_commit", "process": p, "iteration": i}
            )
            self._dispatch(p)
        elif act.kind == CKPT_RELOAD:
            self.reload_done[p] = act.end
            self.recovery_outstanding -= 1
            self._maybe_finish_recovery(act.end)
            self._dispatch_neighbourhood(p)
        elif act.kind == RECOVER:
            if self.gen[p][i] == 0:
                self.completed_tasks += 1
            self.gen[p][i] += 1
            self.state[p][i] = TaskState.DONE
            self.rec_done[TaskId(p, i)] = act.end
            if p == self.current_failed or self.current_plan.strategy == "global":
                self.avail[p][i] = act.end
            self.recovery_outstanding -= 1
            self._maybe_finish_recovery(act.end)
            self._dispatch_neighbourhood(p)

    def _maybe_finish_recovery(self, t: float) -> None:
        if self.recovery_active and self.recovery_outstanding == 0:
            self._push(t, RANK_RECOVERY_DONE, 0, None)

    def _finish_recovery(self, t: float) -> None:
        plan = self.current_plan
        self.windows.append(
            RecoveryWindow(
                start=self.window_start,
                end=t,
                failed=self.current_failed,
                failed_iter=plan.rejoin_iteration,
                ckpt_iter=self.windows_ckpt_iter,
                strategy=plan.strategy,
                participants=tuple(sorted(plan.participants)),
                recompute_count=len(plan.recompute),
            )
        )
        self.events_log.append(
            {"t": t, "kind": "recovery_complete", "failed": self.current_failed,
             "window_start": self.window_start}
        )
        self.recovery_active = False
        self.current_plan = None
        self.current_failed = -1
        self.plan_set = frozenset()
        self.rec_done.clear()
        self.reload_done.clear()
        for p in range(self.n):
            self._dispatch(p)
        if self.deferred:
            ev = self.deferred.pop(0)
            self._push(t, RANK_FAILURE, ev.host, ev)

    # ---------------------------------------------------------------- failures

    def _abort_host(self, f: int, t: float) -> None:
        current = self.host_current[f]
        if current is None:
            return
        _, act = current
        if act.start < t:  # log the energy actually burned before the crash
            self.activity_log[f].append(
                Activity(act.kind, act.process, act.iteration, act.start, t, act.data_ready)
            )
        if act.kind == TASK:
            self.state[act.process][act.iteration] = TaskState.PENDING
        elif act.kind == CKPT_SAVE:
            # interrupted save is abandoned; the next interval checkpoints anew
            self.pending_save[f] = None
        else:  # pragma: no cover - no recovery can be active here
            raise AssertionError("failed host was executing recovery work")
        self.epoch[f] += 1
        self.host_current[f] = None
        self.host_free[f] = t
        self._outstanding -= 1

    def _validate_plan(self, plan: RecoveryPlan, c: int, failed_iter: int) -> None:
        for tid in plan.recompute:
            if not (0 <= tid.process < self.n):
                raise InvalidPlanError(f"plan recomputes unknown process {tid.process}")
            if not (c < tid.iteration < failed_iter):
                raise InvalidPlanError(
                    f"plan task {tid} outside recompute range ({c}, {failed_iter})"
                )
        for p in plan.participants:
            if not (0 <= p < self.n):
                raise InvalidPlanError(f"participant {p} out of range")
        if plan.participants & plan.idle:
            raise InvalidPlanError("participants and idle sets overlap")
        if plan.rejoin_iteration != failed_iter:
            raise InvalidPlanError("plan rejoin iteration disagrees with failure point")

    def _handle_failure(self, ev: FailureEvent, t: float) -> None:
        if admit_failure(ev, self.recovery_active) == "defer":
            self.deferred.append(ev)
            self.events_log.append({"t": t, "kind": "failure_deferred", "host": ev.host})
            return
        f = ev.host
        self.failures_fired += 1
        self._abort_host(f, t)
        F = self.forefront[f]
        while F < self.iters and self.avail[f][F] is not None:
            F += 1
        self.forefront[f] = F
        c = self.ckpt.last_commit[f]
        d = F - c
        assert d >= 1, "a committed checkpoint implies the task completed"

        plan = self._planner(f, d, self.graph.topology, c)
        self._validate_plan(plan, c, F)
        self.events_log.append(
            {"t": t, "kind": "failure_fired", "host": f, "failed_iter": F,
             "ckpt_iter": c, "d": d, "strategy": plan.strategy,
             "participants": sorted(plan.participants), "recompute": len(plan.recompute)}
        )

        # the failed process's uncheckpointed results are gone until rebuilt
        for i in range(c + 1, min(F, self.iters)):
            self.avail[f][i] = None
        for tid in plan.recompute:
            if self.state[tid.process][tid.iteration] is TaskState.DONE:
                self.state[tid.process][tid.iteration] = TaskState.DISCARDED
            if plan.strategy == "global":
                self.avail[tid.process][tid.iteration] = None

        for tid in plan.ordered_recompute():
            self.recovery_queue[tid.process].append(tid.iteration)
        for p in plan.participants:
            self.reload_pending[p] = True
        self.recovery_active = True
        self.recovery_outstanding = len(plan.recompute) + len(plan.participants)
        self.window_start = t
        self.current_plan = plan
        self.current_failed = f
        self.plan_set = plan.recompute
        self.current_participants = plan.participants
        self.windows_ckpt_iter = c
        for p in sorted(plan.participants):
            self._dispatch(p)

    # --------------------------------------------------------------------- run

    def _all_done(self) -> bool:
        return (
            self.completed_tasks == self.n * self.iters
            and not self.recovery_active
            and self._outstanding == 0
            and not self.deferred
        )

    def run(self) -> tuple[RunMetrics, StateTimeline]:
        for p in range(self.n):
            self._dispatch(p)
        for ev in self.trace.events:
            self._push(ev.time, RANK_FAILURE, ev.host, ev)

        while self._heap:
            time, rank, host, _seq, payload = heapq.heappop(self._heap)
            self._now = time
            if rank == RANK_ACTIVITY:
                current = self.host_current[host]
                if current is None or current[1] is not payload:
                    continue  # aborted by a failure
                self._outstanding -= 1
                self._makespan = max(self._makespan, time)
                self._complete_activity(host, payload)
            elif rank == RANK_RECOVERY_DONE:
                if self.recovery_active and self.recovery_outstanding == 0:
                    self._finish_recovery(time)
            else:
                if self._all_done():
                    continue  # run already finished; late failures are moot
                self._handle_failure(payload, time)
            if self._all_done():
                break

        assert self.completed_tasks == self.n * self.iters, "tasks left incomplete"
        recomputed = sum(self.gen[p][i] - 1 for p in range(self.n) for i in range(self.iters))
        timeline = self._build_timeline()
        per_host, total = integrate_timeline(timeline, self.platform.power)
        metrics = RunMetrics(
            strategy=self.strategy_tag,
            seed=self.trace.seed,
            n=self.n,
            iterations=self.iters,
            makespan=self._makespan,
            recomputed_tasks=recomputed,
            failures_fired=self.failures_fired,
            per_host_energy=per_host,
            total_energy=total,
        )
        return metrics, timeline

    # ---------------------------------------------------------------- timeline

    def _idle_state(self, lo: float, hi: float) -> list[tuple[float, float, HostState]]:
        """Split a starved interval on recovery-window boundaries.

        Inside a recovery window starving hosts are frequency-scaled (when
        enabled); outside, the post-recovery barrier has already restored
        the nominal frequency.
        """
        out = []
        in_state = HostState.IDLE_SCALED if self.frequency_scaling else HostState.IDLE_UNSCALED
        cursor = lo
        for w in self.windows:
            if w.end <= cursor or w.start >= hi:
                continue
            if w.start > cursor:
                out.append((cursor, w.start, HostState.IDLE_UNSCALED))
                cursor = w.start
            stop = min(w.end, hi)
            out.append((cursor, stop, in_state))
            cursor = stop
        if cursor < hi:
            out.append((cursor, hi, HostState.IDLE_UNSCALED))
        return out

    def _classify_gap(self, lo: float, hi: float, data_ready: float):
        out = []
        split = min(max(data_ready, lo), hi)
        if split > lo:
            out.extend(self._idle_state(lo, split))
        if hi > split:
            out.append((split, hi, HostState.COMMUNICATING))
        return out

    def _build_timeline(self) -> StateTimeline:
        makespan = self._makespan
        intervals: list[list[tuple[float, float, HostState]]] = []
        busy = {
            TASK: HostState.COMPUTING,
            RECOVER: HostState.COMPUTING,
            CKPT_SAVE: HostState.COMMUNICATING,
            CKPT_RELOAD: HostState.COMMUNICATING,
        }
        for p in range(self.n):
            rows: list[tuple[float, float, HostState]] = []
            cursor = 0.0
            for act in self.activity_log[p]:
                if act.start > cursor:
                    rows.extend(self._classify_gap(cursor, act.start, act.data_ready))
                if act.end > act.start:
                    rows.append((act.start, act.end, busy[act.kind]))
                cursor = max(cursor, act.end)
            if cursor < makespan:
                rows.extend(self._idle_state(cursor, makespan))
            intervals.append(rows)
        return StateTimeline(intervals=intervals, makespan=makespan)


def run_simulation(
    graph: TaskGraph,
    platform: PlatformModel,
    trace: FailureTrace,
    strategy,
    frequency_scaling: bool = True,
    model_reload_traffic: bool = True,
) -> tuple[RunMetrics, StateTimeline, Simulation]:
    """Convenience wrapper returning metrics, timeline and the engine state."""
    sim = Simulation(
        graph, platform, trace, strategy,
        frequency_scaling=frequency_scaling,
        model_reload_traffic=model_reload_traffic,
    )
    metrics, timeline = sim.run()
    return metrics, timeline, sim
