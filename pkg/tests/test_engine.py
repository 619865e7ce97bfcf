import math

import pytest

from stencil_rollback.engine import (
    InvalidPlanError,
    Simulation,
    StateTimeline,
    TimelineError,
    failure_free_makespan,
    integrate_timeline,
    run_simulation,
)
from stencil_rollback.failures import FailureEvent, FailureTrace, generate_trace
from stencil_rollback.platform import HostState, PlatformModel, PowerModel
from stencil_rollback.strategies import STRATEGY_TAGS, RecoveryPlan
from stencil_rollback.taskgraph import TaskId, TaskState, build_task_graph
from stencil_rollback.topology import ProcessTopology

PLAT = PlatformModel()
XFER = PLAT.seconds_per_transfer()


def scripted_trace(*events):
    return FailureTrace(seed=0, node_mtbf=1.0, horizon=1e9, events=tuple(events))


def nine_process_graph(iters=12, c_it=4):
    return build_task_graph(ProcessTopology.line(9), iters, c_it, 200e9)


def run(graph, trace, strategy, **kw):
    return run_simulation(graph, PLAT, trace, strategy, **kw)


# ---------------------------------------------------------------- no failures

def test_failure_free_run_matches_closed_form():
    graph = nine_process_graph()
    metrics, timeline, sim = run(graph, scripted_trace(), "dfr-min")
    assert metrics.recomputed_tasks == 0
    assert metrics.failures_fired == 0
    assert metrics.makespan == pytest.approx(failure_free_makespan(PLAT, 9, 12, 4))
    states = {s for host in timeline.intervals for _, _, s in host}
    assert states <= {HostState.COMPUTING, HostState.COMMUNICATING}


def test_failure_free_single_process():
    graph = build_task_graph(ProcessTopology.line(1), 5, 2, 200e9)
    metrics, _, _ = run(graph, scripted_trace(), "global")
    assert metrics.makespan == pytest.approx(50.0)


# ------------------------------------------------------------ scripted failure

@pytest.mark.parametrize(
    "strategy,expected_recompute,expected_participants",
    [
        ("global", 18, tuple(range(9))),
        ("dfr-rect", 10, (2, 3, 4, 5, 6)),
        ("dfr-min", 4, (3, 4, 5)),
        ("log", 2, (4,)),
    ],
)
def test_scripted_failure_recompute_counts(strategy, expected_recompute, expected_participants):
    # process 4 dies while executing iteration 7; last commit is iteration 4
    graph = nine_process_graph()
    metrics, timeline, sim = run(graph, scripted_trace(FailureEvent(71.0, 4)), strategy)
    assert metrics.failures_fired == 1
    assert metrics.recomputed_tasks == expected_recompute
    [window] = sim.windows
    assert window.failed_iter == 7
    assert window.ckpt_iter == 4
    assert window.participants == expected_participants
    # every logical task ends Done, total executions = tasks + recompute
    assert all(s is TaskState.DONE for row in sim.state for s in row)
    total_exec = sum(sum(row) for row in sim.gen)
    assert total_exec == 9 * 12 + expected_recompute


def test_checkpoint_commits_and_timing():
    graph = nine_process_graph()
    _, _, sim = run(graph, scripted_trace(), "global")
    commits = [e for e in sim.events_log if e["kind"] == "checkpoint_commit"]
    # saves after iterations 4 and 8 for all nine processes
    assert sorted({e["iteration"] for e in commits}) == [4, 8]
    assert len(commits) == 18
    t4 = [e["t"] for e in commits if e["iteration"] == 4][0]
    # task 4 completes at 50 + 4 ghost transfers, then one checkpoint transfer
    assert t4 == pytest.approx(50 + 5 * XFER)


def test_failure_during_checkpoint_transfer_keeps_previous_commit():
    # interrupting the first save leaves the process with no committed
    # checkpoint at all, so recovery restarts from the initial state
    graph = nine_process_graph()
    t_fail = 50 + 4 * XFER + 0.5 * XFER
    metrics, _, sim = run(graph, scripted_trace(FailureEvent(t_fail, 4)), "dfr-min")
    [window] = sim.windows
    assert window.ckpt_iter == -1
    assert window.failed_iter == 5
    assert metrics.recomputed_tasks == 25  # clipped cone for d = 6 at centre


def test_failure_right_after_commit_is_reload_only():
    graph = nine_process_graph()
    t_fail = 50 + 5 * XFER + 1e-4  # just after the iteration-4 commit
    metrics, _, sim = run(graph, scripted_trace(FailureEvent(t_fail, 4)), "dfr-min")
    [window] = sim.windows
    assert window.ckpt_iter == 4
    assert window.failed_iter == 5
    assert metrics.recomputed_tasks == 0
    assert window.end - window.start == pytest.approx(XFER, rel=1e-6)


def test_failures_during_recovery_are_deferred():
    graph = nine_process_graph()
    trace = scripted_trace(FailureEvent(71.0, 4), FailureEvent(72.0, 2))
    metrics, _, sim = run(graph, trace, "global")
    assert metrics.failures_fired == 2
    w1, w2 = sim.windows
    assert w2.start == pytest.approx(w1.end)  # fired the instant recovery ended
    deferred = [e for e in sim.events_log if e["kind"] == "failure_deferred"]
    assert len(deferred) == 1
    # windows never overlap
    assert w1.end <= w2.start


def test_failure_of_completed_process_rebuilds_lost_results():
    # the last process finishes all its work, then dies; neighbours that
    # still need its ghost data force a recovery of the lost partition
    graph = build_task_graph(ProcessTopology.line(3), 6, 3, 200e9)
    t_fail = 60 + 5 * XFER + 2 * XFER + 0.5  # shortly after process completion
    metrics, _, sim = run(graph, scripted_trace(FailureEvent(t_fail, 2)), "dfr-min")
    assert metrics.failures_fired in (0, 1)  # moot only if the whole run finished
    assert all(s is TaskState.DONE for row in sim.state for s in row)


# ----------------------------------------------------------------- energy

def test_integrate_timeline_examples():
    power = PowerModel()
    tl = StateTimeline(intervals=[[(0.0, 100.0, HostState.COMPUTING)]], makespan=100.0)
    per_host, total = integrate_timeline(tl, power)
    assert total == pytest.approx(12_500.0)

    tl = StateTimeline(
        intervals=[[(0.0, 80.0, HostState.COMPUTING), (80.0, 100.0, HostState.IDLE_SCALED)]],
        makespan=100.0,
    )
    _, total = integrate_timeline(tl, power)
    assert total == pytest.approx(10_000.0 + 2_200.0)


def test_integrate_timeline_rejects_gaps():
    tl = StateTimeline(
        intervals=[[(0.0, 40.0, HostState.COMPUTING), (50.0, 100.0, HostState.COMPUTING)]],
        makespan=100.0,
    )
    with pytest.raises(TimelineError):
        integrate_timeline(tl, PowerModel())


def test_idle_power_during_recovery_window():
    graph = nine_process_graph()
    trace = scripted_trace(FailureEvent(71.0, 4))
    _, tl_on, sim_on = run(graph, trace, "dfr-min", frequency_scaling=True)
    _, tl_off, _ = run(graph, trace, "dfr-min", frequency_scaling=False)
    [window] = sim_on.windows

    def idle_states_inside_window(tl):
        out = []
        for host in tl.intervals:
            for start, end, state in host:
                if state in (HostState.IDLE_SCALED, HostState.IDLE_UNSCALED):
                    if start < window.end and end > window.start:
                        out.append(state)
        return out

    inside_on = idle_states_inside_window(tl_on)
    assert inside_on and all(s is HostState.IDLE_SCALED for s in inside_on)
    inside_off = idle_states_inside_window(tl_off)
    assert inside_off and all(s is HostState.IDLE_UNSCALED for s in inside_off)
    # hosts also starve after the window while the replacement catches up
    post = [
        s
        for host in tl_on.intervals
        for start, end, s in host
        if start >= window.end and s in (HostState.IDLE_SCALED, HostState.IDLE_UNSCALED)
    ]
    assert post and all(s is HostState.IDLE_UNSCALED for s in post)


def test_scaling_changes_energy_not_makespan():
    graph = nine_process_graph()
    trace = scripted_trace(FailureEvent(71.0, 4))
    m_on, _, _ = run(graph, trace, "dfr-min", frequency_scaling=True)
    m_off, _, _ = run(graph, trace, "dfr-min", frequency_scaling=False)
    assert m_on.makespan == m_off.makespan  # bit-exact
    assert m_on.total_energy < m_off.total_energy


# ------------------------------------------------------------- invariants

def test_determinism_bitwise():
    graph = build_task_graph(ProcessTopology.line(16), 40, 6, 200e9)
    trace = generate_trace(seed=5, n=16, node_mtbf=16 * 400 / 2.0, horizon=400.0)
    a_metrics, a_tl, _ = run(graph, trace, "dfr-min")
    b_metrics, b_tl, _ = run(graph, trace, "dfr-min")
    assert a_metrics == b_metrics
    assert a_tl == b_tl


@pytest.mark.parametrize("seed", range(4))
def test_strategy_ordering_on_identical_traces(seed):
    n, iters = 24, 60
    graph = build_task_graph(ProcessTopology.line(n), iters, 6, 200e9)
    horizon = failure_free_makespan(PLAT, n, iters, 6)
    trace = generate_trace(seed=seed, n=n, node_mtbf=n * horizon / 2.5, horizon=horizon)
    counts = {}
    for strategy in STRATEGY_TAGS:
        metrics, _, _ = run(graph, trace, strategy)
        counts[strategy] = metrics.recomputed_tasks
    assert counts["global"] >= counts["dfr-rect"] >= counts["dfr-min"] >= counts["log"]


def test_reload_traffic_switch():
    graph = nine_process_graph()
    trace = scripted_trace(FailureEvent(71.0, 4))
    m_with, _, sim_with = run(graph, trace, "dfr-min", model_reload_traffic=True)
    m_without, _, sim_without = run(graph, trace, "dfr-min", model_reload_traffic=False)
    assert sim_with.windows[0].end - sim_with.windows[0].start > (
        sim_without.windows[0].end - sim_without.windows[0].start
    )
    assert m_with.recomputed_tasks == m_without.recomputed_tasks


def test_paper_scale_run():
    # 100 processes x 1000 iterations of 10 s tasks: ~1e4 s simulated time,
    # a couple of failures expected at 100 h per-node MTBF
    n, iters = 100, 1000
    graph = build_task_graph(ProcessTopology.line(n), iters, 6, 200e9)
    t_ff = failure_free_makespan(PLAT, n, iters, 6)
    assert t_ff == pytest.approx(1e4, rel=1e-3)
    trace = generate_trace(seed=1, n=n, node_mtbf=100 * 3600.0, horizon=t_ff)
    metrics, _, _ = run(graph, trace, "global")
    assert metrics.failures_fired == len(trace.events) > 0
    assert metrics.recomputed_tasks > 0
    assert metrics.makespan >= t_ff


def test_invalid_plan_aborts():
    def broken_planner(j, d, topology, c):
        return RecoveryPlan(
            recompute=frozenset({TaskId(99, c + 1)}),
            participants=frozenset({j}),
            idle=frozenset(),
            rejoin_iteration=c + d,
            strategy="custom",
        )

    graph = nine_process_graph()
    sim = Simulation(graph, PLAT, scripted_trace(FailureEvent(71.0, 4)), broken_planner)
    with pytest.raises(InvalidPlanError):
        sim.run()
