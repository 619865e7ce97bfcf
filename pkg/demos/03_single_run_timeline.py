"""Anatomy of one simulated failure: recovery window, host states, energy.

Process 4 of 9 dies mid-iteration.  With data-flow rollback only the cone
around the failure recomputes; distant hosts run ahead until starved and
then idle at reduced power while frequency scaling is active.
"""

from stencil_rollback import build_task_graph, run_simulation
from stencil_rollback.failures import FailureEvent, FailureTrace
from stencil_rollback.platform import HostState, PlatformModel, power_draw
from stencil_rollback.topology import ProcessTopology

platform = PlatformModel()
graph = build_task_graph(ProcessTopology.line(9), 12, 4, 200e9)
trace = FailureTrace(seed=0, node_mtbf=1.0, horizon=1e9, events=(FailureEvent(71.0, 4),))

for scaling in (True, False):
    metrics, timeline, sim = run_simulation(
        graph, platform, trace, "dfr-min", frequency_scaling=scaling
    )
    window = sim.windows[0]
    label = "with" if scaling else "without"
    print(f"--- dfr-min {label} frequency scaling ---")
    print(f"recovery window [{window.start:.2f}, {window.end:.2f}] s, "
          f"participants {list(window.participants)}, {window.recompute_count} recomputed tasks")
    print(f"makespan {metrics.makespan:.2f} s, total energy {metrics.total_energy/1e3:.2f} kJ")
    idle = {}
    for host, intervals in enumerate(timeline.intervals):
        for start, end, state in intervals:
            if state in (HostState.IDLE_SCALED, HostState.IDLE_UNSCALED):
                idle.setdefault(host, 0.0)
                idle[host] += end - start
    watts = {s: power_draw(s, platform.power)
             for s in (HostState.IDLE_SCALED, HostState.IDLE_UNSCALED)}
    print(f"idle seconds per host: { {h: round(t, 2) for h, t in sorted(idle.items())} }")
    print(f"idle power: scaled {watts[HostState.IDLE_SCALED]} W, "
          f"unscaled {watts[HostState.IDLE_UNSCALED]} W\n")
