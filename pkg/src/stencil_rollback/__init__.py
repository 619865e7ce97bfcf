"""Rollback-recovery simulation and energy modelling for stencil codes."""

from .energy import (
    ModelParams,
    c_e,
    e_jacobi,
    p_active,
    p_idle,
    p_neigh,
    project_savings,
    savings_rate,
)
from .engine import (
    RunMetrics,
    Simulation,
    StateTimeline,
    failure_free_makespan,
    integrate_timeline,
    run_simulation,
)
from .failures import FailureEvent, FailureTrace, generate_trace, sample_exponential
from .platform import HostSpec, HostState, LinkSpec, PlatformModel, PowerModel
from .strategies import (
    RecoveryPlan,
    make_plan,
    plan_dfr,
    plan_global,
    plan_logbased,
    recompute_count_closed_form,
)
from .taskgraph import TaskGraph, TaskId, TaskNode, build_task_graph
from .topology import ProcessTopology, neighbours, partition_distance

__version__ = "0.1.0"
