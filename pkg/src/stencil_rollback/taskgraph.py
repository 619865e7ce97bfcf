"""Unrolled data-flow graph of a 1D stencil execution.

One task is one iteration of one process.  Edges connect a task to the
tasks of its stencil neighbourhood at the previous iteration, which is the
full inter-process data flow of a radius-1 (3-point) stencil.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

from .topology import ProcessTopology, TopologyError


class TaskId(NamedTuple):
    process: int
    iteration: int


class TaskState(enum.Enum):
    PENDING = "pending"
    RUNNING = "running"
    DONE = "done"
    DISCARDED = "discarded"


@dataclass
class TaskNode:
    """One (process, iteration) unit of work.

    ``generation`` counts completed executions of the logical task;
    ``generation - 1`` is therefore its recompute count.
    """

    id: TaskId
    flops: float
    inputs: frozenset[TaskId]
    state: TaskState = TaskState.PENDING
    generation: int = 0


@dataclass
class TaskGraph:
    topology: ProcessTopology
    iterations: int
    checkpoint_interval: int
    flops_per_task: float
    nodes: dict[TaskId, TaskNode] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.topology.n

    def node(self, process: int, iteration: int) -> TaskNode:
        return self.nodes[TaskId(process, iteration)]

    def stencil_inputs(self, process: int, iteration: int) -> frozenset[TaskId]:
        """Inputs of a task: the 3-point neighbourhood one iteration back."""
        if iteration == 0:
            return frozenset()
        n = self.n
        return frozenset(
            TaskId(p, iteration - 1)
            for p in (process - 1, process, process + 1)
            if 0 <= p < n
        )


def build_task_graph(
    topology: ProcessTopology,
    iterations: int,
    checkpoint_interval: int,
    flops_per_task: float,
) -> TaskGraph:
    """Unroll the stencil data-flow graph over ``iterations`` steps.

    Only 1D lines are supported here; 2D decompositions are handled at the
    application level by the Jacobi verifier, not by the task simulator.
    """
    if not topology.is_line:
        raise TopologyError("task graphs support 1D line topologies only")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if checkpoint_interval < 1:
        raise ValueError("checkpoint_interval must be >= 1")
    if flops_per_task < 0:
        raise ValueError("flops_per_task must be >= 0")

    graph = TaskGraph(topology, iterations, checkpoint_interval, flops_per_task)
    n = topology.n
    for i in range(iterations):
        for j in range(n):
            tid = TaskId(j, i)
            graph.nodes[tid] = TaskNode(
                id=tid, flops=flops_per_task, inputs=graph.stencil_inputs(j, i)
            )
    return graph
