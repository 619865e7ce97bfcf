"""Process topologies for domain-decomposed stencil runs.

Two virtual topologies are supported: a non-periodic 1D line of processes
(used by the simulator) and a non-periodic 2D Cartesian grid (used by the
Jacobi verifier).  Ranks on the 2D grid are laid out column-major, so that
checkpoint buddies (2k, 2k+1) share a grid column when there are two rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class TopologyError(ValueError):
    """Raised for invalid ranks or unsupported topology kinds."""


@dataclass(frozen=True)
class ProcessTopology:
    """A line or Cartesian grid of processes.

    ``extents`` holds the process count per dimension: one entry for a 1D
    line, two entries ``(rows, cols)`` for a 2D grid.  Boundaries are
    non-periodic in every dimension, so edge processes have fewer
    neighbours than interior ones.
    """

    extents: tuple[int, ...]

    def __post_init__(self):
        if len(self.extents) not in (1, 2):
            raise TopologyError(f"only 1D/2D topologies supported, got {self.extents}")
        if any(e < 1 for e in self.extents):
            raise TopologyError(f"extents must be >= 1, got {self.extents}")

    @classmethod
    def line(cls, n: int) -> "ProcessTopology":
        return cls((n,))

    @classmethod
    def grid(cls, rows: int, cols: int) -> "ProcessTopology":
        return cls((rows, cols))

    @property
    def kind(self) -> str:
        return "line1d" if len(self.extents) == 1 else "cartesian2d"

    @property
    def is_line(self) -> bool:
        return len(self.extents) == 1

    @property
    def n(self) -> int:
        return math.prod(self.extents)

    def check_rank(self, r: int) -> None:
        if not 0 <= r < self.n:
            raise TopologyError(f"rank {r} out of range [0, {self.n})")

    def coords(self, r: int) -> tuple[int, ...]:
        """Map a rank to its grid coordinates (column-major for 2D)."""
        self.check_rank(r)
        if self.is_line:
            return (r,)
        rows = self.extents[0]
        return (r % rows, r // rows)

    def rank(self, coords: tuple[int, ...]) -> int:
        if self.is_line:
            return coords[0]
        row, col = coords
        return col * self.extents[0] + row


def partition_distance(topology: ProcessTopology, a: int, b: int) -> int:
    """Distance between two ranks in the virtual topology.

    A radius-1 stencil propagates data one step per iteration along each
    axis, so |a - b| on a line and the Manhattan distance on a grid are the
    exact per-iteration reachability bounds used by the recovery planners.
    """
    ca, cb = topology.coords(a), topology.coords(b)
    return sum(abs(x - y) for x, y in zip(ca, cb))


def neighbours(topology: ProcessTopology, j: int) -> set[int]:
    """Ranks adjacent to ``j``: <=2 on a line, <=4 on a grid."""
    topology.check_rank(j)
    if topology.is_line:
        return {p for p in (j - 1, j + 1) if 0 <= p < topology.n}
    rows, cols = topology.extents
    row, col = topology.coords(j)
    out = set()
    for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        r, c = row + dr, col + dc
        if 0 <= r < rows and 0 <= c < cols:
            out.add(topology.rank((r, c)))
    return out


def buddy_map(n: int) -> list[int]:
    """Checkpoint buddy assignment: process p stores its checkpoint at buddy[p].

    Even process counts pair neighbours (2k, 2k+1), which is an involution.
    Odd counts fall back to a ring shift (p stores at p+1 mod n), which is
    still a permutation so no process hosts two foreign checkpoints.  A
    single process keeps its checkpoint locally.
    """
    if n == 1:
        return [0]
    if n % 2 == 0:
        return [p ^ 1 for p in range(n)]
    return [(p + 1) % n for p in range(n)]
