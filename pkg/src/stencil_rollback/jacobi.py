"""Application-level verifier: a real 2D Jacobi solve under rank failure.

Ranks are emulated as cooperative in-process actors driven by a
deterministic superstep loop: exchange ghosts, checkpoint when due,
update, allreduce the residual, swap buffers.  Message channels between
live ranks are in-order and lossless by construction; a dead rank neither
sends nor receives.  Failure detection is a poisoned-communicator flag:
the victim dies at the start of an iteration and every rank observes the
failure at its first communication of that superstep, so the whole
iteration is re-entered after recovery.

Two recovery paths are implemented on real grid data:

* global rollback -- every rank reloads its buddy checkpoint and the main
  loop rewinds to the checkpoint iteration;
* data-flow rollback -- survivors within Manhattan distance < d of the
  victim load *duplicate* checkpoint copies and run d-1 ghost-exchange/
  update rounds inside the recovery group only.  Ghost cells facing
  non-participants keep the values stored in the checkpoint; those frozen
  values sit far enough away that the staleness cannot reach the
  replacement's partition within d-1 rounds.  The replacement keeps the
  rebuilt state, every other participant discards its duplicate, and no
  survivor's live buffers are written (enforced with numpy write guards).

Because the recovery reproduces the lost partition bitwise, the
per-iteration summed squares and the final grid of a faulty run must be
bit-identical to a fault-free run; that equality is the verifier's whole
point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .topology import ProcessTopology, buddy_map, partition_distance

SourceTerm = float | Callable[[int, int], float]


@dataclass(frozen=True)
class JacobiConfig:
    grid_rows: int = 2
    grid_cols: int = 4
    local_n: int = 100
    h: float = 0.01
    source: SourceTerm = 1.0
    max_iters: int = 10
    checkpoint_interval: int = 10
    residual_tolerance: float | None = None
    boundary_value: float = 0.0
    initial: SourceTerm = 0.0

    def __post_init__(self):
        if self.local_n < 3:
            raise ValueError("local_n must be >= 3")
        if self.grid_rows < 1 or self.grid_cols < 1:
            raise ValueError("grid extents must be >= 1")
        if self.h <= 0:
            raise ValueError("h must be > 0")
        if self.checkpoint_interval < 1:
            raise ValueError("checkpoint_interval must be >= 1")

    @property
    def n_ranks(self) -> int:
        return self.grid_rows * self.grid_cols

    def topology(self) -> ProcessTopology:
        return ProcessTopology.grid(self.grid_rows, self.grid_cols)


@dataclass(frozen=True)
class FaultSpec:
    victim: int
    fail_at_iteration: int  # the victim dies at the start of this iteration

    def __post_init__(self):
        if self.fail_at_iteration < 0:
            raise ValueError("fail_at_iteration must be >= 0")


@dataclass
class EmulatedRank:
    rank: int
    coords: tuple[int, int]
    buddy: int
    om: np.ndarray  # (local_n+2)^2 with one ghost cell per side
    nm: np.ndarray
    h2f: np.ndarray  # premultiplied h^2 * f over owned cells
    alive: bool = True


@dataclass
class RecoveryReport:
    strategy: str
    failed_iter: int
    ckpt_iter: int
    d: int
    participants: tuple[int, ...]  # survivors supporting the recovery + replacement
    idle: tuple[int, ...]
    recovery_compute_counts: dict[int, int]
    idle_states: dict[int, str]  # bookkeeping tags fed to the energy accountant
    recovered_rank_iterations: int


@dataclass
class JacobiResult:
    summed_squares_history: list[float]
    residual_history: list[float]
    final_grid: np.ndarray
    recovery: RecoveryReport | None = None


def _fill(term: SourceTerm, row0: int, col0: int, local_n: int) -> np.ndarray:
    if callable(term):
        out = np.empty((local_n, local_n), dtype=np.float64)
        for li in range(local_n):
            for lj in range(local_n):
                out[li, lj] = term(row0 + li, col0 + lj)
        return out
    return np.full((local_n, local_n), float(term), dtype=np.float64)


def jacobi_step(om: np.ndarray, nm: np.ndarray, h2f: np.ndarray) -> float:
    """One four-point update of the owned cells; returns the local residual.

    The residual is the sum of squared updates over owned cells, the
    convention used everywhere in this repository.
    """
    new = 0.25 * (om[:-2, 1:-1] + om[1:-1, :-2] + om[2:, 1:-1] + om[1:-1, 2:] - h2f)
    nm[1:-1, 1:-1] = new
    diff = new - om[1:-1, 1:-1]
    return float(np.sum(diff * diff))


class JacobiMachine:
    """Owns the emulated ranks, their buddy checkpoint store and supersteps."""

    def __init__(self, config: JacobiConfig):
        self.config = config
        self.topology = config.topology()
        n = config.n_ranks
        self.buddies = buddy_map(n)
        ln = config.local_n
        self.ranks: list[EmulatedRank] = []
        for r in range(n):
            row, col = self.topology.coords(r)
            om = np.full((ln + 2, ln + 2), config.boundary_value, dtype=np.float64)
            om[1:-1, 1:-1] = _fill(config.initial, row * ln, col * ln, ln)
            nm = om.copy()
            h2f = (config.h ** 2) * _fill(config.source, row * ln, col * ln, ln)
            self.ranks.append(
                EmulatedRank(rank=r, coords=(row, col), buddy=self.buddies[r], om=om, nm=nm, h2f=h2f)
            )
        self._prime_physical_ghosts()
        # checkpoint of the initial state: a failure before the first save
        # recovers from the initial conditions (iteration -1)
        self.store: dict[int, tuple[int, np.ndarray]] = {}
        for r in range(n):
            self._store_checkpoint(r, -1)
        self.recovery_compute_counts = {r: 0 for r in range(n)}

    # ------------------------------------------------------------------ pieces

    def _prime_physical_ghosts(self) -> None:
        # ghosts on physical boundaries hold the fixed boundary value; the
        # exchange never writes them again
        pass  # already filled by the boundary_value initialisation

    def _store_checkpoint(self, r: int, iteration: int) -> None:
        copy = self.ranks[r].om.copy()
        copy.flags.writeable = False
        self.store[r] = (iteration, copy)

    def _neighbour(self, r: int, dr: int, dc: int) -> int | None:
        row, col = self.ranks[r].coords
        nr, nc = row + dr, col + dc
        if 0 <= nr < self.config.grid_rows and 0 <= nc < self.config.grid_cols:
            return self.topology.rank((nr, nc))
        return None

    def _exchange(self, buffers: dict[int, np.ndarray], members: set[int]) -> None:
        """Refresh ghosts of every member from members' buffers.

        Sides facing a rank outside ``members`` are left untouched, which
        during recovery freezes them at their checkpointed values.
        """
        ln = self.config.local_n
        for r in sorted(members):
            mine = buffers[r]
            up = self._neighbour(r, -1, 0)
            if up in members:
                mine[0, 1:-1] = buffers[up][ln, 1:-1]
            down = self._neighbour(r, 1, 0)
            if down in members:
                mine[ln + 1, 1:-1] = buffers[down][1, 1:-1]
            left = self._neighbour(r, 0, -1)
            if left in members:
                mine[1:-1, 0] = buffers[left][1:-1, ln]
            right = self._neighbour(r, 0, 1)
            if right in members:
                mine[1:-1, ln + 1] = buffers[right][1:-1, 1]

    def summed_squares(self) -> float:
        """Sum of u^2 over owned cells, rank-major then row-major."""
        total = 0.0
        for rank in self.ranks:
            interior = rank.om[1:-1, 1:-1]
            total += float(np.sum(interior * interior))
        return total

    def gather(self) -> np.ndarray:
        ln = self.config.local_n
        out = np.empty((self.config.grid_rows * ln, self.config.grid_cols * ln))
        for rank in self.ranks:
            row, col = rank.coords
            out[row * ln:(row + 1) * ln, col * ln:(col + 1) * ln] = rank.om[1:-1, 1:-1]
        return out

    # --------------------------------------------------------------- superstep

    def iterate(self, i: int) -> tuple[float, float]:
        """Run superstep ``i``; returns (global residual, summed squares)."""
        live = {r.rank for r in self.ranks if r.alive}
        assert len(live) == len(self.ranks), "iterate requires all ranks alive"
        self._exchange({r.rank: r.om for r in self.ranks}, live)
        if i >= 1 and (i - 1) % self.config.checkpoint_interval == 0:
            for r in sorted(live):
                self._store_checkpoint(r, i - 1)
        residual = 0.0
        for r in sorted(live):  # fixed rank-major reduction order
            rank = self.ranks[r]
            residual += jacobi_step(rank.om, rank.nm, rank.h2f)
        for r in sorted(live):
            rank = self.ranks[r]
            rank.om, rank.nm = rank.nm, rank.om
        return residual, self.summed_squares()

    # ---------------------------------------------------------------- failures

    def kill(self, victim: int) -> None:
        rank = self.ranks[victim]
        rank.alive = False
        rank.om = None  # in-memory state of a fail-stop victim is gone
        rank.nm = None

    def respawn(self, victim: int) -> None:
        """Replacement appears with the victim's buddy-held checkpoint."""
        rank = self.ranks[victim]
        ckpt_iter, data = self.store[victim]
        rank.om = data.copy()
        rank.nm = data.copy()
        rank.alive = True

    def global_recover(self) -> int:
        """Reset every rank to its checkpoint; returns the rewind iteration."""
        iters = {self.store[r][0] for r in range(len(self.ranks))}
        assert len(iters) == 1, "buddy checkpoints must be coordinated"
        for rank in self.ranks:
            _, data = self.store[rank.rank]
            rank.om = data.copy()
            rank.nm = data.copy()
        return iters.pop()

    def dfr_recover(self, victim: int, failed_iter: int) -> tuple[int, set[int]]:
        """Rebuild the victim's partition inside the recovery group only.

        Returns (checkpoint iteration, participating survivor set).  The
        replacement must already be respawned with checkpoint data in om.
        """
        c = self.store[victim][0]
        d = failed_iter - c
        group = {
            r.rank
            for r in self.ranks
            if partition_distance(self.topology, r.rank, victim) < d
        }
        supporters = group - {victim}

        # survivors work on duplicates; their live buffers are locked
        guards = []
        for rank in self.ranks:
            if rank.rank != victim:
                rank.om.flags.writeable = False
                rank.nm.flags.writeable = False
                guards.append(rank)
        try:
            dup: dict[int, np.ndarray] = {victim: self.ranks[victim].om}
            dup_new: dict[int, np.ndarray] = {victim: self.ranks[victim].nm}
            for r in supporters:
                _, data = self.store[r]
                dup[r] = data.copy()
                dup_new[r] = data.copy()
            for _ in range(d - 1):
                self._exchange(dup, group)
                for r in sorted(group):
                    jacobi_step(dup[r], dup_new[r], self.ranks[r].h2f)
                    self.recovery_compute_counts[r] += 1
                for r in group:
                    dup[r], dup_new[r] = dup_new[r], dup[r]
            # the replacement keeps the rebuilt state; swap parity decides
            # which duplicate buffer is current
            self.ranks[victim].om = dup[victim]
            self.ranks[victim].nm = dup_new[victim]
        finally:
            for rank in guards:
                rank.om.flags.writeable = True
                rank.nm.flags.writeable = True
        return c, supporters


def run_jacobi(
    config: JacobiConfig,
    fault: FaultSpec | None = None,
    strategy: str = "dfr-rect",
    frequency_scaling_emulated: bool = True,
) -> JacobiResult:
    """Execute the solve, injecting at most one rank failure.

    ``strategy`` is ``"global"`` or ``"dfr-rect"``.  The returned history
    holds the post-iteration summed squares for every logical iteration;
    iterations redone by a global rollback overwrite their slot with
    values that are bitwise identical anyway.
    """
    if fault is not None and strategy not in ("global", "dfr-rect"):
        raise ValueError("application-level recovery supports 'global' and 'dfr-rect'")
    machine = JacobiMachine(config)
    iters = config.max_iters
    ss_history: list[float] = [float("nan")] * iters
    res_history: list[float] = [float("nan")] * iters
    recovery: RecoveryReport | None = None

    i = 0
    fault_pending = fault is not None and fault.fail_at_iteration < iters
    while i < iters:
        if fault_pending and i == fault.fail_at_iteration:
            fault_pending = False
            machine.kill(fault.victim)
            # every rank observes the poisoned communicator before any data
            # of superstep i moves, then enters the recovery path
            machine.respawn(fault.victim)
            if strategy == "global":
                c = machine.global_recover()
                participants = tuple(range(config.n_ranks))
                idle: tuple[int, ...] = ()
                counts = {r: 0 for r in range(config.n_ranks)}
                rank_iters = config.n_ranks * (i - 1 - c)
                next_i = c + 1
            else:
                c, supporters = machine.dfr_recover(fault.victim, i)
                participants = tuple(sorted(supporters | {fault.victim}))
                idle = tuple(sorted(set(range(config.n_ranks)) - set(participants)))
                counts = dict(machine.recovery_compute_counts)
                rank_iters = sum(counts.values())
                next_i = i
            idle_tag = "idle_scaled" if frequency_scaling_emulated else "idle_unscaled"
            recovery = RecoveryReport(
                strategy=strategy,
                failed_iter=i,
                ckpt_iter=c,
                d=i - c,
                participants=participants,
                idle=idle,
                recovery_compute_counts=counts,
                idle_states={r: ("computing" if r in participants else idle_tag) for r in range(config.n_ranks)},
                recovered_rank_iterations=rank_iters,
            )
            i = next_i
            continue
        residual, ss = machine.iterate(i)
        res_history[i] = residual
        ss_history[i] = ss
        if config.residual_tolerance is not None and residual <= config.residual_tolerance:
            ss_history = ss_history[: i + 1]
            res_history = res_history[: i + 1]
            break
        i += 1

    return JacobiResult(
        summed_squares_history=ss_history,
        residual_history=res_history,
        final_grid=machine.gather(),
        recovery=recovery,
    )
