"""Seeded exponential fail-stop injection.

Each node gets an independent exponential inter-arrival stream derived
from the master seed and its node index, so a trace is a pure function of
(seed, n, mtbf, horizon) and does not depend on generation order.  The
generator identity is recorded so runs can be reproduced elsewhere.

A failed node is replaced instantly and the spare inherits the node's
remaining failure stream.  Failures that arrive while a recovery is in
progress are deferred (not discarded): they fire immediately after the
active recovery completes, preserving the expected failure count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PRNG_IDENTITY = "numpy PCG64 via default_rng([seed, node_index]); inverse-transform exponentials"
DEFERRAL_POLICY = "defer-during-recovery"


@dataclass(frozen=True)
class FailureEvent:
    time: float  # simulated seconds
    host: int

    def __post_init__(self):
        if self.time < 0:
            raise ValueError("failure time must be >= 0")


@dataclass(frozen=True)
class FailureTrace:
    seed: int
    node_mtbf: float
    horizon: float
    events: tuple[FailureEvent, ...]
    prng: str = PRNG_IDENTITY


def sample_exponential(rng, mtbf: float) -> float:
    """Draw one exponential inter-arrival time with mean ``mtbf``.

    Uses the inverse transform -mtbf*ln(1-u) on a uniform u in [0, 1), so
    any object with a ``random()`` method works as the generator.
    """
    if mtbf <= 0:
        raise ValueError("mtbf must be > 0")
    u = rng.random()
    return float(-mtbf * np.log1p(-u))


def node_rng(seed: int, node: int) -> np.random.Generator:
    """Deterministic per-node stream, independent of visit order."""
    return np.random.default_rng([seed, node])


def generate_trace(seed: int, n: int, node_mtbf: float, horizon: float) -> FailureTrace:
    """All node failures in [0, horizon), merged and time-ordered.

    Ordering ties are broken by host index, making the trace fully
    deterministic even in the (measure-zero) case of equal times.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if node_mtbf <= 0:
        raise ValueError("node_mtbf must be > 0")
    if horizon <= 0:
        raise ValueError("horizon must be > 0")

    events = []
    for node in range(n):
        rng = node_rng(seed, node)
        t = 0.0
        while True:
            t += sample_exponential(rng, node_mtbf)
            if t >= horizon:
                break
            events.append(FailureEvent(time=t, host=node))
    events.sort(key=lambda e: (e.time, e.host))
    return FailureTrace(seed=seed, node_mtbf=node_mtbf, horizon=horizon, events=tuple(events))


class TraceCursor:
    """Single-consumer cursor over a trace, owned by one engine instance."""

    def __init__(self, trace: FailureTrace):
        self.trace = trace
        self.idx = 0

    def peek(self) -> FailureEvent | None:
        if self.idx >= len(self.trace.events):
            return None
        return self.trace.events[self.idx]

    def advance(self) -> None:
        self.idx += 1


def admit_failure(event: FailureEvent, recovery_active: bool) -> str:
    """Admission policy for one scheduled failure: ``"fire"`` or ``"defer"``.

    At most one recovery may be active at any time, so an event arriving
    inside a recovery window is deferred to fire right after the window
    closes (the engine re-queues it at that instant).
    """
    return "defer" if recovery_active else "fire"
