import math

import numpy as np
import pytest
from scipy import stats

from stencil_rollback.failures import (
    FailureEvent,
    TraceCursor,
    admit_failure,
    generate_trace,
    node_rng,
    sample_exponential,
)

HOUR = 3600.0


class FixedUniform:
    def __init__(self, u):
        self.u = u

    def random(self):
        return self.u


def test_inverse_transform_endpoints():
    assert sample_exponential(FixedUniform(0.0), 100 * HOUR) == 0.0
    u = 1.0 - math.exp(-1.0)
    assert sample_exponential(FixedUniform(u), 100 * HOUR) == pytest.approx(100 * HOUR)


def test_sample_mean_matches_mtbf():
    rng = node_rng(12345, 0)
    u = rng.random(1_000_000)
    samples = -100 * HOUR * np.log1p(-u)
    assert abs(samples.mean() - 100 * HOUR) / (100 * HOUR) < 0.01


def test_rejects_bad_mtbf():
    with pytest.raises(ValueError):
        sample_exponential(FixedUniform(0.5), 0.0)


def test_trace_determinism_and_ordering():
    a = generate_trace(seed=7, n=50, node_mtbf=100 * HOUR, horizon=1e4)
    b = generate_trace(seed=7, n=50, node_mtbf=100 * HOUR, horizon=1e4)
    assert a == b
    times = [(e.time, e.host) for e in a.events]
    assert times == sorted(times)
    assert all(0 <= e.time < 1e4 for e in a.events)


def test_trace_changes_with_seed():
    a = generate_trace(seed=1, n=20, node_mtbf=50 * HOUR, horizon=1e4)
    b = generate_trace(seed=2, n=20, node_mtbf=50 * HOUR, horizon=1e4)
    assert a.events != b.events


def test_expected_counts_at_paper_scale():
    # ~27.8 events expected for 1000 nodes over 1e4 s at 100 h MTBF
    counts = [
        len(generate_trace(seed=s, n=1000, node_mtbf=100 * HOUR, horizon=1e4).events)
        for s in range(8)
    ]
    assert 2 <= min(counts) and max(counts) <= 60
    mean = sum(counts) / len(counts)
    assert 20 <= mean <= 36


def test_counts_are_poisson_distributed():
    # chi-squared goodness of fit at desk scale, lam = 4
    lam = 4.0
    n, horizon = 20, 1e4
    mtbf = n * horizon / lam
    counts = np.array(
        [len(generate_trace(s, n, mtbf, horizon).events) for s in range(400)]
    )
    edges = [0, 2, 3, 4, 5, 6, 40]
    observed = np.histogram(counts, bins=edges)[0]
    probs = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        probs.append(stats.poisson.cdf(hi - 1, lam) - stats.poisson.cdf(lo - 1, lam))
    expected = np.array(probs) * len(counts)
    chi2 = ((observed - expected) ** 2 / expected).sum()
    p = 1.0 - stats.chi2.cdf(chi2, df=len(observed) - 1)
    assert p > 0.01


def test_admission_policy():
    ev = FailureEvent(time=50.0, host=3)
    assert admit_failure(ev, recovery_active=False) == "fire"
    assert admit_failure(ev, recovery_active=True) == "defer"


def test_cursor_walks_trace():
    trace = generate_trace(seed=3, n=100, node_mtbf=10 * HOUR, horizon=1e4)
    cursor = TraceCursor(trace)
    seen = []
    while cursor.peek() is not None:
        seen.append(cursor.peek())
        cursor.advance()
    assert tuple(seen) == trace.events
