import pytest
from hypothesis import given
from hypothesis import strategies as st

from stencil_rollback.platform import (
    HostSpec,
    HostState,
    LinkSpec,
    PlatformModel,
    PowerModel,
    power_draw,
    task_duration,
    transfer_time,
)


def test_task_duration_calibration():
    host = HostSpec(id=0, flops_rate=20e9)
    assert task_duration(200e9, host) == pytest.approx(10.0)
    assert task_duration(0.0, host) == 0.0
    assert task_duration(100e9, host) == pytest.approx(5.0)


def test_transfer_time_boundary_exchange():
    link = LinkSpec(bandwidth=1e9, latency=50e-6)
    assert transfer_time(0, link) == pytest.approx(5.0e-5)
    # one 1e5-element exchange of 8-byte values
    assert transfer_time(800_000, link) == pytest.approx(6.45e-3)
    assert transfer_time(800_000, LinkSpec(bandwidth=2e9, latency=0.0)) == pytest.approx(3.2e-3)


def test_power_draw_defaults():
    power = PowerModel()
    assert power_draw(HostState.COMPUTING, power) == 125.0
    assert power_draw(HostState.IDLE_SCALED, power) == 110.0
    assert power_draw(HostState.IDLE_UNSCALED, power) == 123.5
    assert power_draw(HostState.COMMUNICATING, power) == 125.0


def test_default_scaling_saves_twelve_percent():
    power = PowerModel()
    drop = (power.computing - power.idle_scaled) / power.computing
    assert drop == pytest.approx(0.12)


def test_power_model_ordering_enforced():
    with pytest.raises(ValueError):
        PowerModel(computing=100.0, idle_unscaled=110.0, idle_scaled=90.0)
    with pytest.raises(ValueError):
        PowerModel(idle_scaled=-1.0)


@given(st.floats(0, 1e15), st.floats(0, 1e15))
def test_monotone_in_work(a, b):
    host = HostSpec(id=0, flops_rate=20e9)
    link = LinkSpec()
    lo, hi = min(a, b), max(a, b)
    assert task_duration(lo, host) <= task_duration(hi, host)
    assert transfer_time(lo, link) <= transfer_time(hi, link)


def test_platform_bundle_helpers():
    plat = PlatformModel()
    assert plat.payload_bytes == pytest.approx(800_000)
    assert plat.seconds_per_task() == pytest.approx(10.0)
    assert plat.seconds_per_transfer() == pytest.approx(6.45e-3)


def test_invalid_specs():
    with pytest.raises(ValueError):
        HostSpec(id=0, flops_rate=0.0)
    with pytest.raises(ValueError):
        LinkSpec(bandwidth=-1.0)
    with pytest.raises(ValueError):
        task_duration(-1.0, HostSpec(id=0))
