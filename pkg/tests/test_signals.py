"""Waveform construction and exact time-average arithmetic."""

import math

import pytest

from memcell.signals import (
    ConstantSegment,
    ReadPulseSpec,
    SineSegment,
    Waveform,
    make_read_pulse,
    make_sine,
    make_write_pulse_train,
    time_average,
)


def test_write_train_shape():
    w = make_write_pulse_train(1.5, 5e-3, 5e-3, 3)
    assert w.total_duration == pytest.approx(30e-3)
    assert w.value(2e-3) == 1.5          # inside first on-interval
    assert w.value(7e-3) == 0.0          # inside first off-interval
    assert w.value(12e-3) == 1.5         # second pulse
    assert w.value(5e-3) == 0.0          # right-continuous at the falling edge


def test_write_train_is_unipolar():
    w = make_write_pulse_train(1.0, 2e-3, 3e-3, 4)
    samples = [w.value(k * 1e-4) for k in range(200)]
    assert min(samples) >= 0.0
    assert max(samples) == 1.0


def test_write_train_zero_amplitude_is_flat():
    w = make_write_pulse_train(0.0, 1e-3, 1e-3, 5)
    assert all(w.value(k * 1e-4) == 0.0 for k in range(100))
    assert time_average(w) == 0.0


def test_write_train_narrow_on_wide_off():
    w = make_write_pulse_train(1.0, 2e-3, 6e-3, 2)
    assert time_average(w) == pytest.approx(0.25)


def test_write_train_range_errors():
    with pytest.raises(ValueError):
        make_write_pulse_train(-0.1, 1e-3, 1e-3, 1)
    with pytest.raises(ValueError):
        make_write_pulse_train(5.1, 1e-3, 1e-3, 1)
    with pytest.raises(ValueError):
        make_write_pulse_train(1.0, 0.0, 1e-3, 1)
    with pytest.raises(ValueError):
        make_write_pulse_train(1.0, 1e-3, 1e-3, 0)


def test_read_pulse_layout():
    w = make_read_pulse(ReadPulseSpec(1.0, 5e-3))
    assert w.value(1e-3) == 1.0
    assert w.value(6e-3) == -1.0
    assert w.value(5e-3) == -1.0  # negative half starts exactly at the flip
    assert max(abs(w.value(k * 1e-4)) for k in range(100)) == 1.0


def test_read_pulse_average_is_exactly_zero():
    # rational rectangle areas, not float accumulation
    for amp, half in [(1.0, 5e-3), (0.7, 13e-3), (3.3, 1e-4)]:
        assert time_average(make_read_pulse(ReadPulseSpec(amp, half))) == 0.0


def test_read_pulse_spec_validation():
    with pytest.raises(ValueError):
        ReadPulseSpec(amplitude=0.0)
    with pytest.raises(ValueError):
        ReadPulseSpec(half_period=-1.0)
    with pytest.raises(ValueError):
        ReadPulseSpec(order="negative-first")


def test_biased_pulse_average():
    # positive half held twice as long -> average amplitude/3
    w = Waveform((ConstantSegment(30e-3, 1.0), ConstantSegment(15e-3, -1.0)))
    assert time_average(w) == pytest.approx(1.0 / 3.0, rel=1e-12)


def test_sine_basics():
    w = make_sine(1.0, 100.0)
    assert w.value(0.0) == 0.0
    assert w.value(2.5e-3) == pytest.approx(1.0)     # quarter period
    assert w.total_duration == pytest.approx(10e-3)
    assert time_average(w) == 0.0                    # whole period snaps exactly


def test_sine_validation():
    with pytest.raises(ValueError):
        make_sine(0.0, 100.0)
    with pytest.raises(ValueError):
        make_sine(1.0, -5.0)
    with pytest.raises(ValueError):
        make_sine(1.0, 100.0, n_periods=0)


def test_time_average_constant():
    w = Waveform((ConstantSegment(2e-3, 1.5),))
    assert time_average(w) == 1.5


def test_partial_sine_average_is_analytic():
    # half a period of sin: mean = 2A/pi over the half period
    seg = SineSegment(duration=5e-3, amplitude=1.0, frequency=100.0)
    w = Waveform((seg,))
    assert time_average(w) == pytest.approx(2.0 / math.pi, rel=1e-9)


def test_value_domain():
    w = make_read_pulse(ReadPulseSpec(1.0, 5e-3))
    with pytest.raises(ValueError):
        w.value(-1e-9)
    assert w.value(w.total_duration) == 0.0
    assert w.value(w.total_duration + 1.0) == 0.0


def test_repeat_folding():
    w = make_write_pulse_train(2.0, 1e-3, 1e-3, 3)
    for t in (0.5e-3, 1.5e-3):
        assert w.value(t) == w.value(t + 2e-3) == w.value(t + 4e-3)


def test_breakpoints_cover_every_edge():
    w = make_write_pulse_train(1.0, 1e-3, 2e-3, 2)
    pts = w.breakpoints()
    assert pts[0] == 0.0
    assert len(pts) == 1 + 2 * 2
    assert pts[-1] == pytest.approx(6e-3)
    assert all(b > a for a, b in zip(pts, pts[1:]))


def test_waveform_validation():
    with pytest.raises(ValueError):
        Waveform(())
    with pytest.raises(ValueError):
        Waveform((ConstantSegment(1e-3, 1.0),), repeat_count=0)
    with pytest.raises(ValueError):
        ConstantSegment(0.0, 1.0)
    with pytest.raises(ValueError):
        SineSegment(1e-3, 1.0, 0.0)
