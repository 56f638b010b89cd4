"""Piecewise waveform generators for write pulses, read pulses and sine drives.

A Waveform is an ordered list of segments, each a constant level or a
sine arc, optionally repeated. Evaluation is exact and right-continuous
at segment edges. Segment boundaries are exposed as breakpoints so the
integrator can split steps there instead of smearing the rectangular
edges (edges are ideal, zero rise time).

Time averages are computed analytically: rectangle areas in rational
arithmetic so that a symmetric bipolar pulse averages to exactly zero,
sine arcs by their closed-form integral with whole-period runs snapping
to zero.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

WRITE_LEVEL_MAX = 5.0  # largest voltage the cell can store


@dataclass(frozen=True)
class ConstantSegment:
    duration: float
    level: float

    def __post_init__(self):
        if self.duration <= 0.0:
            raise ValueError(f"segment duration must be positive, got {self.duration}")

    def value_at(self, tau: float) -> float:
        return self.level


@dataclass(frozen=True)
class SineSegment:
    duration: float
    amplitude: float
    frequency: float
    phase: float = 0.0

    def __post_init__(self):
        if self.duration <= 0.0:
            raise ValueError(f"segment duration must be positive, got {self.duration}")
        if self.frequency <= 0.0:
            raise ValueError(f"frequency must be positive, got {self.frequency}")

    def value_at(self, tau: float) -> float:
        return self.amplitude * math.sin(2.0 * math.pi * self.frequency * tau + self.phase)


Segment = ConstantSegment | SineSegment


@dataclass(frozen=True)
class Waveform:
    """Immutable piecewise signal: segments played in order, repeat_count times."""

    segments: tuple[Segment, ...]
    repeat_count: int = 1

    def __post_init__(self):
        if not self.segments:
            raise ValueError("waveform needs at least one segment")
        if self.repeat_count < 1:
            raise ValueError(f"repeat_count must be >= 1, got {self.repeat_count}")

    @property
    def cycle_duration(self) -> float:
        return math.fsum(s.duration for s in self.segments)

    @property
    def total_duration(self) -> float:
        return self.cycle_duration * self.repeat_count

    def value(self, t: float) -> float:
        """Signal value at time t; right-continuous at edges, 0 past the end."""
        if t < 0.0:
            raise ValueError(f"waveform not defined for t < 0, got {t}")
        if t >= self.total_duration:
            return 0.0
        period = self.cycle_duration
        cycle = int(t // period)
        if cycle >= self.repeat_count:  # float edge of the last cycle
            cycle = self.repeat_count - 1
        tau = t - cycle * period
        for seg in self.segments:
            if tau < seg.duration:
                return seg.value_at(tau)
            tau -= seg.duration
        return self.segments[-1].value_at(self.segments[-1].duration)

    def breakpoints(self) -> list[float]:
        """Every segment boundary over the full duration, including 0 and the end."""
        pts = [0.0]
        for _, t1, _ in self.windows():
            pts.append(t1)
        return pts

    def windows(self):
        """Yield (t_start, t_end, segment) for every segment instance in order."""
        t = 0.0
        for _ in range(self.repeat_count):
            for seg in self.segments:
                t1 = t + seg.duration
                yield t, t1, seg
                t = t1


@dataclass(frozen=True)
class ReadPulseSpec:
    """Zero-average bipolar read pulse: +amplitude then -amplitude, equal halves."""

    amplitude: float = 1.0
    half_period: float = 15e-3
    order: str = "positive-first"

    def __post_init__(self):
        if self.amplitude <= 0.0:
            raise ValueError(f"read amplitude must be positive, got {self.amplitude}")
        if self.half_period <= 0.0:
            raise ValueError(f"half period must be positive, got {self.half_period}")
        if self.order != "positive-first":
            raise ValueError("read pulses are positive-first; the negative half "
                             "concludes the cycle so the sample lands in it")


def make_write_pulse_train(amplitude: float, t_on: float, t_off: float, n: int) -> Waveform:
    """Unipolar programming train: n pulses of `amplitude` for t_on, 0 for t_off."""
    if not (0.0 <= amplitude <= WRITE_LEVEL_MAX):
        raise ValueError(
            f"write amplitude {amplitude} outside [0, {WRITE_LEVEL_MAX}] V"
        )
    if t_on <= 0.0 or t_off <= 0.0:
        raise ValueError("t_on and t_off must be positive")
    if n < 1:
        raise ValueError(f"need at least one pulse, got {n}")
    return Waveform(
        segments=(ConstantSegment(t_on, amplitude), ConstantSegment(t_off, 0.0)),
        repeat_count=n,
    )


def make_read_pulse(spec: ReadPulseSpec) -> Waveform:
    """Bipolar read pulse from its spec; time average is exactly zero."""
    return Waveform(
        segments=(
            ConstantSegment(spec.half_period, spec.amplitude),
            ConstantSegment(spec.half_period, -spec.amplitude),
        )
    )


def make_sine(amplitude: float, frequency: float, n_periods: int = 1) -> Waveform:
    """Pure zero-phase sine covering n_periods whole periods."""
    if amplitude <= 0.0:
        raise ValueError(f"amplitude must be positive, got {amplitude}")
    if frequency <= 0.0:
        raise ValueError(f"frequency must be positive, got {frequency}")
    if n_periods < 1:
        raise ValueError(f"need at least one period, got {n_periods}")
    return Waveform(
        segments=(SineSegment(n_periods / frequency, amplitude, frequency),)
    )


def time_average(w: Waveform) -> float:
    """Analytic time average of the waveform over its full duration.

    Constant segments are accumulated as exact rationals, so pulse trains
    with equal positive and negative areas average to exactly 0.0. Sine
    segments use the closed-form integral; a segment spanning a whole
    number of periods contributes exactly zero.
    """
    rational_area = Fraction(0)
    float_area = 0.0
    exact = True
    for seg in w.segments:
        if isinstance(seg, ConstantSegment):
            rational_area += Fraction(seg.level) * Fraction(seg.duration)
        else:
            cycles = seg.frequency * seg.duration
            if abs(cycles - round(cycles)) < 1e-9 and abs(seg.phase) < 1e-15:
                continue  # whole periods integrate to zero
            omega = 2.0 * math.pi * seg.frequency
            float_area += seg.amplitude * (
                math.cos(seg.phase) - math.cos(omega * seg.duration + seg.phase)
            ) / omega
            exact = False
    duration = w.cycle_duration  # repetition does not change the average
    if exact:
        dur = Fraction(0)
        for seg in w.segments:
            dur += Fraction(seg.duration)
        return float(rational_area / dur)
    return (float(rational_area) + float_area) / duration
