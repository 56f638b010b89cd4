"""Fixed-step transient integrator with breakpoint-aligned stepping.

One memristive device is driven by a waveform; the single state ODE is
advanced with classical RK4 (or forward Euler) on a fixed grid. Steps
never straddle a waveform segment boundary: the grid is laid out per
segment and a shortened step closes each segment exactly, so the ideal
rectangular edges stay sharp and runs are bit-reproducible. Within a
step the drive is evaluated from the active segment only, which keeps
the RK4 stages on the correct side of a discontinuity.

The state is hard-clamped to the device bounds after every full step
(not per stage). A probe object can observe every accepted step to fill
the detector/comparator columns of the trace; without one those columns
are zero and the mode column reads "idle".
"""

import math
from bisect import bisect_left
from dataclasses import dataclass

from .signals import ConstantSegment, Waveform

RK4 = "rk4"
EULER = "euler"

CSV_HEADER = "t,v_in,v_m,i_m,state,v_s,mode,bit_out"


class SimulationError(RuntimeError):
    """Integration aborted; the message carries the failing time and row index."""


@dataclass(frozen=True)
class SimConfig:
    dt: float = 1e-6
    t_end: float = 1.0
    method: str = RK4
    record_stride: int = 1

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end < self.dt:
            raise ValueError(f"t_end {self.t_end} shorter than one step {self.dt}")
        if self.method not in (RK4, EULER):
            raise ValueError(f"unknown method {self.method!r}")
        if self.record_stride < 1:
            raise ValueError(f"record_stride must be >= 1, got {self.record_stride}")


class Trace:
    """Column-wise record of a transient run.

    Times are strictly increasing; the stride between rows is constant
    except where a waveform breakpoint forced a shorter step. All numeric
    columns are finite. v_m equals v_in in this topology (the memristor
    hangs directly across the input; the detector is a parallel tap), but
    both columns are kept so the file format stands on its own.
    """

    __slots__ = ("t", "v_in", "v_m", "i_m", "state", "v_s", "mode", "bit_out")

    def __init__(self):
        self.t: list[float] = []
        self.v_in: list[float] = []
        self.v_m: list[float] = []
        self.i_m: list[float] = []
        self.state: list[float] = []
        self.v_s: list[float] = []
        self.mode: list[str] = []
        self.bit_out: list[float] = []

    def append(self, t, v_in, v_m, i_m, state, v_s, mode, bit_out):
        if not (math.isfinite(i_m) and math.isfinite(state) and math.isfinite(v_s)):
            raise SimulationError(
                f"non-finite sample at t={t} (row {len(self.t)}): "
                f"i_m={i_m}, state={state}, v_s={v_s}"
            )
        self.t.append(t)
        self.v_in.append(v_in)
        self.v_m.append(v_m)
        self.i_m.append(i_m)
        self.state.append(state)
        self.v_s.append(v_s)
        self.mode.append(mode)
        self.bit_out.append(bit_out)

    def __len__(self) -> int:
        return len(self.t)

    @property
    def duration(self) -> float:
        return self.t[-1] - self.t[0]

    def index_at(self, t: float) -> int:
        """Index of the recorded row closest to time t."""
        if not self.t:
            raise ValueError("empty trace")
        i = bisect_left(self.t, t)
        if i == 0:
            return 0
        if i == len(self.t):
            return len(self.t) - 1
        return i if self.t[i] - t < t - self.t[i - 1] else i - 1

    def state_at(self, t: float) -> float:
        return self.state[self.index_at(t)]

    def to_csv(self, path) -> None:
        """Write the trace with full float round-trip precision."""
        with open(path, "w", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for k in range(len(self.t)):
                fh.write(
                    f"{self.t[k]!r},{self.v_in[k]!r},{self.v_m[k]!r},"
                    f"{self.i_m[k]!r},{self.state[k]!r},{self.v_s[k]!r},"
                    f"{self.mode[k]},{self.bit_out[k]!r}\n"
                )


class NullProbe:
    """Placeholder probe for device-only runs; detector columns stay at zero."""

    def observe(self, t, v_in, state, i_m):
        return 0.0, "idle", 0.0


def concat_traces(first: Trace, second: Trace) -> Trace:
    """Glue two runs into one timeline, shifting the second to start where
    the first ends. The duplicated seam row is dropped."""
    out = Trace()
    for k in range(len(first)):
        out.append(first.t[k], first.v_in[k], first.v_m[k], first.i_m[k],
                   first.state[k], first.v_s[k], first.mode[k], first.bit_out[k])
    offset = first.t[-1] if len(first) else 0.0
    start = 1 if len(second) and second.t[0] == 0.0 and len(first) else 0
    for k in range(start, len(second)):
        out.append(second.t[k] + offset, second.v_in[k], second.v_m[k],
                   second.i_m[k], second.state[k], second.v_s[k],
                   second.mode[k], second.bit_out[k])
    return out


def integrate(device, drive: Waveform, cfg: SimConfig, probe=None) -> Trace:
    """Advance the device state under the drive over [0, t_end].

    The returned trace starts with the initial condition at t = 0 and
    ends exactly at t_end. If the drive is shorter than t_end the input
    is held at zero for the remainder (the state then holds too, which is
    the nonvolatility of these devices). The device value itself is never
    mutated; read the state column for the evolution.
    """
    lo, hi = device.bounds
    y = device.state
    if not (lo <= y <= hi):
        raise ValueError(f"initial state {y} outside device bounds [{lo}, {hi}]")
    if probe is None:
        probe = NullProbe()

    trace = Trace()

    def record(t_abs: float, state: float, v: float) -> None:
        i = device.current(state, v)
        v_s, mode, bit = probe.observe(t_abs, v, state, i)
        trace.append(t_abs, v, v, i, state, v_s, mode, bit)

    record(0.0, y, drive.value(0.0))

    dt = cfg.dt
    stride = cfg.record_stride
    step_count = 0
    # a row landing on an interior breakpoint shows the incoming segment's
    # value (right-continuous); the very last instant of the drive shows the
    # outgoing value so the recorded signal closes where the drive does
    end_tol = 1e-12 * max(drive.total_duration, cfg.t_end)

    def advance(seg, state, tau0, h, t0):
        try:
            return _step(device, seg, state, tau0, h, cfg.method)
        except ValueError as exc:
            raise SimulationError(
                f"derivative failed at t={t0 + tau0} (row {len(trace)}): {exc}"
            ) from exc

    for t0, t1, seg in _windows_until(drive, cfg.t_end):
        span = t1 - t0
        n_full = int(span / dt + 1e-9)
        rem = span - n_full * dt
        if rem <= dt * 1e-9:
            rem = 0.0
        if t1 >= drive.total_duration - end_tol:
            v_close = seg.value_at(span)
        else:
            v_close = drive.value(t1)
        for k in range(1, n_full + 1):
            y = device.clamp(advance(seg, y, (k - 1) * dt, dt, t0))
            step_count += 1
            last_of_window = k == n_full and rem == 0.0
            if last_of_window:
                record(t1, y, v_close)
            elif step_count % stride == 0 or t0 + k * dt >= cfg.t_end:
                record(t0 + k * dt, y, seg.value_at(k * dt))
        if rem > 0.0:
            y = device.clamp(advance(seg, y, n_full * dt, rem, t0))
            step_count += 1
            record(t1, y, v_close)

    return trace


def _windows_until(drive: Waveform, t_end: float):
    """Segment windows clipped to [0, t_end], plus a trailing zero-drive hold."""
    covered = 0.0
    for t0, t1, seg in drive.windows():
        if t0 >= t_end:
            break
        yield t0, min(t1, t_end), seg
        covered = min(t1, t_end)
        if t1 >= t_end:
            break
    if t_end - covered > 1e-15:
        yield covered, t_end, ConstantSegment(t_end - covered, 0.0)


def _step(device, seg, y: float, tau0: float, h: float, method: str) -> float:
    """One integration step over [tau0, tau0+h] local to the active segment."""
    if method == EULER:
        return y + h * device.state_derivative(y, seg.value_at(tau0))
    k1 = device.state_derivative(y, seg.value_at(tau0))
    v_mid = seg.value_at(tau0 + 0.5 * h)
    k2 = device.state_derivative(y + 0.5 * h * k1, v_mid)
    k3 = device.state_derivative(y + 0.5 * h * k2, v_mid)
    k4 = device.state_derivative(y + h * k3, seg.value_at(tau0 + h))
    return y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def hysteresis_metrics(trace: Trace, period: float,
                       pinch_voltage_threshold: float = 1e-9) -> tuple[float, float]:
    """Pinch residual and enclosed loop area of the i-v locus.

    pinch_residual is the largest |i_m| among samples whose |v_m| is
    below the voltage threshold (NaN when no sample qualifies, e.g. a DC
    trace that never crosses zero). The loop area is the total area
    enclosed by the pinched figure-eight over the first drive period. The
    two lobes are traversed with opposite orientation, so a single
    shoelace sum over the whole period would cancel them; instead each
    half-period sub-loop (the locus is pinched shut at the zero
    crossings) is measured separately and the magnitudes are added. The
    trace must span a whole number of periods.
    """
    if period <= 0.0:
        raise ValueError(f"period must be positive, got {period}")
    n = trace.duration / period
    if n < 1.0 - 1e-9:
        raise ValueError(
            f"trace spans {trace.duration} s, shorter than one period {period} s"
        )
    if abs(n - round(n)) > 1e-6:
        raise ValueError(f"trace spans {n} periods, need a whole number")

    residual = math.nan
    for v, i in zip(trace.v_m, trace.i_m):
        if abs(v) < pinch_voltage_threshold:
            a = abs(i)
            if math.isnan(residual) or a > residual:
                residual = a

    t0 = trace.t[0]
    mid = bisect_left(trace.t, t0 + period / 2.0 + 1e-12)
    end = bisect_left(trace.t, t0 + period + 1e-12)
    area = _shoelace(trace.v_m[:mid], trace.i_m[:mid]) + \
        _shoelace(trace.v_m[mid - 1:end], trace.i_m[mid - 1:end])
    return residual, area


def _shoelace(xs: list[float], ys: list[float]) -> float:
    acc = 0.0
    for k in range(len(xs)):
        j = (k + 1) % len(xs)
        acc += xs[k] * ys[j] - xs[j] * ys[k]
    return abs(acc) / 2.0


def staircase_profile(trace: Trace, pulse_edges: list[float]) -> list[tuple[int, float]]:
    """Per-pulse state increments, sampled at each pulse's trailing edge."""
    if not pulse_edges:
        return []
    t_first, t_last = trace.t[0], trace.t[-1]
    for e in pulse_edges:
        if e < t_first - 1e-12 or e > t_last + 1e-12:
            raise ValueError(f"pulse edge {e} outside trace span [{t_first}, {t_last}]")
    out = []
    prev = trace.state[0]
    for idx, edge in enumerate(pulse_edges):
        s = trace.state_at(edge)
        out.append((idx, s - prev))
        prev = s
    return out
