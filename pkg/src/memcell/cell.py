"""The switchless read-write memory cell.

The cell stores an analog level (0 to 5 V) in the emulator memristor and
reads a single bit without a read/write enable switch. The input node
drives the memristor directly; a PMOS source follower taps the same node
and its source voltage classifies the operation: unipolar write pulses
keep V_S above 2.2 V, only the negative half of a bipolar read pulse
pulls it below. A first comparator gates the 2.5 V attenuator reference
onto the output comparator only while a read is detected; otherwise the
output comparator holds its last value, so the read circuit retains its
state between reads. The output bit is sampled at the temporal midpoint
of the negative half, far from both edges, which is what makes the read
immune to the state excursion the positive half causes.

Reading with a zero-average pulse returns the state to its pre-read
value; the restoration tolerance is 1 % of the pre-read state with an
absolute floor of 5 mV. Note that a read pulse whose positive half
drives the state into the upper rail clamp loses that symmetry, and a
pulse weaker than about 0.67 V never pulls V_S below 2.2 V and therefore
never activates the read circuit at all.
"""

from dataclasses import dataclass, replace
from enum import Enum

from .devices import (
    Comparator,
    ComparatorParams,
    EmulatorMemristor,
    EmulatorParams,
    PmosStageParams,
    attenuator_reference,
    pmos_source_voltage,
)
from .engine import SimConfig, Trace, integrate
from .signals import ReadPulseSpec, Waveform, make_read_pulse, make_write_pulse_train, time_average

READ_DETECT_THRESHOLD = 2.2  # volts of safety margin below the write-side V_S
RESTORE_REL_TOL = 0.01
RESTORE_ABS_FLOOR = 5e-3

BIT_HIGH = "high"
BIT_LOW = "low"


class ProtocolViolationError(RuntimeError):
    """The read/write protocol was broken (wrong mode detected mid-operation)."""


class CellMode(Enum):
    WRITE = "write"
    READ = "read"
    IDLE = "idle"


def detect_mode(v_s: float, threshold: float = READ_DETECT_THRESHOLD) -> CellMode:
    """Classify the detector source voltage: write at or above the threshold,
    read below it. The tie resolves to write, the safety-margin side."""
    if not (0.0 <= v_s <= 5.0):
        raise ValueError(f"source voltage {v_s} outside [0, 5] V")
    return CellMode.WRITE if v_s >= threshold else CellMode.READ


@dataclass(frozen=True)
class CellState:
    emulator_v: float
    last_bit: float
    mode: CellMode


@dataclass(frozen=True)
class ReadResult:
    bit: str
    sample_time: float
    state_before: float
    state_after: float

    @property
    def restoration_error(self) -> float:
        return abs(self.state_after - self.state_before)


def restoration_tolerance(state_before: float) -> float:
    return max(RESTORE_REL_TOL * abs(state_before), RESTORE_ABS_FLOOR)


class DetectorProbe:
    """Per-step observer implementing the detector and comparator chain.

    Mode is idle whenever the input sits at its zero level; otherwise it
    follows the PMOS source voltage. While a read is detected the output
    comparator compares the memristor state against half the rail;
    otherwise it holds (latches) its previous output.
    """

    def __init__(self, pmos: PmosStageParams, latch: Comparator,
                 threshold: float = READ_DETECT_THRESHOLD):
        self.pmos = pmos
        self.latch = latch
        self.threshold = threshold
        self.reference = attenuator_reference(pmos.v_dd)

    def observe(self, t: float, v_in: float, state: float, i_m: float):
        v_s = pmos_source_voltage(v_in, self.pmos)
        mode = CellMode.IDLE if v_in == 0.0 else detect_mode(v_s, self.threshold)
        if mode is CellMode.READ:
            bit = self.latch.compare(state, self.reference)
        else:
            bit = self.latch.output
        return v_s, mode.value, bit


class MemoryCell:
    """Single-owner state machine over one emulator memristor.

    Operations mutate the cell sequentially; distinct cells are fully
    independent. The output latch powers up high (5 V).
    """

    def __init__(self,
                 emulator: EmulatorParams = EmulatorParams(),
                 pmos: PmosStageParams = PmosStageParams(),
                 comparator: ComparatorParams = ComparatorParams(),
                 initial_state: float = 0.0,
                 read_threshold: float = READ_DETECT_THRESHOLD):
        self._device = EmulatorMemristor(emulator, initial_state)
        self.pmos = pmos
        self._latch = Comparator(comparator)  # powers up at v_high
        self.read_threshold = read_threshold
        self.mode = CellMode.IDLE
        self.last_trace: Trace | None = None

    @property
    def state(self) -> CellState:
        return CellState(self._device.state, self._latch.output, self.mode)

    @property
    def device(self) -> EmulatorMemristor:
        return self._device

    def probe(self) -> DetectorProbe:
        return DetectorProbe(self.pmos, self._latch, self.read_threshold)

    def source_follower_path(self, v_in: float) -> tuple[float, float]:
        """Detector tap for one input level: (V_S, gate drive)."""
        return pmos_source_voltage(v_in, self.pmos), v_in

    def write(self, amplitude: float, t_on: float, t_off: float, n: int,
              cfg: SimConfig = SimConfig()) -> CellState:
        """Apply a unipolar programming train and advance the stored level.

        Every on-interval must classify as write; a read detection during
        a write train means the parameters are corrupt and raises.
        """
        train = make_write_pulse_train(amplitude, t_on, t_off, n)
        trace = self._run(train, self._latch, cfg)
        if CellMode.READ.value in trace.mode:
            row = trace.mode.index(CellMode.READ.value)
            raise ProtocolViolationError(
                f"read mode detected during write at t={trace.t[row]} "
                f"(v_in={trace.v_in[row]}, V_S={trace.v_s[row]})"
            )
        self._device = self._device.with_state(trace.state[-1])
        self.mode = CellMode.IDLE
        self.last_trace = trace
        return self.state

    def read(self, spec: ReadPulseSpec = ReadPulseSpec(),
             cfg: SimConfig = SimConfig()) -> tuple[CellState, ReadResult]:
        """Apply a zero-average bipolar pulse and sample the output bit.

        The bit is taken from the output comparator at the midpoint of the
        negative half. Non-zero-average pulses are rejected here; use
        read_distortion_probe to study them deliberately.
        """
        pulse = make_read_pulse(spec)
        avg = time_average(pulse)
        if avg != 0.0:
            raise ValueError(f"read pulse average {avg} V is not zero")
        state_before = self._device.state
        trace = self._run(pulse, self._latch, cfg)
        sample_time = 1.5 * spec.half_period
        idx = trace.index_at(sample_time)
        if trace.mode[idx] != CellMode.READ.value:
            raise ProtocolViolationError(
                f"read pulse of {spec.amplitude} V never activated the read "
                f"detector (V_S={trace.v_s[idx]} at the sample instant)"
            )
        bit = BIT_HIGH if trace.bit_out[idx] > self._midrail() else BIT_LOW
        self._device = self._device.with_state(trace.state[-1])
        self.mode = CellMode.IDLE
        self.last_trace = trace
        result = ReadResult(bit, trace.t[idx], state_before, trace.state[-1])
        return self.state, result

    def read_distortion_probe(self, pulse: Waveform,
                              cfg: SimConfig = SimConfig()) -> Trace:
        """Trace an arbitrary (possibly non-zero-average) pulse through the cell.

        Analysis only: runs against a copy of the output latch and does not
        advance the stored state, so variants can be compared from the same
        starting point. The trace shows the state corruption a bad pulse
        would cause.
        """
        return self._run(pulse, self._latch.copy(), cfg)

    def _run(self, wave: Waveform, latch: Comparator, cfg: SimConfig) -> Trace:
        run_cfg = replace(cfg, t_end=wave.total_duration)
        probe = DetectorProbe(self.pmos, latch, self.read_threshold)
        return integrate(self._device, wave, run_cfg, probe)

    def _midrail(self) -> float:
        p = self._latch.params
        return (p.v_high + p.v_low) / 2.0
