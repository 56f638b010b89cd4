"""Transient simulator for a memristor-emulator based nonvolatile memory cell."""

from .devices import (
    Comparator,
    ComparatorParams,
    EmulatorMemristor,
    EmulatorParams,
    LinearMemristor,
    LinearMemristorParams,
    PmosStageParams,
    SingularityError,
    attenuator_reference,
    comparator_out,
    constant_drive_time,
    emulator_memristance,
    emulator_state_derivative,
    linear_memristance,
    linear_state_derivative,
    pmos_operating_point,
    pmos_source_voltage,
    solve_constant_drive,
)
from .signals import (
    ConstantSegment,
    ReadPulseSpec,
    SineSegment,
    Waveform,
    make_read_pulse,
    make_sine,
    make_write_pulse_train,
    time_average,
)
from .engine import (
    SimConfig,
    SimulationError,
    Trace,
    concat_traces,
    hysteresis_metrics,
    integrate,
    staircase_profile,
)
from .cell import (
    BIT_HIGH,
    BIT_LOW,
    CellMode,
    CellState,
    DetectorProbe,
    MemoryCell,
    ProtocolViolationError,
    ReadResult,
    detect_mode,
    restoration_tolerance,
)

__version__ = "0.1.0"
