"""Behavioral models of the circuit elements in the memory cell.

Two memristive devices are provided. The linear-drift memristor keeps a
dopant boundary position w (meters) between 0 and the film thickness D;
its resistance is the series combination of a doped and an undoped
region. The emulator memristor keeps the voltage of an integrating
capacitor as its state; the effective memristance is an affine function
of that voltage (offset resistor plus gain resistor times capacitor
voltage). In both cases the device is voltage driven:

    d(state)/dt = f(state, v_M)
    i_M         = v_M / M(state)

so i_M = 0 whenever v_M = 0 (pinched at the origin) and the state holds
its value with no applied input (nonvolatility).

The detector-side elements of the read-write cell live here too: the
square-law PMOS source-follower stage (drain grounded, source tied to
the 5 V rail through a load resistor), an ideal latched comparator, and
the two-equal-resistor attenuator that derives the 2.5 V reference from
the rail. Channel-length modulation of the PMOS is neglected.

All quantities are SI (volts, amperes, ohms, farads, meters, seconds).
The PMOS device constant of 1 mA/V^2 is stored as 1e-3 A/V^2.
"""

import math
from dataclasses import dataclass, replace


class SingularityError(ValueError):
    """Effective memristance reached zero or below; the state ODE is singular."""


# ---------------------------------------------------------------------------
# Linear-drift memristor
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearMemristorParams:
    """Constants of the linear ionic-drift model.

    r_on is the fully doped resistance, r_off the fully undoped one,
    d the film thickness in meters and mu_v the average ion mobility
    in m^2 V^-1 s^-1.
    """

    r_on: float = 100.0
    r_off: float = 16e3
    d: float = 10e-9
    mu_v: float = 1e-14

    def __post_init__(self):
        if not (0.0 < self.r_on < self.r_off):
            raise ValueError(f"need 0 < r_on < r_off, got {self.r_on}, {self.r_off}")
        if self.d <= 0.0:
            raise ValueError(f"film thickness must be positive, got {self.d}")
        if self.mu_v <= 0.0:
            raise ValueError(f"ion mobility must be positive, got {self.mu_v}")


def linear_memristance(w: float, p: LinearMemristorParams) -> float:
    """Resistance of the linear model at boundary position w.

    Convex combination r_on*(w/d) + r_off*(1 - w/d); lies in
    [r_on, r_off] for w in [0, d]. Out-of-range w raises, since it
    indicates the caller failed to clamp the state.
    """
    if w < 0.0 or w > p.d:
        raise ValueError(f"state w={w} outside [0, {p.d}]")
    x = w / p.d
    return p.r_on * x + p.r_off * (1.0 - x)


def linear_state_derivative(w: float, i_m: float, p: LinearMemristorParams) -> float:
    """Boundary drift rate dw/dt = mu_v * (r_on / d) * i_M."""
    return p.mu_v * (p.r_on / p.d) * i_m


@dataclass(frozen=True)
class LinearMemristor:
    """Linear-drift memristor as an immutable (params, state) value.

    `state` is the dopant boundary position in meters, kept in [0, d].
    The integrator owns state evolution; use with_state() to rebind.
    """

    params: LinearMemristorParams = LinearMemristorParams()
    state: float = 5e-9

    def __post_init__(self):
        if not (0.0 <= self.state <= self.params.d):
            raise ValueError(f"initial state {self.state} outside [0, {self.params.d}]")

    @property
    def bounds(self) -> tuple[float, float]:
        return (0.0, self.params.d)

    def clamp(self, state: float) -> float:
        return min(max(state, 0.0), self.params.d)

    def memristance(self, state: float) -> float:
        # integrator sub-stages may transiently leave [0, d]; evaluate at the
        # clamped position so the resistance saturates instead of extrapolating
        return linear_memristance(self.clamp(state), self.params)

    def current(self, state: float, v_m: float) -> float:
        return v_m / self.memristance(state)

    def state_derivative(self, state: float, v_m: float) -> float:
        dw = linear_state_derivative(state, self.current(state, v_m), self.params)
        return _zero_outward(state, dw, 0.0, self.params.d)

    def with_state(self, state: float) -> "LinearMemristor":
        return replace(self, state=state)


# ---------------------------------------------------------------------------
# Incremental emulator memristor
# ---------------------------------------------------------------------------

INCREMENTAL = "incremental"
DECREMENTAL = "decremental"


@dataclass(frozen=True)
class EmulatorParams:
    """Constants of the capacitor-state emulator.

    Effective memristance is r0 + k*v_C for the incremental polarity and
    r0 - k*v_C for the decremental one; it must stay positive over the
    whole admissible state range [vc_min, vc_max]. The capacitor c
    integrates the memristor current, which is what makes the state
    persist between pulses.
    """

    r0: float = 1e3
    k: float = 10e3
    c: float = 1e-6
    polarity: str = INCREMENTAL
    vc_min: float = 0.0
    vc_max: float = 5.0

    def __post_init__(self):
        if self.r0 <= 0.0 or self.k <= 0.0 or self.c <= 0.0:
            raise ValueError("r0, k and c must all be positive")
        if self.vc_min >= self.vc_max:
            raise ValueError(f"need vc_min < vc_max, got [{self.vc_min}, {self.vc_max}]")
        if self.polarity not in (INCREMENTAL, DECREMENTAL):
            raise ValueError(f"unknown polarity {self.polarity!r}")
        for v in (self.vc_min, self.vc_max):
            if emulator_memristance(v, self) <= 0.0:
                raise ValueError(
                    f"effective memristance non-positive at v_C={v}; "
                    "shrink the state range or fix r0/k"
                )


def emulator_memristance(v_c: float, p: EmulatorParams) -> float:
    """Effective memristance r0 +/- k*v_C depending on polarity."""
    if p.polarity == INCREMENTAL:
        return p.r0 + p.k * v_c
    return p.r0 - p.k * v_c


def emulator_state_derivative(v_c: float, v_m: float, p: EmulatorParams) -> float:
    """Capacitor charging rate dv_C/dt = i_M / c = v_M / (M(v_C) * c).

    Raises SingularityError if the memristance is not positive, which can
    only happen when v_c is outside the validated state range.
    """
    m = emulator_memristance(v_c, p)
    if m <= 0.0:
        raise SingularityError(f"memristance {m} <= 0 at v_C={v_c}")
    return v_m / (m * p.c)


@dataclass(frozen=True)
class EmulatorMemristor:
    """Emulator memristor as an immutable (params, state) value.

    `state` is the capacitor voltage in volts, kept in [vc_min, vc_max].
    """

    params: EmulatorParams = EmulatorParams()
    state: float = 0.0

    def __post_init__(self):
        if not (self.params.vc_min <= self.state <= self.params.vc_max):
            raise ValueError(
                f"initial state {self.state} outside "
                f"[{self.params.vc_min}, {self.params.vc_max}]"
            )

    @property
    def bounds(self) -> tuple[float, float]:
        return (self.params.vc_min, self.params.vc_max)

    def clamp(self, state: float) -> float:
        return min(max(state, self.params.vc_min), self.params.vc_max)

    def memristance(self, state: float) -> float:
        return emulator_memristance(state, self.params)

    def current(self, state: float, v_m: float) -> float:
        return v_m / emulator_memristance(state, self.params)

    def state_derivative(self, state: float, v_m: float) -> float:
        dv = emulator_state_derivative(state, v_m, self.params)
        return _zero_outward(state, dv, self.params.vc_min, self.params.vc_max)

    def with_state(self, state: float) -> "EmulatorMemristor":
        return replace(self, state=state)


def solve_constant_drive(p: EmulatorParams, v0: float, v_m: float, t: float) -> float:
    """Exact state of the incremental emulator after holding v_m for t seconds.

    Separating dv/dt = v_m / (c*(r0 + k*v)) gives
        r0*(v - v0) + k/2*(v^2 - v0^2) = v_m * t / c
    whose positive branch is returned. Used to plan write pulse widths;
    the transient engine never calls this.
    """
    if p.polarity != INCREMENTAL:
        raise ValueError("closed form implemented for the incremental polarity only")
    s = (p.r0 + p.k * v0) ** 2 + 2.0 * p.k * v_m * t / p.c
    if s < 0.0:
        raise SingularityError("drive would push the state through the singularity")
    return (-p.r0 + math.sqrt(s)) / p.k


def constant_drive_time(p: EmulatorParams, v0: float, v1: float, v_m: float) -> float:
    """Seconds of constant v_m needed to take the incremental state v0 -> v1."""
    if p.polarity != INCREMENTAL:
        raise ValueError("closed form implemented for the incremental polarity only")
    if v_m == 0.0:
        raise ValueError("zero drive never moves the state")
    return p.c * (p.r0 * (v1 - v0) + 0.5 * p.k * (v1 * v1 - v0 * v0)) / v_m


def _zero_outward(state: float, deriv: float, lo: float, hi: float) -> float:
    # hard clamp semantics: at (or past) a bound the derivative may not point
    # further out
    if state >= hi and deriv > 0.0:
        return 0.0
    if state <= lo and deriv < 0.0:
        return 0.0
    return deriv


# ---------------------------------------------------------------------------
# PMOS source-follower detector stage
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PmosStageParams:
    """Square-law PMOS with grounded drain and a source resistor to the rail.

    v_t is the (negative) threshold voltage, k_const the device constant
    in A/V^2, v_dd the supply and r_load the source resistor. With the
    defaults r_load * k_const = 1 1/V, which keeps the region quadratics
    unit-consistent.
    """

    v_t: float = -0.5
    k_const: float = 1e-3
    v_dd: float = 5.0
    r_load: float = 1e3

    def __post_init__(self):
        if self.v_t >= 0.0:
            raise ValueError(f"PMOS threshold must be negative, got {self.v_t}")
        if self.k_const <= 0.0 or self.r_load <= 0.0:
            raise ValueError("device constant and load resistor must be positive")
        if self.v_dd <= 0.0:
            raise ValueError(f"supply must be positive, got {self.v_dd}")


CUTOFF = "cutoff"
SATURATION = "saturation"
TRIODE = "triode"


def pmos_operating_point(v_g: float, p: PmosStageParams = PmosStageParams()) -> tuple[float, str]:
    """Source voltage and operating region of the detector stage.

    Balances the resistor current (v_dd - V_S)/r_load against the
    square-law drain current, solving the saturation and triode
    quadratics and keeping the root that satisfies its own region
    inequality. With the drain grounded, saturation is self-consistent
    for v_g >= -|v_t| and triode for v_g < -|v_t|; at the exact boundary
    saturation wins. If the gate is so high that the transistor cannot
    conduct, the stage floats at the rail (cutoff).
    """
    if not math.isfinite(v_g):
        raise ValueError(f"gate voltage must be finite, got {v_g}")
    vt = abs(p.v_t)
    if p.v_dd - v_g <= vt:
        return p.v_dd, CUTOFF

    a = p.k_const * p.r_load
    c = v_g + vt  # V_S at which the overdrive vanishes

    if v_g >= -vt:
        # (v_dd - x) = a/2 * (x - c)^2, take the branch with x in [c, v_dd]
        qa, qb, qc = a / 2.0, 1.0 - a * c, a * c * c / 2.0 - p.v_dd
        x = _quadratic_root(qa, qb, qc, lo=max(c, 0.0), hi=p.v_dd)
        if x is not None:
            return x, SATURATION
    else:
        # (v_dd - x) = a * ((x - c)*x - x^2/2), V_SD = x since the drain is grounded
        qa, qb, qc = a / 2.0, 1.0 - a * c, -p.v_dd
        x = _quadratic_root(qa, qb, qc, lo=max(c, 0.0), hi=p.v_dd)
        if x is not None:
            return x, TRIODE

    raise ValueError(f"no self-consistent source voltage for v_g={v_g}")


def pmos_source_voltage(v_g: float, p: PmosStageParams = PmosStageParams()) -> float:
    """Source voltage of the detector stage (see pmos_operating_point)."""
    return pmos_operating_point(v_g, p)[0]


def _quadratic_root(a: float, b: float, c: float, lo: float, hi: float) -> float | None:
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    eps = 1e-9
    for x in ((-b + sq) / (2.0 * a), (-b - sq) / (2.0 * a)):
        if lo - eps <= x <= hi + eps:
            return min(max(x, lo), hi)
    return None


# ---------------------------------------------------------------------------
# Comparator and attenuator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComparatorParams:
    """Ideal high-gain comparator with a tiny tie band.

    Inside |v_plus - v_minus| <= tie_epsilon the previous output is held,
    which avoids chatter at exact equality.
    """

    v_high: float = 5.0
    v_low: float = 0.0
    tie_epsilon: float = 1e-6

    def __post_init__(self):
        if self.v_low >= self.v_high:
            raise ValueError("need v_low < v_high")
        if self.tie_epsilon < 0.0:
            raise ValueError("tie_epsilon must be non-negative")


def comparator_out(
    v_plus: float,
    v_minus: float,
    p: ComparatorParams = ComparatorParams(),
    previous: float | None = None,
) -> float:
    """Rail-to-rail comparison with hold-previous inside the tie band."""
    diff = v_plus - v_minus
    if diff > p.tie_epsilon:
        return p.v_high
    if diff < -p.tie_epsilon:
        return p.v_low
    return p.v_high if previous is None else previous


class Comparator:
    """Comparator with a remembered output, usable as a latch.

    The output only changes inside compare(); holding the value between
    calls is what lets the read circuit retain its state when no read
    pulse is present.
    """

    def __init__(self, params: ComparatorParams = ComparatorParams(), output: float | None = None):
        self.params = params
        self.output = params.v_high if output is None else output

    def compare(self, v_plus: float, v_minus: float) -> float:
        self.output = comparator_out(v_plus, v_minus, self.params, self.output)
        return self.output

    def copy(self) -> "Comparator":
        return Comparator(self.params, self.output)


def attenuator_reference(v_in: float) -> float:
    """Midpoint of an equal-resistor divider: v_in / 2."""
    if v_in < 0.0:
        raise ValueError(f"attenuator input must be non-negative, got {v_in}")
    return v_in / 2.0
