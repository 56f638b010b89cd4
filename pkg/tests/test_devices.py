"""Unit tests for the element models: memristors, PMOS stage, comparator."""

import math
import random

import pytest

from memcell.devices import (
    CUTOFF,
    SATURATION,
    TRIODE,
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

LIN = LinearMemristorParams(r_on=100.0, r_off=16e3, d=10e-9, mu_v=1e-14)
EMU = EmulatorParams()
PMOS = PmosStageParams()


# ---------------------------------------------------------------- linear model

def test_linear_memristance_limits():
    assert linear_memristance(0.0, LIN) == LIN.r_off
    assert linear_memristance(LIN.d, LIN) == LIN.r_on


def test_linear_memristance_midpoint():
    # convex combination, evaluated by hand: 100*0.5 + 16000*0.5
    assert linear_memristance(LIN.d / 2.0, LIN) == pytest.approx(8050.0, rel=1e-12)


def test_linear_memristance_rejects_out_of_range():
    with pytest.raises(ValueError):
        linear_memristance(-1e-12, LIN)
    with pytest.raises(ValueError):
        linear_memristance(LIN.d * 1.01, LIN)


def test_linear_drift_zero_current_means_zero_drift():
    assert linear_state_derivative(LIN.d / 2.0, 0.0, LIN) == 0.0


def test_linear_drift_sign_follows_current():
    assert linear_state_derivative(LIN.d / 2.0, 1e-4, LIN) > 0.0
    assert linear_state_derivative(LIN.d / 2.0, -1e-4, LIN) < 0.0


def test_linear_drift_formula():
    # 1e-14 * (100 / 1e-8) * 1e-4 = 1e-8 m/s
    got = linear_state_derivative(LIN.d / 2.0, 1e-4, LIN)
    assert got == pytest.approx(1e-8, rel=1e-12)


def test_linear_params_validation():
    with pytest.raises(ValueError):
        LinearMemristorParams(r_on=200.0, r_off=100.0)
    with pytest.raises(ValueError):
        LinearMemristorParams(d=0.0)
    with pytest.raises(ValueError):
        LinearMemristorParams(mu_v=-1e-14)
    with pytest.raises(ValueError):
        LinearMemristor(LIN, state=2 * LIN.d)


# -------------------------------------------------------------- emulator model

def test_emulator_memristance_offset_only():
    assert emulator_memristance(0.0, EMU) == EMU.r0


def test_emulator_memristance_monotone_incremental():
    assert emulator_memristance(1.3, EMU) > emulator_memristance(1.2, EMU)


def test_emulator_memristance_value():
    # r0 + k*v_C = 1e3 + 1e4 * 1.2
    assert emulator_memristance(1.2, EMU) == pytest.approx(13e3, rel=1e-12)


def test_emulator_memristance_decremental():
    p = EmulatorParams(r0=60e3, k=10e3, polarity="decremental")
    assert emulator_memristance(1.0, p) == pytest.approx(50e3)
    assert emulator_memristance(2.0, p) < emulator_memristance(1.0, p)


def test_emulator_derivative_zero_input_holds_state():
    for v_c in (0.0, 1.2, 4.9):
        assert emulator_state_derivative(v_c, 0.0, EMU) == 0.0


def test_emulator_derivative_value():
    # 1.5 V across 13 kOhm into 1 uF
    got = emulator_state_derivative(1.2, 1.5, EMU)
    assert got == pytest.approx(115.38461538461539, rel=1e-12)


def test_emulator_derivative_shrinks_as_state_grows():
    d1 = emulator_state_derivative(1.0, 1.0, EMU)
    d2 = emulator_state_derivative(2.0, 1.0, EMU)
    assert 0.0 < d2 < d1


def test_emulator_derivative_singularity():
    p = EmulatorParams(r0=60e3, k=10e3, polarity="decremental")
    with pytest.raises(SingularityError):
        emulator_state_derivative(6.5, 1.0, p)  # outside the validated range


def test_emulator_params_validation():
    with pytest.raises(ValueError):
        EmulatorParams(r0=0.0)
    with pytest.raises(ValueError):
        EmulatorParams(vc_min=2.0, vc_max=1.0)
    with pytest.raises(ValueError):
        EmulatorParams(polarity="sideways")
    with pytest.raises(ValueError):
        # decremental memristance would hit zero inside the state range
        EmulatorParams(r0=10e3, k=10e3, polarity="decremental")
    with pytest.raises(ValueError):
        EmulatorMemristor(EMU, state=5.5)


def test_constant_drive_closed_form_roundtrip():
    t = constant_drive_time(EMU, 0.3, 2.7, 1.5)
    assert t > 0.0
    assert solve_constant_drive(EMU, 0.3, 1.5, t) == pytest.approx(2.7, rel=1e-12)


def test_device_clamp_and_rebind():
    dev = EmulatorMemristor(EMU, 1.0)
    assert dev.clamp(9.0) == EMU.vc_max
    assert dev.clamp(-1.0) == EMU.vc_min
    assert dev.with_state(2.0).state == 2.0
    assert dev.state == 1.0  # original untouched


def test_pinched_at_origin_property():
    rng = random.Random(20240811)
    lin = LinearMemristor(LIN, state=LIN.d / 2.0)
    emu = EmulatorMemristor(EMU, 0.0)
    for _ in range(50):
        w = rng.uniform(0.0, LIN.d)
        v_c = rng.uniform(0.0, 5.0)
        assert lin.current(w, 0.0) == 0.0
        assert emu.current(v_c, 0.0) == 0.0
        v = rng.uniform(-1e-12, 1e-12)
        assert abs(lin.current(w, v)) < 1e-12
        assert abs(emu.current(v_c, v)) < 1e-12


# ----------------------------------------------------------------- PMOS stage

def test_pmos_positive_input_operating_point():
    v_s, region = pmos_operating_point(1.0, PMOS)
    assert region == SATURATION
    assert abs(v_s - 3.32) < 0.01
    assert v_s == pytest.approx((1.0 + math.sqrt(32.0)) / 2.0, rel=1e-12)


def test_pmos_negative_input_operating_point():
    v_s, region = pmos_operating_point(-1.0, PMOS)
    assert region == TRIODE
    assert abs(v_s - 2.0) < 0.01


def test_pmos_write_peak_stays_on_write_side():
    # a full-scale 5 V pulse must never look like a read
    v_s, region = pmos_operating_point(5.0, PMOS)
    assert region == CUTOFF
    assert v_s == PMOS.v_dd
    assert v_s > 2.2


def test_pmos_idle_input():
    v_s = pmos_source_voltage(0.0, PMOS)
    assert v_s == pytest.approx(2.6622776601683795, rel=1e-12)
    assert v_s > 2.2


def test_pmos_region_self_consistency():
    vt = abs(PMOS.v_t)
    for v_g in [x / 10.0 for x in range(-50, 51)]:
        v_s, region = pmos_operating_point(v_g, PMOS)
        assert 0.0 <= v_s <= PMOS.v_dd
        i_res = (PMOS.v_dd - v_s) / PMOS.r_load
        v_sg = v_s - v_g
        if region == CUTOFF:
            assert v_sg <= vt + 1e-9
            assert i_res == pytest.approx(0.0, abs=1e-12)
            continue
        v_sd = v_s  # drain grounded
        if region == SATURATION:
            assert v_sd >= v_sg - vt - 1e-9
            i_dev = 0.5 * PMOS.k_const * (v_sg - vt) ** 2
        else:
            assert v_sd < v_sg - vt
            i_dev = PMOS.k_const * ((v_sg - vt) * v_sd - v_sd ** 2 / 2.0)
        assert i_res == pytest.approx(i_dev, abs=1e-9)


def test_pmos_rejects_nonfinite_gate():
    with pytest.raises(ValueError):
        pmos_source_voltage(math.nan, PMOS)


def test_pmos_params_validation():
    with pytest.raises(ValueError):
        PmosStageParams(v_t=0.5)
    with pytest.raises(ValueError):
        PmosStageParams(r_load=0.0)


# ------------------------------------------------------ comparator, attenuator

def test_comparator_positive_overdrive():
    assert comparator_out(3.0, 2.5) == 5.0


def test_comparator_negative_overdrive():
    assert comparator_out(1.2, 2.5) == 0.0


def test_comparator_tie_holds_previous():
    assert comparator_out(2.5, 2.5, previous=0.0) == 0.0
    assert comparator_out(2.5, 2.5, previous=5.0) == 5.0
    p = ComparatorParams()
    assert comparator_out(2.5 + p.tie_epsilon / 2.0, 2.5, p, previous=0.0) == 0.0


def test_comparator_output_always_rail_to_rail():
    rng = random.Random(7)
    latch = Comparator()
    for _ in range(200):
        out = latch.compare(rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0))
        assert out in (0.0, 5.0)


def test_comparator_latch_powers_up_high():
    assert Comparator().output == 5.0


def test_comparator_params_validation():
    with pytest.raises(ValueError):
        ComparatorParams(v_high=0.0, v_low=5.0)
    with pytest.raises(ValueError):
        ComparatorParams(tie_epsilon=-1e-9)


def test_attenuator_halves():
    assert attenuator_reference(5.0) == 2.5
    assert attenuator_reference(0.0) == 0.0
    assert attenuator_reference(3.3) == pytest.approx(1.65)
    with pytest.raises(ValueError):
        attenuator_reference(-0.1)
