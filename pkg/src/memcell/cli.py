"""Command-line scenario runner.

    memcell <scenario> [--config FILE] [--dt S] [--out DIR] [options...]

Scenarios: hysteresis, program, readwrite, distortion, sweep. Parameters
come from built-in defaults, overridden by a flat JSON config file,
overridden again by command-line flags. Unknown config keys are
rejected before anything runs. The output directory defaults to the
MEMCELL_OUT environment variable, then ./memcell-out.

Exit codes: 0 when every metric check passes, 1 when any check fails or
the protocol machine aborts, 2 for configuration or I/O errors.
"""

import argparse
import json
import os
import sys

from .cell import ProtocolViolationError
from .engine import EULER, RK4, SimConfig, SimulationError
from . import scenarios
from .scenarios import Summary, biased_read_pulse
from .signals import ReadPulseSpec, make_read_pulse


class ConfigError(Exception):
    pass


COMMON_KEYS = {"scenario", "dt", "method", "record_stride", "out", "figures"}

SCENARIO_KEYS = {
    "hysteresis": {"frequencies", "amplitude", "initial_state", "periods"},
    "program": {"amplitude", "t_on", "t_off", "pulses", "initial_state"},
    "readwrite": {"write_level", "write_amplitude", "write_pulses",
                  "read_amplitude", "read_half_period"},
    "distortion": {"initial_state", "variants"},
    "sweep": {"states", "read_amplitude", "read_half_period"},
}

DEFAULTS = {
    "hysteresis": {"frequencies": [100.0, 400.0], "amplitude": 1.0,
                   "initial_state": 1.0, "periods": 2, "record_stride": 1},
    "program": {"amplitude": 1.0, "t_on": 5e-3, "t_off": 5e-3, "pulses": 10,
                "initial_state": 0.0, "record_stride": 10},
    "readwrite": {"write_level": 1.2, "write_amplitude": 1.0, "write_pulses": 4,
                  "read_amplitude": 1.0, "read_half_period": 15e-3,
                  "record_stride": 10},
    "distortion": {"initial_state": 1.2, "variants": None, "record_stride": 10},
    "sweep": {"states": [0.5, 1.2, 2.0, 3.0, 4.0, 4.8], "read_amplitude": 1.0,
              "read_half_period": 15e-3, "record_stride": 10},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memcell",
        description="Transient experiments on the memristor-emulator memory cell",
    )
    sub = parser.add_subparsers(dest="scenario", required=True)
    for name in SCENARIO_KEYS:
        p = sub.add_parser(name, help=f"run the {name} scenario")
        p.add_argument("--config", help="flat JSON config file for this scenario")
        p.add_argument("--dt", type=float, help="integration step in seconds")
        p.add_argument("--out", help="output directory for CSV traces and figures")
        p.add_argument("--method", choices=[RK4, EULER], help="integration method")
        p.add_argument("--record-stride", type=int, dest="record_stride",
                       help="record every Nth step")
        p.add_argument("--no-figures", dest="figures", action="store_false",
                       default=None, help="emit CSVs only, skip PNG rendering")
    sub.choices["hysteresis"].add_argument(
        "--freq", type=float, action="append", dest="frequencies",
        help="drive frequency in Hz (repeatable)")
    sub.choices["hysteresis"].add_argument("--amplitude", type=float)
    sub.choices["hysteresis"].add_argument("--initial-state", type=float,
                                           dest="initial_state")
    sub.choices["hysteresis"].add_argument("--periods", type=int)
    sub.choices["program"].add_argument("--amplitude", type=float)
    sub.choices["program"].add_argument("--t-on", type=float, dest="t_on")
    sub.choices["program"].add_argument("--t-off", type=float, dest="t_off")
    sub.choices["program"].add_argument("--pulses", type=int)
    sub.choices["program"].add_argument("--initial-state", type=float,
                                        dest="initial_state")
    sub.choices["readwrite"].add_argument("--write-level", type=float,
                                          dest="write_level",
                                          help="target stored state in volts")
    sub.choices["readwrite"].add_argument("--write-amplitude", type=float,
                                          dest="write_amplitude")
    sub.choices["readwrite"].add_argument("--pulses", type=int, dest="write_pulses")
    sub.choices["readwrite"].add_argument("--read-amplitude", type=float,
                                          dest="read_amplitude")
    sub.choices["readwrite"].add_argument("--read-half-period", type=float,
                                          dest="read_half_period")
    sub.choices["distortion"].add_argument("--initial-state", type=float,
                                           dest="initial_state")
    sub.choices["sweep"].add_argument("--state", type=float, action="append",
                                      dest="states",
                                      help="stored state to read back (repeatable)")
    sub.choices["sweep"].add_argument("--read-amplitude", type=float,
                                      dest="read_amplitude")
    sub.choices["sweep"].add_argument("--read-half-period", type=float,
                                      dest="read_half_period")
    return parser


def load_config(path: str, scenario: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    allowed = COMMON_KEYS | SCENARIO_KEYS[scenario]
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(
            f"unknown keys in {path} for scenario {scenario!r}: {', '.join(unknown)}"
        )
    declared = data.get("scenario")
    if declared is not None and declared != scenario:
        raise ConfigError(
            f"config file {path} declares scenario {declared!r}, "
            f"but {scenario!r} was requested"
        )
    return data


def merge_params(args: argparse.Namespace) -> dict:
    """defaults <- config file <- explicit CLI flags."""
    scenario = args.scenario
    params = dict(DEFAULTS[scenario])
    params.setdefault("dt", 1e-6)
    params.setdefault("method", RK4)
    params.setdefault("figures", True)
    params.setdefault("out", None)

    if args.config:
        file_values = load_config(args.config, scenario)
        file_values.pop("scenario", None)
        params.update(file_values)

    for key in SCENARIO_KEYS[scenario] | {"dt", "method", "record_stride", "out", "figures"}:
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value

    if params["out"] is None:
        params["out"] = os.environ.get("MEMCELL_OUT", "memcell-out")
    return params


def _validated_sim(params: dict) -> SimConfig:
    try:
        # t_end is chosen per run by the scenario; the placeholder only has
        # to satisfy the dt <= t_end constraint
        return SimConfig(dt=params["dt"], t_end=max(1.0, params["dt"]),
                         method=params["method"],
                         record_stride=params["record_stride"])
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc))


def _build_variants(raw) -> list | None:
    if raw is None:
        return None
    if not isinstance(raw, list):
        raise ConfigError("variants must be a list of objects")
    out = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise ConfigError(f"variant {i} must be an object")
        unknown = sorted(set(item) - {"label", "amplitude", "t_positive", "t_negative",
                                      "half_period"})
        if unknown:
            raise ConfigError(f"variant {i} has unknown keys: {', '.join(unknown)}")
        label = item.get("label", f"variant_{i}")
        amplitude = float(item.get("amplitude", 1.0))
        try:
            if "half_period" in item:
                wave = make_read_pulse(ReadPulseSpec(amplitude, float(item["half_period"])))
            else:
                wave = biased_read_pulse(amplitude, float(item["t_positive"]),
                                         float(item["t_negative"]))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"variant {i} ({label}): {exc}")
        out.append((label, wave))
    return out


def run_scenario(params: dict, scenario: str) -> Summary:
    sim = _validated_sim(params)
    common = dict(sim=sim, out_dir=params["out"], figures=bool(params["figures"]))
    if scenario == "hysteresis":
        return scenarios.run_hysteresis(
            [float(f) for f in params["frequencies"]],
            amplitude=float(params["amplitude"]),
            initial_state=float(params["initial_state"]),
            periods=int(params["periods"]), **common)
    if scenario == "program":
        return scenarios.run_program(
            amplitude=float(params["amplitude"]), t_on=float(params["t_on"]),
            t_off=float(params["t_off"]), pulses=int(params["pulses"]),
            initial_state=float(params["initial_state"]), **common)
    if scenario == "readwrite":
        return scenarios.run_readwrite(
            write_level=float(params["write_level"]),
            read_amplitude=float(params["read_amplitude"]),
            read_half_period=float(params["read_half_period"]),
            write_amplitude=float(params["write_amplitude"]),
            write_pulses=int(params["write_pulses"]), **common)
    if scenario == "distortion":
        return scenarios.run_distortion(
            variants=_build_variants(params["variants"]),
            initial_state=float(params["initial_state"]), **common)
    if scenario == "sweep":
        return scenarios.run_sweep(
            states=[float(s) for s in params["states"]],
            read_amplitude=float(params["read_amplitude"]),
            read_half_period=float(params["read_half_period"]), **common)
    raise ConfigError(f"unknown scenario {scenario!r}")


def print_summary(summary: Summary) -> None:
    print(f"scenario: {summary.scenario}")
    for path in summary.artifacts:
        print(f"  wrote {path}")
    for note in summary.notes:
        print(f"  note: {note}")
    for check in summary.checks:
        print(f"{'PASS' if check.passed else 'FAIL'} {check.label}: {check.detail}")
    print(f"result: {'PASS' if summary.passed else 'FAIL'}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = merge_params(args)
        summary = run_scenario(params, args.scenario)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except (ProtocolViolationError, SimulationError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print_summary(summary)
    return 0 if summary.passed else 1


if __name__ == "__main__":
    sys.exit(main())
