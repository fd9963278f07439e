"""Flat ``key = value`` scenario files with explicit unit suffixes.

Frequencies given in Hz, kHz, MHz, GHz or THz are ordinary frequencies and
are multiplied by 2 pi; ``rad/s``, ``1/s`` and ``s^-1`` are taken verbatim.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from ..constants import AMU
from ..dynamics import CoMState, ModulationSpec
from ..errors import PhotoAbsorbError
from ..physcore import AtomSpec, PulseSpec, TrapSpec

TWO_PI = 2 * math.pi
UNITS = {
    "freq": {
        "rad/s": 1.0,
        "1/s": 1.0,
        "s^-1": 1.0,
        "Hz": TWO_PI,
        "kHz": TWO_PI * 1e3,
        "MHz": TWO_PI * 1e6,
        "GHz": TWO_PI * 1e9,
        "THz": TWO_PI * 1e12,
    },
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9, "ps": 1e-12},
    "mass": {"u": AMU, "kg": 1.0},
    "temp": {"K": 1.0, "mK": 1e-3, "uK": 1e-6, "nK": 1e-9},
    "angle": {"rad": 1.0, "": 1.0},
}
STATES = ("ground", "thermal", "doppler", "squeezed", "squeezed-thermal", "fock")
SWEEP_KINDS = {"omega_T": "freq", "gamma": "freq", "nbar": "float", "temperature": "temp"}

# key -> (kind, default text); a default of None marks an optional key
SCHEMA = {
    "omega_eg": ("freq", None),
    "gamma": ("freq", None),
    "mass": ("mass", None),
    "omega_T": ("freq", None),
    "omega_x": ("freq", None),
    "omega_y": ("freq", None),
    "omega_z": ("freq", None),
    "state": ("choice", "ground"),
    "state_nbar": ("float", "0"),
    "state_r": ("float", "0"),
    "state_phi": ("angle", "0"),
    "state_temperature": ("temp", None),
    "t0": ("time", "0 s"),
    "t_out": ("time", None),
    "gamma_duration": ("float", "20"),
    "delta": ("float", None),
    "omega_M": ("freq", None),
    "eta0_min": ("float", "0"),
    "eta0_max": ("float", "3"),
    "eta0_points": ("int", "61"),
    "fig3_eta0": ("list", "0, 1, 2"),
    "gt_min": ("float", "-10"),
    "gt_max": ("float", "5"),
    "gt_points": ("int", "151"),
    "fig4_delta": ("float", "0.5"),
    "fig4_ratios": ("list", "2.0, 2.2, 2.3"),
    "wt_max": ("float", "15"),
    "wt_points": ("int", "151"),
    "mathieu_tol": ("float", "1e-9"),
    "fig5_r": ("list", "0, 1, 2"),
    "x_min": ("float", "0"),
    "x_max": ("float", "1"),
    "x_points": ("int", "101"),
    "sweep_param": ("sweep", "omega_T"),
    "sweep_min": ("raw", None),
    "sweep_max": ("raw", None),
    "sweep_points": ("int", "21"),
    "sweep_scale": ("scale", "linear"),
    "mc_samples": ("int", "200000"),
    "mc_workers": ("int", "1"),
    "seed": ("int", "20150101"),
    "verify": ("bool", "false"),
    "out": ("raw", None),
    # informational keys written into sidecar files
    "tool": ("raw", None),
    "version": ("raw", None),
    "command": ("raw", None),
}
REQUIRED = ("omega_eg", "gamma", "mass")


class ConfigError(PhotoAbsorbError, ValueError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


def parse_quantity(text, kind, line=None):
    """Parse ``<number> [unit]`` for a unit family, returning SI."""
    parts = text.split()
    if not parts or len(parts) > 2:
        raise ConfigError(f"cannot parse quantity {text!r}", line)
    try:
        value = float(parts[0])
    except ValueError:
        raise ConfigError(f"invalid number {parts[0]!r}", line) from None
    unit = parts[1] if len(parts) == 2 else ""
    table = UNITS[kind]
    if unit not in table:
        expected = ", ".join(u for u in table if u) or "no unit"
        raise ConfigError(f"unit {unit!r} not valid here (expected {expected})", line)
    if not math.isfinite(value):
        raise ConfigError("value must be finite", line)
    return value * table[unit]


def _parse_value(key, text, line):
    kind, _ = SCHEMA[key]
    if kind in UNITS:
        return parse_quantity(text, kind, line)
    if kind == "float":
        if len(text.split()) != 1:
            raise ConfigError(f"{key} is dimensionless and takes no unit", line)
        return parse_quantity(text, "angle", line)
    if kind == "int":
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"{key} must be an integer", line) from None
    if kind == "list":
        try:
            values = [float(v) for v in text.split(",")]
        except ValueError:
            raise ConfigError(f"{key} must be a comma-separated list of numbers", line) from None
        if not values or any(b <= a for a, b in zip(values, values[1:])):
            raise ConfigError(f"{key} must be non-empty and strictly increasing", line)
        return tuple(values)
    if kind == "bool":
        low = text.lower()
        if low not in ("true", "false", "1", "0", "yes", "no"):
            raise ConfigError(f"{key} must be true or false", line)
        return low in ("true", "1", "yes")
    if kind == "choice":
        if text not in STATES:
            raise ConfigError(f"state must be one of {', '.join(STATES)}", line)
        return text
    if kind == "sweep":
        if text not in SWEEP_KINDS:
            raise ConfigError(f"sweep_param must be one of {', '.join(SWEEP_KINDS)}", line)
        return text
    if kind == "scale":
        if text not in ("linear", "log"):
            raise ConfigError("sweep_scale must be linear or log", line)
        return text
    return text


def grid(lo, hi, points, scale="linear", name="grid"):
    if points < 1:
        raise ConfigError(f"{name} needs at least one point")
    if points > 1 and not hi > lo:
        raise ConfigError(f"{name} must be increasing (min < max)")
    if scale == "log":
        if lo <= 0:
            raise ConfigError(f"{name} log scale needs a positive minimum")
        return np.geomspace(lo, hi, points)
    return np.linspace(lo, hi, points)


@dataclass
class Scenario:
    """Validated configuration for one CLI run."""

    atom: AtomSpec
    trap: TrapSpec
    pulse: PulseSpec
    modulation: Optional[ModulationSpec]
    state_name: str
    values: Dict[str, object]
    text: Dict[str, str] = field(default_factory=dict)
    lines: Dict[str, int] = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    @property
    def seed(self):
        return self.values["seed"]

    def state(self, trap=None, nbar=None, temperature=None):
        """Centre-of-mass state named in the scenario, optionally re-parametrised."""
        trap = trap or self.trap
        v = self.values
        name = self.state_name
        n = v["state_nbar"] if nbar is None else nbar
        temp = v["state_temperature"] if temperature is None else temperature
        if name == "ground":
            return CoMState.ground()
        if name == "thermal":
            if temp is not None:
                return CoMState.thermal_temperature(temp, trap)
            return CoMState.thermal(n)
        if name == "doppler":
            return CoMState.doppler_limit(self.atom.gamma, trap)
        if name == "squeezed":
            return CoMState.squeezed(v["state_r"], v["state_phi"])
        if name == "squeezed-thermal":
            return CoMState.squeezed_thermal(n, v["state_r"], v["state_phi"])
        return CoMState.fock(int(round(n)))

    def sweep_grid(self):
        v = self.values
        if v["sweep_min"] is None or v["sweep_max"] is None:
            raise ConfigError("sweep needs sweep_min and sweep_max")
        kind = SWEEP_KINDS[v["sweep_param"]]
        lo = _parse_sweep(v["sweep_min"], kind, self.lines.get("sweep_min"))
        hi = _parse_sweep(v["sweep_max"], kind, self.lines.get("sweep_max"))
        return grid(lo, hi, v["sweep_points"], v["sweep_scale"], "sweep grid")

    def metadata(self):
        """Resolved configuration as ordered ``(key, text)`` pairs."""
        skip = {"tool", "version", "command", "verify", "out", "seed"}
        return [(k, self.text[k]) for k in SCHEMA if k in self.text and k not in skip]


def _parse_sweep(text, kind, line):
    if kind == "float":
        return parse_quantity(text, "angle", line)
    return parse_quantity(text, kind, line)


def parse_scenario(text):
    """Parse and validate a scenario file; errors carry the offending line number."""
    raw, lines = {}, {}
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError("expected 'key = value'", number)
        key, value = (s.strip() for s in content.split("=", 1))
        if key not in SCHEMA:
            raise ConfigError(f"unknown key {key!r}", number)
        if key in raw:
            raise ConfigError(
                f"duplicate key {key!r} (first defined on line {lines[key]})", number
            )
        if not value:
            raise ConfigError(f"empty value for {key!r}", number)
        raw[key], lines[key] = value, number

    values, texts = {}, {}
    for key, (kind, default) in SCHEMA.items():
        if key in raw:
            values[key] = _parse_value(key, raw[key], lines[key])
            texts[key] = raw[key]
        elif default is not None:
            values[key] = _parse_value(key, default, None)
            texts[key] = default
        else:
            values[key] = None

    for key in REQUIRED:
        if values[key] is None:
            raise ConfigError(f"missing required key {key!r}")
    axes = [values[k] for k in ("omega_x", "omega_y", "omega_z")]
    if values["omega_T"] is not None:
        if any(a is not None for a in axes):
            raise ConfigError("give either omega_T or omega_x/omega_y/omega_z", lines["omega_T"])
        trap_freqs = (values["omega_T"],) * 3
    elif all(a is not None for a in axes):
        trap_freqs = tuple(axes)
    else:
        raise ConfigError("missing required key 'omega_T' (or all of omega_x, omega_y, omega_z)")

    try:
        atom = AtomSpec(values["omega_eg"], values["gamma"], values["mass"])
        trap = TrapSpec(*trap_freqs)
        t0 = values["t0"]
        if values["t_out"] is not None:
            pulse = PulseSpec(t0, values["t_out"])
        else:
            if values["gamma_duration"] <= 0:
                raise ConfigError("gamma_duration must be positive", lines.get("gamma_duration"))
            pulse = PulseSpec.for_gamma(atom.gamma, values["gamma_duration"], t0)
        modulation = None
        if values["delta"] is not None or values["omega_M"] is not None:
            if values["delta"] is None or values["omega_M"] is None:
                raise ConfigError("modulation needs both delta and omega_M")
            modulation = ModulationSpec(values["delta"], values["omega_M"], t0)
    except ConfigError:
        raise
    except PhotoAbsorbError as exc:
        raise ConfigError(str(exc)) from None

    for key in ("eta0_points", "gt_points", "wt_points", "x_points", "sweep_points"):
        if values[key] < 1:
            raise ConfigError(f"{key} must be at least 1", lines.get(key))
    if values["gt_min"] < -pulse_duration(atom, pulse):
        raise ConfigError("gt_min lies before the preparation time t0", lines.get("gt_min"))
    if values["mc_samples"] < 1000:
        raise ConfigError("mc_samples must be at least 1000", lines.get("mc_samples"))
    if not 1e-12 <= values["mathieu_tol"] <= 1e-4:
        raise ConfigError("mathieu_tol must lie in [1e-12, 1e-4]", lines.get("mathieu_tol"))
    if values["state_r"] < 0 or values["state_nbar"] < 0:
        raise ConfigError("state_r and state_nbar must be non-negative")
    if values["sweep_min"] is not None:
        kind = SWEEP_KINDS[values["sweep_param"]]
        _parse_sweep(values["sweep_min"], kind, lines.get("sweep_min"))
        if values["sweep_max"] is not None:
            _parse_sweep(values["sweep_max"], kind, lines.get("sweep_max"))

    return Scenario(atom, trap, pulse, modulation, values["state"], values, texts, lines)


def pulse_duration(atom, pulse):
    """``gamma (t_out - t0)``."""
    return atom.gamma * (pulse.t_out - pulse.t0)
