"""Flat-file run configuration.

Format: UTF-8 text, one `dotted.key = value` per line, `#` starts a
comment.  Every frequency-like value is entered as the plain number of
the x(2 pi) MHz convention (e.g. `mw.omega_L = 40` means a Rabi frequency
of 40 x 2 pi MHz).  Unset keys fall back to the reference operating point
below, so a bare `spectrum` run reproduces the stock absorption figure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .optimizer import ConstraintBox
from .system import SystemParams


class ConfigError(ValueError):
    pass


COMMANDS = ("spectrum", "heterodyne", "optimize", "map", "bound", "validate")

# key -> (kind, default); kind "opt*" accepts the literal "auto" (-> None)
_SCHEMA: dict[str, tuple[str, object]] = {
    "command": ("str", None),
    "output": ("str", None),
    "laser.omega_p": ("float", 0.1),
    "laser.omega_c": ("float", 10.0),
    "laser.delta_p": ("float", 0.0),
    "laser.delta_c": ("float", 5.0 + 1.8135 / 2),
    "mw.omega_L": ("float", 40.0),
    "mw.omega_s": ("float", 0.0),
    "mw.delta_f": ("float", 1e-3),
    "mw.delta_M": ("float", 600.0),
    "rf.A": ("float", 5.0),
    "rf.A_prime": ("float", 5.0 + 0.5 * 401.209),
    "rf.omega": ("float", 401.209),
    "decay.gamma1": ("float", 0.0),
    "decay.gamma2": ("float", 5.0),
    "decay.gamma3": ("float", 0.003),
    "decay.gamma4": ("float", 0.003),
    "model.k": ("int", 1),
    "numerics.n_max": ("int", 40),
    "numerics.m_max": ("int", 50),
    "numerics.dt": ("optfloat", None),
    "numerics.burn_in": ("optfloat", None),
    "numerics.window_periods": ("optint", None),
    "spectrum.delta_p_min": ("float", -30.0),
    "spectrum.delta_p_max": ("float", 30.0),
    "spectrum.points": ("int", 401),
    "heterodyne.samples_per_period": ("int", 256),
    "heterodyne.periods": ("int", 2),
    "heterodyne.delta_p_probe": ("optfloat", None),
    "heterodyne.kappa": ("float", 1.0),
    "heterodyne.omega_s": ("float", 1.0),
    "bound.k": ("int", 1),
    "bound.ratio_min": ("float", 0.02),
    "bound.ratio_max": ("float", 8.0),
    "bound.points": ("int", 400),
    "box.a_max": ("float", 500.0),
    "box.omega_min": ("float", 100.0),
    "box.omega_max": ("float", 500.0),
    "map.delta_min": ("float", 100.0),
    "map.delta_max": ("float", 2000.0),
    "map.step": ("float", 10.0),
    "optimize.delta_M": ("float", 600.0),
    "sensitivity.baseline": ("float", 20.0),
    "validate.checks": ("str", "all"),
}


def parse_config_text(text: str) -> dict[str, str]:
    """Raw key -> value strings; duplicate or malformed lines are errors."""
    data: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        if key in data:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        data[key] = value
    return data


def _coerce(key: str, kind: str, raw: str):
    if kind.startswith("opt") and raw.lower() == "auto":
        return None
    try:
        if kind in ("float", "optfloat"):
            return float(raw)
        if kind in ("int", "optint"):
            return int(raw)
        return raw
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {raw!r} as {kind}") from None


@dataclass
class RunConfig:
    command: str
    output: Path
    values: dict[str, object]
    explicit: set[str] = field(default_factory=set)

    def __getitem__(self, key: str):
        return self.values[key]

    def params(self, omega_s_override: float | None = None) -> SystemParams:
        v = self.values
        omega_s = v["mw.omega_s"] if omega_s_override is None else omega_s_override
        return SystemParams(
            omega_p_rabi=v["laser.omega_p"],
            omega_c_rabi=v["laser.omega_c"],
            delta_p=v["laser.delta_p"],
            delta_c=v["laser.delta_c"],
            omega_L=v["mw.omega_L"],
            omega_s=omega_s,
            delta_f=v["mw.delta_f"],
            delta_M=v["mw.delta_M"],
            A=v["rf.A"],
            A_prime=v["rf.A_prime"],
            omega=v["rf.omega"],
            gamma=(v["decay.gamma1"], v["decay.gamma2"],
                   v["decay.gamma3"], v["decay.gamma4"]),
        )

    def box(self) -> ConstraintBox:
        return ConstraintBox(a_max=self.values["box.a_max"],
                             omega_min=self.values["box.omega_min"],
                             omega_max=self.values["box.omega_max"])


def load_run_config(config_path: Path | str | None = None,
                    command: str | None = None,
                    output: Path | str | None = None) -> RunConfig:
    """Merge file keys over defaults; CLI command/output take precedence."""
    raw: dict[str, str] = {}
    if config_path is not None:
        path = Path(config_path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        raw = parse_config_text(text)

    unknown = sorted(set(raw) - set(_SCHEMA))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

    values: dict[str, object] = {}
    for key, (kind, default) in _SCHEMA.items():
        values[key] = _coerce(key, kind, raw[key]) if key in raw else default

    chosen = command or values["command"]
    if chosen is None:
        raise ConfigError(
            f"no command given; pass one of {', '.join(COMMANDS)} on the command line "
            "or set `command = ...` in the config"
        )
    if chosen not in COMMANDS:
        raise ConfigError(f"unknown command {chosen!r}; expected one of {', '.join(COMMANDS)}")

    out = output or values["output"] or f"{chosen}.csv"
    return RunConfig(command=chosen, output=Path(out), values=values,
                     explicit=set(raw))


def reference_params() -> SystemParams:
    """The stock operating point (all spectroscopy defaults)."""
    return load_run_config(command="spectrum").params()
