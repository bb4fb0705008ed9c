"""Run configuration: flat INI-style files with explicit units in key names.

Every physical quantity carries its unit in the key name (bandwidth_hz,
power_dbm) because unit slips are the dominant failure mode in this kind
of link-budget code. dBm/dB values are converted to SI exactly once, when
the model objects are built. A bundled default_scenario.cfg encodes the
reference experiment scenario.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from importlib import resources

from .allocation import SelectionConstraints, gap_threshold
from .channel import MODES
from .geometry import ReflectorDescriptor, RisDescriptor, ScatterDescriptor, Scene
from .sweep import GridSpec
from .waveform import WaveformConfig, noise_psd_from_figure

DEFAULT_CONFIG_RESOURCE = "data/default_scenario.cfg"


class ConfigError(ValueError):
    """Invalid, missing, or unknown configuration content."""


_SCHEMA = {
    "scene": {
        "required": ("wall_offset_m", "ris_centers_x_m", "ris_elements"),
        "optional": ("reflector_h1_m", "reflector_h2_m", "reflector_gamma",
                     "scatter_x_m", "scatter_rcs_m2"),
    },
    "waveform": {
        "required": ("carrier_hz", "bandwidth_hz", "subcarrier_count",
                     "power_dbm", "noise_figure_db"),
        "optional": (),
    },
    "grid": {
        "required": ("x_min_m", "x_max_m", "y_min_m", "y_max_m", "nx", "ny"),
        "optional": (),
    },
    "run": {
        "required": ("mode", "k_bar", "peb_cap_m", "workers", "out_dir"),
        "optional": (),
    },
}

_REFLECTOR_KEYS = ("reflector_h1_m", "reflector_h2_m", "reflector_gamma")
_SCATTER_KEYS = ("scatter_x_m", "scatter_rcs_m2")


@dataclass(frozen=True)
class RunConfig:
    """Complete description of one run: scene, waveform, grid, and task.

    Stores boundary units as given (dBm, dB); scene()/waveform()/grid()
    build the validated model objects in SI units.
    """

    wall_offset_m: float
    ris_centers_x_m: tuple[float, ...]
    ris_elements: int
    reflector_h1_m: float | None
    reflector_h2_m: float | None
    reflector_gamma: float | None
    scatter_x_m: float | None
    scatter_rcs_m2: float | None
    carrier_hz: float
    bandwidth_hz: float
    subcarrier_count: int
    power_dbm: float
    noise_figure_db: float
    x_min_m: float
    x_max_m: float
    y_min_m: float
    y_max_m: float
    nx: int
    ny: int
    mode: str
    k_bar: int
    peb_cap_m: float
    workers: int
    out_dir: str

    def scene(self) -> Scene:
        ris = tuple(
            RisDescriptor(center_x=cx, element_count=self.ris_elements)
            for cx in self.ris_centers_x_m
        )
        reflector = None
        if self.reflector_gamma is not None:
            reflector = ReflectorDescriptor(
                h1=self.reflector_h1_m, h2=self.reflector_h2_m,
                gamma=self.reflector_gamma,
            )
        scatterer = None
        if self.scatter_rcs_m2 is not None:
            scatterer = ScatterDescriptor(
                x=self.scatter_x_m, rcs=self.scatter_rcs_m2,
            )
        spacing = None
        if len(ris) >= 2:
            spacing = self.ris_centers_x_m[1] - self.ris_centers_x_m[0]
        return Scene(wall_offset=self.wall_offset_m, ris=ris,
                     reflector=reflector, scatterer=scatterer,
                     ris_spacing=spacing)

    def waveform(self) -> WaveformConfig:
        return WaveformConfig(
            carrier_hz=self.carrier_hz,
            bandwidth_hz=self.bandwidth_hz,
            subcarrier_count=self.subcarrier_count,
            tx_power_w=1e-3 * 10.0 ** (self.power_dbm / 10.0),
            noise_psd_w_hz=noise_psd_from_figure(self.noise_figure_db),
        )

    def grid(self) -> GridSpec:
        return GridSpec(x_range=(self.x_min_m, self.x_max_m),
                        y_range=(self.y_min_m, self.y_max_m),
                        nx=self.nx, ny=self.ny)

    def selection_constraints(self) -> SelectionConstraints:
        return SelectionConstraints(
            k_bar=self.k_bar,
            min_gap=gap_threshold(self.scene(), self.waveform()),
            peb_cap=self.peb_cap_m,
        )


def _parse_float(raw: str, where: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{where}: expected a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{where}: value must be finite, got {raw!r}")
    return value


def _parse_int(raw: str, where: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{where}: expected an integer, got {raw!r}") from None


def _parse_float_list(raw: str, where: str) -> tuple[float, ...]:
    items = [item.strip() for item in raw.split(",")]
    return tuple(_parse_float(item, where) for item in items if item)


class _Section:
    def __init__(self, parser: configparser.ConfigParser, name: str, source: str):
        self.name = name
        self.source = source
        if not parser.has_section(name):
            raise ConfigError(f"{source}: missing section [{name}]")
        self.items = dict(parser.items(name))
        known = set(_SCHEMA[name]["required"]) | set(_SCHEMA[name]["optional"])
        for key in self.items:
            if key not in known:
                raise ConfigError(f"{source}: unknown key {name}.{key}")
        for key in _SCHEMA[name]["required"]:
            if key not in self.items:
                raise ConfigError(f"{source}: missing key {name}.{key}")

    def where(self, key: str) -> str:
        return f"{self.source}: {self.name}.{key}"

    def raw(self, key: str) -> str | None:
        return self.items.get(key)

    def floatval(self, key: str) -> float:
        return _parse_float(self.items[key], self.where(key))

    def intval(self, key: str) -> int:
        return _parse_int(self.items[key], self.where(key))

    def opt_float(self, key: str) -> float | None:
        raw = self.items.get(key)
        return None if raw is None else _parse_float(raw, self.where(key))


def _optional_group(section: _Section, keys) -> bool:
    present = [key for key in keys if section.raw(key) is not None]
    if present and len(present) != len(keys):
        missing = ", ".join(sorted(set(keys) - set(present)))
        raise ConfigError(
            f"{section.source}: section [{section.name}] sets {present[0]} "
            f"but not {missing}"
        )
    return bool(present)


def loads_config(text: str, source: str = "<string>") -> RunConfig:
    """Parse configuration text; errors name the offending section.key."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",),
                                       interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None

    scene_sec = _Section(parser, "scene", source)
    wave_sec = _Section(parser, "waveform", source)
    grid_sec = _Section(parser, "grid", source)
    run_sec = _Section(parser, "run", source)

    has_reflector = _optional_group(scene_sec, _REFLECTOR_KEYS)
    has_scatter = _optional_group(scene_sec, _SCATTER_KEYS)

    mode = run_sec.items["mode"].strip()
    if mode not in MODES:
        raise ConfigError(
            f"{run_sec.where('mode')}: expected one of {', '.join(MODES)}, "
            f"got {mode!r}"
        )

    config = RunConfig(
        wall_offset_m=scene_sec.floatval("wall_offset_m"),
        ris_centers_x_m=_parse_float_list(
            scene_sec.items["ris_centers_x_m"],
            scene_sec.where("ris_centers_x_m")),
        ris_elements=scene_sec.intval("ris_elements"),
        reflector_h1_m=scene_sec.opt_float("reflector_h1_m") if has_reflector else None,
        reflector_h2_m=scene_sec.opt_float("reflector_h2_m") if has_reflector else None,
        reflector_gamma=scene_sec.opt_float("reflector_gamma") if has_reflector else None,
        scatter_x_m=scene_sec.opt_float("scatter_x_m") if has_scatter else None,
        scatter_rcs_m2=scene_sec.opt_float("scatter_rcs_m2") if has_scatter else None,
        carrier_hz=wave_sec.floatval("carrier_hz"),
        bandwidth_hz=wave_sec.floatval("bandwidth_hz"),
        subcarrier_count=wave_sec.intval("subcarrier_count"),
        power_dbm=wave_sec.floatval("power_dbm"),
        noise_figure_db=wave_sec.floatval("noise_figure_db"),
        x_min_m=grid_sec.floatval("x_min_m"),
        x_max_m=grid_sec.floatval("x_max_m"),
        y_min_m=grid_sec.floatval("y_min_m"),
        y_max_m=grid_sec.floatval("y_max_m"),
        nx=grid_sec.intval("nx"),
        ny=grid_sec.intval("ny"),
        mode=mode,
        k_bar=run_sec.intval("k_bar"),
        peb_cap_m=run_sec.floatval("peb_cap_m"),
        workers=run_sec.intval("workers"),
        out_dir=run_sec.items["out_dir"].strip(),
    )
    _validate(config, source)
    return config


def _validate(config: RunConfig, source: str) -> None:
    if config.k_bar < 0:
        raise ConfigError(f"{source}: run.k_bar must be nonnegative")
    if config.workers < 1:
        raise ConfigError(f"{source}: run.workers must be at least 1")
    if config.peb_cap_m <= 0.0:
        raise ConfigError(f"{source}: run.peb_cap_m must be positive")
    if config.noise_figure_db < 0.0:
        raise ConfigError(f"{source}: waveform.noise_figure_db must be >= 0")
    try:
        scene = config.scene()
        config.waveform()
        grid = config.grid()
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    if grid.y_range[1] >= scene.wall_offset:
        raise ConfigError(f"{source}: grid.y_max_m must lie below the wall")


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_config(fh.read(), source=str(path))


def default_config() -> RunConfig:
    ref = resources.files("rispeb").joinpath(DEFAULT_CONFIG_RESOURCE)
    return loads_config(ref.read_text(encoding="utf-8"),
                        source=DEFAULT_CONFIG_RESOURCE)


def _fmt_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dumps_config(config: RunConfig) -> str:
    """Render a config as text that reparses to an identical RunConfig."""
    lines = ["[scene]"]
    lines.append(f"wall_offset_m = {config.wall_offset_m!r}")
    centers = ", ".join(repr(c) for c in config.ris_centers_x_m)
    lines.append(f"ris_centers_x_m = {centers}")
    lines.append(f"ris_elements = {config.ris_elements}")
    if config.reflector_gamma is not None:
        lines.append(f"reflector_h1_m = {config.reflector_h1_m!r}")
        lines.append(f"reflector_h2_m = {config.reflector_h2_m!r}")
        lines.append(f"reflector_gamma = {config.reflector_gamma!r}")
    if config.scatter_rcs_m2 is not None:
        lines.append(f"scatter_x_m = {config.scatter_x_m!r}")
        lines.append(f"scatter_rcs_m2 = {config.scatter_rcs_m2!r}")
    lines.append("")
    lines.append("[waveform]")
    for key in _SCHEMA["waveform"]["required"]:
        lines.append(f"{key} = {_fmt_value(getattr(config, key))}")
    lines.append("")
    lines.append("[grid]")
    for key in _SCHEMA["grid"]["required"]:
        lines.append(f"{key} = {_fmt_value(getattr(config, key))}")
    lines.append("")
    lines.append("[run]")
    for key in _SCHEMA["run"]["required"]:
        lines.append(f"{key} = {_fmt_value(getattr(config, key))}")
    lines.append("")
    return "\n".join(lines)


def dump_config(config: RunConfig, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps_config(config))
