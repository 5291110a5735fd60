"""Session configuration, the default palette, and the flat key=value config-file format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

BACKGROUND_INDEX = 0
HERO_COLOR_INDEX = 1
FIRST_BOX_COLOR_INDEX = 2

# Dark background, near-white hero, Okabe-Ito hues for the remaining boxes:
# high background/figure contrast, and the hues stay distinguishable under
# the common color-vision deficiencies.
DEFAULT_PALETTE = (
    "#101820",  # background
    "#f2f3f4",  # hero
    "#e69f00",
    "#56b4e9",
    "#009e73",
    "#f0e442",
    "#d55e00",
    "#cc79a7",
    "#0072b2",
)


class ConfigError(ValueError):
    """Raised when a session configuration fails validation."""


@dataclass(frozen=True, slots=True)
class SessionConfig:
    """Full parameter set for one benchmark session.

    The standard ten-minute test is 6000 ticks of 100 ms. Everything here can
    be overridden from a config file or CLI flags; the staircase magnitudes
    (inc/dec box counts, speed factors) and box-size ranges are declared
    defaults, not measured constants.
    """

    tick_ms: int = 100
    duration_ticks: int = 6000
    dist_threshold_sq: int = 121
    run_length: int = 12
    width: int = 1280
    height: int = 720
    window_w: int = 256
    window_h: int = 256
    initial_noc: int = 30
    noc_min: int = 2
    noc_max: int = 200
    # speed_max rounds to a 7 px/tick step; a pointer trailing the hero by
    # one tick then stays within the 11 px near disc (2 * 49 <= 121), so a
    # flawless tracker never records a loss.
    initial_speed: float = 2.0
    speed_min: float = 0.5
    speed_max: float = 7.0
    inc_boxes: int = 1
    dec_boxes: int = 1
    speed_factor_up: float = 1.05
    speed_factor_down: float = 1.0 / 1.05
    box_half_min: int = 16
    box_half_max: int = 48
    hero_half_w: int = 24
    hero_half_h: int = 16
    bits_per_changed_pixel: int = 1
    palette: tuple[str, ...] = DEFAULT_PALETTE
    rng_seed: int = 1

    @property
    def ticks_per_second(self) -> int:
        return 1000 // self.tick_ms

    def rgb_palette(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(_hex_to_rgb(c) for c in self.palette)

    def validate(self) -> None:
        if self.tick_ms < 1 or self.tick_ms > 1000:
            raise ConfigError(f"tick_ms must be in [1, 1000], got {self.tick_ms}")
        if self.duration_ticks < 1:
            raise ConfigError("duration_ticks must be >= 1")
        if self.dist_threshold_sq < 0:
            raise ConfigError("dist_threshold_sq must be >= 0")
        if self.run_length < 1:
            raise ConfigError("run_length must be >= 1")
        if self.width < 1 or self.height < 1:
            raise ConfigError("world bounds must be positive")
        if self.window_w < 1 or self.window_h < 1:
            raise ConfigError("meter window must be positive")
        if self.noc_min < 1:
            raise ConfigError("noc_min must be >= 1")
        if not (self.noc_min <= self.initial_noc <= self.noc_max):
            raise ConfigError(
                f"initial_noc {self.initial_noc} outside "
                f"[{self.noc_min}, {self.noc_max}]"
            )
        if not (0 < self.speed_min <= self.initial_speed <= self.speed_max):
            raise ConfigError(
                f"initial_speed {self.initial_speed} outside "
                f"[{self.speed_min}, {self.speed_max}] or speed_min <= 0"
            )
        if not (self.speed_factor_up >= 1.0 >= self.speed_factor_down > 0.0):
            raise ConfigError("need speed_factor_up >= 1 >= speed_factor_down > 0")
        if self.inc_boxes < 0 or self.dec_boxes < 0:
            raise ConfigError("inc_boxes/dec_boxes must be >= 0")
        if not (1 <= self.box_half_min <= self.box_half_max):
            raise ConfigError("need 1 <= box_half_min <= box_half_max")
        if self.hero_half_w < 1 or self.hero_half_h < 1:
            raise ConfigError("hero half-extents must be >= 1")
        biggest = max(self.box_half_max, self.hero_half_w, self.hero_half_h)
        if self.width <= 2 * biggest or self.height <= 2 * biggest:
            raise ConfigError(
                f"bounds {self.width}x{self.height} cannot fit a box with "
                f"half-extent {biggest}"
            )
        if self.bits_per_changed_pixel < 1:
            raise ConfigError("bits_per_changed_pixel must be >= 1")
        if len(self.palette) < FIRST_BOX_COLOR_INDEX + 1:
            raise ConfigError("palette needs background, hero and >= 1 box color")
        if len(self.palette) > 256:
            raise ConfigError("palette limited to 256 entries (8-bit indices)")
        for c in self.palette:
            _hex_to_rgb(c)


def _hex_to_rgb(color: str) -> tuple[int, int, int]:
    c = color.strip()
    if not (c.startswith("#") and len(c) == 7):
        raise ConfigError(f"palette color {color!r} is not #rrggbb")
    try:
        return (int(c[1:3], 16), int(c[3:5], 16), int(c[5:7], 16))
    except ValueError as exc:
        raise ConfigError(f"palette color {color!r} is not #rrggbb") from exc


def _parse_palette(value: str) -> tuple[str, ...]:
    colors = tuple(part.strip() for part in value.split(",") if part.strip())
    if not colors:
        raise ConfigError("empty palette")
    return colors


_FIELD_PARSERS = {
    "int": int,
    "float": float,
    "tuple[str, ...]": _parse_palette,
}


def config_field_names() -> tuple[str, ...]:
    return tuple(f.name for f in dataclasses.fields(SessionConfig))


def parse_config_text(text: str, *, source: str = "<config>") -> dict[str, object]:
    """Parse `key = value` lines into typed SessionConfig overrides."""
    parsers = {
        f.name: _FIELD_PARSERS[f.type] for f in dataclasses.fields(SessionConfig)
    }
    overrides: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        # only whole-line comments: values may contain '#' (palette colors)
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in parsers:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            overrides[key] = parsers[key](value)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {exc}") from exc
    return overrides


def load_config_file(path: str | Path) -> dict[str, object]:
    p = Path(path)
    return parse_config_text(p.read_text(encoding="utf-8"), source=str(p))


def _coerce(field: dataclasses.Field, value: object) -> object:
    """Bring an override value (possibly a JSON scalar or raw string) to the
    field's type; ConfigError on anything that does not fit."""
    if isinstance(value, str):
        try:
            return _FIELD_PARSERS[field.type](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {field.name}: {value!r}") from exc
    if field.type == "int":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{field.name} expects an integer, got {value!r}")
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"{field.name} expects an integer, got {value!r}")
        return int(value)
    if field.type == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{field.name} expects a number, got {value!r}")
        return float(value)
    if field.type == "tuple[str, ...]":
        if isinstance(value, (list, tuple)) and all(isinstance(c, str) for c in value):
            return tuple(value)
        raise ConfigError(f"{field.name} expects a list of colors, got {value!r}")
    raise ConfigError(f"{field.name} cannot be overridden")


def with_overrides(config: SessionConfig, overrides: dict[str, object]) -> SessionConfig:
    fields = {f.name: f for f in dataclasses.fields(SessionConfig)}
    coerced: dict[str, object] = {}
    for key, value in overrides.items():
        if key not in fields:
            raise ConfigError(f"unknown config key {key!r}")
        coerced[key] = _coerce(fields[key], value)
    cfg = dataclasses.replace(config, **coerced)  # type: ignore[arg-type]
    cfg.validate()
    return cfg


def split_extra_keys(
    text: str, keys: tuple[str, ...]
) -> tuple[str, dict[str, str]]:
    """Pull non-config `key = value` lines (e.g. a run's nop count) out of text."""
    kept: list[str] = []
    extras: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#"):
            kept.append(raw)
            continue
        key = line.partition("=")[0].strip() if "=" in line else None
        if key in keys:
            extras[key] = line.partition("=")[2].strip()
        else:
            kept.append(raw)
    return "\n".join(kept), extras


def config_to_text(config: SessionConfig, extra: dict[str, object] | None = None) -> str:
    """Serialize a config (plus optional extra keys) in the key = value format."""
    lines = []
    for f in dataclasses.fields(SessionConfig):
        value = getattr(config, f.name)
        if f.name == "palette":
            value = ",".join(value)
        lines.append(f"{f.name} = {value}")
    if extra:
        for key, value in extra.items():
            lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def write_config_file(
    config: SessionConfig, path: str | Path, extra: dict[str, object] | None = None
) -> None:
    Path(path).write_text(config_to_text(config, extra), encoding="utf-8")
