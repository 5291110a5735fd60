"""Run artifacts on disk: log, final frame, pointer trace, and the config
sidecar that makes a trace replayable.

One run writes four files sharing a stem: <stem>.log, <stem>.png,
<stem>.trace (one `tick x y down` line per executed tick) and <stem>.meta
(the exact config in key = value form plus the run's nop count, which a
trace alone cannot carry).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from brainb.config import (
    SessionConfig,
    config_to_text,
    parse_config_text,
    split_extra_keys,
    with_overrides,
)
from brainb.logkit import write_log, write_final_frame
from brainb.session import PointerSample, SessionResult


@dataclass(frozen=True, slots=True)
class RunPaths:
    log: Path
    png: Path
    trace: Path
    meta: Path
    log_text: str


def run_stem(seed: int, prefix: str = "run") -> str:
    return f"{prefix}_seed{seed}"


def trace_to_text(trace: tuple[PointerSample, ...] | list[PointerSample]) -> str:
    lines = [f"{s.tick} {s.x} {s.y} {int(s.button_down)}" for s in trace]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_trace(text: str, *, source: str = "<trace>") -> tuple[PointerSample, ...]:
    """Strict trace reader: four integers per line, ticks counting from 0."""
    samples: list[PointerSample] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"{source}:{lineno}: expected 'tick x y down'")
        try:
            tick, x, y, down = (int(p) for p in parts)
        except ValueError as exc:
            raise ValueError(f"{source}:{lineno}: {exc}") from None
        if tick != len(samples):
            raise ValueError(
                f"{source}:{lineno}: tick {tick} out of order (expected {len(samples)})"
            )
        if down not in (0, 1):
            raise ValueError(f"{source}:{lineno}: down must be 0 or 1")
        samples.append(PointerSample(x=x, y=y, button_down=bool(down), tick=tick))
    return tuple(samples)


def read_trace(path: str | Path) -> tuple[PointerSample, ...]:
    p = Path(path)
    return parse_trace(p.read_text(encoding="utf-8"), source=str(p))


def write_run(
    out_dir: str | Path,
    stem: str,
    config: SessionConfig,
    result: SessionResult,
    trace: tuple[PointerSample, ...] | list[PointerSample],
) -> RunPaths:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    log_text = write_log(result.record)
    paths = RunPaths(
        log=out / f"{stem}.log",
        png=out / f"{stem}.png",
        trace=out / f"{stem}.trace",
        meta=out / f"{stem}.meta",
        log_text=log_text,
    )
    paths.log.write_text(log_text, encoding="utf-8")
    write_final_frame(result.final_frame, config.rgb_palette(), paths.png)
    paths.trace.write_text(trace_to_text(trace), encoding="utf-8")
    paths.meta.write_text(
        config_to_text(config, extra={"nop": result.record.nop}), encoding="utf-8"
    )
    return paths


def read_meta(path: str | Path) -> tuple[SessionConfig, int]:
    """Load a meta sidecar back into (config, nop)."""
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    kept, extras = split_extra_keys(text, ("nop",))
    overrides = parse_config_text(kept, source=str(p))
    config = with_overrides(SessionConfig(), overrides)
    nop = int(extras.get("nop", "0"))
    return config, nop
