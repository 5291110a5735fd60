"""Deterministic world simulation: random-walk boxes, the lost/found tracker, and the complexity staircase.

World state is kept in small integer arrays (one row per box, hero always row
0) so a ten-minute session steps in well under a second; BoxEntity views are
materialized on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from brainb.config import (
    FIRST_BOX_COLOR_INDEX,
    HERO_COLOR_INDEX,
    ConfigError,
    SessionConfig,
)


class TrackState(Enum):
    FOUND = "found"
    LOST = "lost"


class ComplexityCommand(Enum):
    NONE = "none"
    INC = "inc"
    DEC = "dec"


@dataclass(frozen=True, slots=True)
class PixelPoint:
    x: int
    y: int


@dataclass(frozen=True, slots=True)
class BoxEntity:
    id: int
    center: PixelPoint
    half_width: int
    half_height: int
    color_index: int
    is_hero: bool


@dataclass(eq=False)
class WorldState:
    """Positions, sizes and speed of all boxes. Hero is always row 0.

    centers/halves are (n, 2) int64 arrays in (x, y)/(hw, hh) order; colors
    holds palette indices. Treat instances as immutable: the step and
    staircase operations return fresh states sharing no arrays with their
    input.
    """

    tick: int
    centers: np.ndarray
    halves: np.ndarray
    colors: np.ndarray
    ids: np.ndarray
    hero_id: int
    speed: float
    width: int
    height: int
    next_id: int

    @property
    def noc(self) -> int:
        return int(self.centers.shape[0])

    @property
    def hero_center(self) -> PixelPoint:
        return PixelPoint(int(self.centers[0, 0]), int(self.centers[0, 1]))

    @property
    def boxes(self) -> tuple[BoxEntity, ...]:
        return build_boxes(self.centers, self.halves, self.colors, self.ids, self.hero_id)


def build_boxes(
    centers: np.ndarray,
    halves: np.ndarray,
    colors: np.ndarray,
    ids: np.ndarray,
    hero_id: int,
) -> tuple[BoxEntity, ...]:
    cs = centers.tolist()
    hs = halves.tolist()
    return tuple(
        BoxEntity(
            id=bid,
            center=PixelPoint(c[0], c[1]),
            half_width=h[0],
            half_height=h[1],
            color_index=col,
            is_hero=bid == hero_id,
        )
        for bid, c, h, col in zip(ids.tolist(), cs, hs, colors.tolist())
    )


@dataclass(frozen=True, slots=True)
class TrackerState:
    """The lost/found administration state.

    nof_lost / nof_found count consecutive far / near ticks; whichever branch
    a tick takes zeroes the other counter, and a counter that exceeds
    run_length fires and resets itself. first_lost stays False until the
    first loss of the session, which keeps that first transition out of the
    found2lost record.
    """

    state: TrackState = TrackState.FOUND
    nof_lost: int = 0
    nof_found: int = 0
    first_lost: bool = False
    dist_threshold_sq: int = 121
    run_length: int = 12


@dataclass
class EventLedger:
    """The four bps sequences plus the event-tick extension.

    lost/found record every staircase firing; lost2found/found2lost record
    only state transitions. The tick sequences time-stamp the transitions so
    later series can relate event complexity to event spacing.
    """

    lost: list[int] = field(default_factory=list)
    found: list[int] = field(default_factory=list)
    lost2found: list[int] = field(default_factory=list)
    found2lost: list[int] = field(default_factory=list)
    event_ticks_lost: list[int] = field(default_factory=list)
    event_ticks_found: list[int] = field(default_factory=list)
    event_ticks_lost2found: list[int] = field(default_factory=list)
    event_ticks_found2lost: list[int] = field(default_factory=list)


def hero_distance_sq(pointer: PixelPoint, hero_center: PixelPoint) -> int:
    dx = pointer.x - hero_center.x
    dy = pointer.y - hero_center.y
    return dx * dx + dy * dy


def tracker_step(
    tracker: TrackerState,
    dist_sq: int,
    bps: int,
    ledger: EventLedger,
    tick: int,
) -> tuple[TrackerState, EventLedger, ComplexityCommand]:
    """Advance the lost/found machine by one 100 ms tick.

    Far ticks (dist_sq above the threshold) accumulate nof_lost; run_length+1
    consecutive far ticks fire a Dec, append bps to the lost sequence and,
    when the tick also flips a gated Found state, to found2lost. Near ticks
    mirror this with Inc / found / lost2found. The ledger is appended in
    place and returned.
    """
    if dist_sq > tracker.dist_threshold_sq:
        nof_lost = tracker.nof_lost + 1
        if nof_lost > tracker.run_length:
            if tracker.state is TrackState.FOUND and tracker.first_lost:
                ledger.found2lost.append(bps)
                ledger.event_ticks_found2lost.append(tick)
            ledger.lost.append(bps)
            ledger.event_ticks_lost.append(tick)
            new = replace(
                tracker,
                state=TrackState.LOST,
                nof_lost=0,
                nof_found=0,
                first_lost=True,
            )
            return new, ledger, ComplexityCommand.DEC
        return replace(tracker, nof_lost=nof_lost, nof_found=0), ledger, ComplexityCommand.NONE

    nof_found = tracker.nof_found + 1
    if nof_found > tracker.run_length:
        if tracker.state is TrackState.LOST and tracker.first_lost:
            ledger.lost2found.append(bps)
            ledger.event_ticks_lost2found.append(tick)
        ledger.found.append(bps)
        ledger.event_ticks_found.append(tick)
        new = replace(tracker, state=TrackState.FOUND, nof_lost=0, nof_found=0)
        return new, ledger, ComplexityCommand.INC
    return replace(tracker, nof_found=nof_found, nof_lost=0), ledger, ComplexityCommand.NONE


def _center_bounds(halves: np.ndarray, width: int, height: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    lo_x = halves[:, 0]
    hi_x = width - 1 - halves[:, 0]
    lo_y = halves[:, 1]
    hi_y = height - 1 - halves[:, 1]
    return lo_x, hi_x, lo_y, hi_y


def _draw_center(rng: np.random.Generator, half_w: int, half_h: int, config: SessionConfig) -> tuple[int, int]:
    cx = int(rng.integers(half_w, config.width - half_w))
    cy = int(rng.integers(half_h, config.height - half_h))
    return cx, cy


def _draw_box_rows(
    count: int, config: SessionConfig, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draw (centers, halves, colors) rows for count non-hero boxes."""
    centers = np.empty((count, 2), dtype=np.int64)
    halves = np.empty((count, 2), dtype=np.int64)
    colors = np.empty(count, dtype=np.int16)
    n_colors = len(config.palette) - FIRST_BOX_COLOR_INDEX
    for i in range(count):
        hw = int(rng.integers(config.box_half_min, config.box_half_max + 1))
        hh = int(rng.integers(config.box_half_min, config.box_half_max + 1))
        cx, cy = _draw_center(rng, hw, hh, config)
        centers[i] = (cx, cy)
        halves[i] = (hw, hh)
        colors[i] = FIRST_BOX_COLOR_INDEX + int(rng.integers(0, n_colors))
    return centers, halves, colors


def spawn_world(config: SessionConfig, rng: np.random.Generator) -> WorldState:
    """Create the tick-0 world: one hero plus initial_noc - 1 random boxes."""
    config.validate()
    hero_center = _draw_center(rng, config.hero_half_w, config.hero_half_h, config)
    n_rest = config.initial_noc - 1
    rest_centers, rest_halves, rest_colors = _draw_box_rows(n_rest, config, rng)

    centers = np.vstack([np.array([hero_center], dtype=np.int64), rest_centers])
    halves = np.vstack(
        [np.array([[config.hero_half_w, config.hero_half_h]], dtype=np.int64), rest_halves]
    )
    colors = np.concatenate([np.array([HERO_COLOR_INDEX], dtype=np.int16), rest_colors])
    ids = np.arange(config.initial_noc, dtype=np.int64)

    return WorldState(
        tick=0,
        centers=centers,
        halves=halves,
        colors=colors,
        ids=ids,
        hero_id=0,
        speed=config.initial_speed,
        width=config.width,
        height=config.height,
        next_id=config.initial_noc,
    )


def step_world(world: WorldState, config: SessionConfig, rng: np.random.Generator) -> WorldState:
    """One random-walk tick: every box moves independently, reflecting at the edges.

    Per axis the displacement is uniform on [-s, +s] with s = round(speed)
    (half-up, so the speed floor of 0.5 still moves). Reflection keeps every
    rectangle fully inside the bounds.
    """
    s = int(math.floor(world.speed + 0.5))
    if s > 0:
        steps = rng.integers(-s, s + 1, size=world.centers.shape, dtype=np.int64)
        new = world.centers + steps
    else:
        new = world.centers.copy()

    lo_x, hi_x, lo_y, hi_y = _center_bounds(world.halves, world.width, world.height)
    for axis, lo, hi in ((0, lo_x, hi_x), (1, lo_y, hi_y)):
        v = new[:, axis]
        v = np.where(v < lo, 2 * lo - v, v)
        v = np.where(v > hi, 2 * hi - v, v)
        new[:, axis] = np.clip(v, lo, hi)

    return replace(
        world,
        tick=world.tick + 1,
        centers=new,
        halves=world.halves.copy(),
        colors=world.colors.copy(),
        ids=world.ids.copy(),
    )


def apply_complexity(
    world: WorldState,
    command: ComplexityCommand,
    config: SessionConfig,
    rng: np.random.Generator,
) -> WorldState:
    """Apply a staircase command: Inc adds boxes and speeds up, Dec removes and slows.

    Box count is clamped to [noc_min, noc_max], speed to
    [speed_min, speed_max]; Dec removes the most recently added boxes first
    and never touches the hero (row 0).
    """
    if command is ComplexityCommand.NONE:
        return world

    if command is ComplexityCommand.INC:
        n_add = min(config.inc_boxes, config.noc_max - world.noc)
        speed = min(world.speed * config.speed_factor_up, config.speed_max)
        if n_add <= 0:
            return replace(world, speed=speed)
        add_centers, add_halves, add_colors = _draw_box_rows(n_add, config, rng)
        return replace(
            world,
            centers=np.vstack([world.centers, add_centers]),
            halves=np.vstack([world.halves, add_halves]),
            colors=np.concatenate([world.colors, add_colors]),
            ids=np.concatenate(
                [world.ids, np.arange(world.next_id, world.next_id + n_add, dtype=np.int64)]
            ),
            next_id=world.next_id + n_add,
            speed=speed,
        )

    n_rm = min(config.dec_boxes, world.noc - config.noc_min)
    speed = max(world.speed * config.speed_factor_down, config.speed_min)
    if n_rm <= 0:
        return replace(world, speed=speed)
    keep = world.noc - n_rm
    return replace(
        world,
        centers=world.centers[:keep].copy(),
        halves=world.halves[:keep].copy(),
        colors=world.colors[:keep].copy(),
        ids=world.ids[:keep].copy(),
        speed=speed,
    )


def validate_world(world: WorldState, config: SessionConfig) -> None:
    """Raise ConfigError when a world violates its structural invariants."""
    if world.noc < config.noc_min or world.noc > config.noc_max:
        raise ConfigError(f"noc {world.noc} outside [{config.noc_min}, {config.noc_max}]")
    if not (config.speed_min <= world.speed <= config.speed_max):
        raise ConfigError(f"speed {world.speed} outside bounds")
    if int(world.ids[0]) != world.hero_id:
        raise ConfigError("hero is not row 0")
    lo_x, hi_x, lo_y, hi_y = _center_bounds(world.halves, world.width, world.height)
    x = world.centers[:, 0]
    y = world.centers[:, 1]
    if not (
        bool(np.all(x >= lo_x))
        and bool(np.all(x <= hi_x))
        and bool(np.all(y >= lo_y))
        and bool(np.all(y <= hi_y))
    ):
        raise ConfigError("box outside world bounds")
