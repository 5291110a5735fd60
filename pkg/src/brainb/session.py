"""One benchmark session: the fixed-timestep loop, pause bookkeeping, snapshots
and finalization.

The session object is the sole owner of all mutable state; callers feed it
one PointerSample per tick and read immutable snapshots back. World states
are replaced, never mutated, so snapshots can share their arrays safely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from brainb.config import SessionConfig
from brainb.engine import (
    BoxEntity,
    EventLedger,
    PixelPoint,
    TrackerState,
    TrackState,
    WorldState,
    apply_complexity,
    build_boxes,
    hero_distance_sq,
    spawn_world,
    step_world,
    tracker_step,
)
from brainb.logkit import LogRecord, build_record, clock_string
from brainb.meter import Bitmap, ComplexityMeter, measure, new_meter, rasterize, render_crop


@dataclass(frozen=True, slots=True)
class PointerSample:
    x: int
    y: int
    button_down: bool
    tick: int = 0


def clamp_pointer(sample: PointerSample, config: SessionConfig) -> PointerSample:
    x = min(max(sample.x, 0), config.width - 1)
    y = min(max(sample.y, 0), config.height - 1)
    if x == sample.x and y == sample.y:
        return sample
    return PointerSample(x=x, y=y, button_down=sample.button_down, tick=sample.tick)


@dataclass(slots=True)
class StateSnapshot:
    """Immutable view of one tick. boxes materializes lazily because most
    consumers (scripted pointers) only need hero_center and bps."""

    tick: int
    centers: np.ndarray
    halves: np.ndarray
    colors: np.ndarray
    ids: np.ndarray
    hero_id: int
    bps: int
    noc: int
    state: TrackState
    clock: str
    paused: bool

    @property
    def boxes(self) -> tuple[BoxEntity, ...]:
        return build_boxes(self.centers, self.halves, self.colors, self.ids, self.hero_id)

    @property
    def hero_center(self) -> PixelPoint:
        return PixelPoint(int(self.centers[0, 0]), int(self.centers[0, 1]))


@dataclass(slots=True)
class Session:
    config: SessionConfig
    world: WorldState
    tracker: TrackerState
    ledger: EventLedger
    meter: ComplexityMeter
    nop: int = 0
    paused: bool = False
    elapsed_ticks: int = 0

    @property
    def finished(self) -> bool:
        return self.elapsed_ticks >= self.config.duration_ticks


@dataclass(frozen=True, slots=True)
class SessionResult:
    record: LogRecord
    final_frame: Bitmap


def new_session(config: SessionConfig, rng: np.random.Generator) -> Session:
    config.validate()
    return Session(
        config=config,
        world=spawn_world(config, rng),
        tracker=TrackerState(
            dist_threshold_sq=config.dist_threshold_sq, run_length=config.run_length
        ),
        ledger=EventLedger(),
        meter=new_meter(config),
    )


def run_tick(session: Session, pointer: PointerSample, rng: np.random.Generator) -> Session:
    """Advance one 100 ms tick, in fixed order: move the world, measure the
    window complexity, judge the pointer, run the tracker, apply its command.

    Paused sessions ignore the pointer and change nothing. A released button
    counts as far no matter where the pointer is: holding the drag is part
    of the task.
    """
    if session.paused or session.finished:
        return session
    config = session.config

    world = step_world(session.world, config, rng)
    crop = render_crop(world, world.hero_center, config.window_w, config.window_h)
    session.meter, bps = measure(session.meter, crop, config)

    pointer = clamp_pointer(pointer, config)
    if pointer.button_down:
        dist_sq = hero_distance_sq(PixelPoint(pointer.x, pointer.y), world.hero_center)
    else:
        dist_sq = config.dist_threshold_sq + 1

    session.tracker, session.ledger, command = tracker_step(
        session.tracker, dist_sq, bps, session.ledger, world.tick
    )
    session.world = apply_complexity(world, command, config, rng)
    session.elapsed_ticks += 1
    return session


def toggle_pause(session: Session) -> Session:
    session.paused = not session.paused
    if session.paused:
        session.nop += 1
    return session


def snapshot(session: Session) -> StateSnapshot:
    world = session.world
    return StateSnapshot(
        tick=session.elapsed_ticks,
        centers=world.centers,
        halves=world.halves,
        colors=world.colors,
        ids=world.ids,
        hero_id=world.hero_id,
        bps=session.meter.bps,
        noc=world.noc,
        state=session.tracker.state,
        clock=clock_string(session.elapsed_ticks, session.config.ticks_per_second),
        paused=session.paused,
    )


def finalize(session: Session, *, force: bool = False) -> SessionResult:
    """Close the session into a log record plus the final rendered frame.

    Before the full duration this is a usage error unless force is set (the
    save-now path).
    """
    if not session.finished and not force:
        raise ValueError(
            f"session at tick {session.elapsed_ticks} of "
            f"{session.config.duration_ticks}; pass force=True to save early"
        )
    record = build_record(
        session.ledger,
        time_ticks=session.elapsed_ticks,
        bps_final=session.meter.bps,
        noc=session.world.noc,
        nop=session.nop,
        ticks_per_second=session.config.ticks_per_second,
    )
    return SessionResult(record=record, final_frame=rasterize(session.world, session.config))
