"""Scripted pointer models and the free-running headless runner.

Models turn the latest snapshot into the next tick's pointer sample. The
capacity model is the interesting one: it tracks well while the measured
complexity stays under its capacity and deliberately loses the hero above
it, which reproduces the losing-high/finding-low shape of real sessions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from brainb.config import SessionConfig
from brainb.engine import EventLedger, PixelPoint
from brainb.logkit import LogRecord
from brainb.session import (
    PointerSample,
    Session,
    SessionResult,
    StateSnapshot,
    finalize,
    new_session,
    run_tick,
    snapshot,
)


def session_rngs(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Split one seed into independent world and model streams.

    Separate streams keep the world reproducible from (seed, pointer trace)
    alone, so a recorded session can be replayed without the model that
    produced it.
    """
    world_ss, model_ss = np.random.SeedSequence(seed).spawn(2)
    return np.random.Generator(np.random.PCG64(world_ss)), np.random.Generator(
        np.random.PCG64(model_ss)
    )


def _noisy(value: int, sigma: float, rng: np.random.Generator) -> int:
    if sigma <= 0:
        return value
    bound = 3.0 * sigma
    n = min(max(float(rng.normal(0.0, sigma)), -bound), bound)
    return value + int(round(n))


@dataclass
class PerfectModel:
    """Pointer glued to the hero center, button always held."""

    def step(self, snap: StateSnapshot, rng: np.random.Generator) -> PointerSample:
        hero = snap.hero_center
        return PointerSample(x=hero.x, y=hero.y, button_down=True, tick=snap.tick)


@dataclass
class AbsentModel:
    """Pointer parked in a corner; the hero is never tracked at all."""

    corner: PixelPoint = PixelPoint(0, 0)

    def step(self, snap: StateSnapshot, rng: np.random.Generator) -> PointerSample:
        return PointerSample(
            x=self.corner.x, y=self.corner.y, button_down=True, tick=snap.tick
        )


@dataclass
class LaggedNoisyModel:
    """Follows the hero center latency_ticks late with per-axis gaussian
    noise, clipped at three sigma so runs stay within bounded error."""

    latency_ticks: int = 0
    noise_sigma: float = 0.0
    _history: deque[PixelPoint] = field(default_factory=deque, repr=False)

    def __post_init__(self) -> None:
        if self.latency_ticks < 0:
            raise ValueError("latency_ticks must be >= 0")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")

    def _target(self, snap: StateSnapshot) -> PixelPoint:
        self._history.append(snap.hero_center)
        while len(self._history) > self.latency_ticks + 1:
            self._history.popleft()
        return self._history[0]

    def step(self, snap: StateSnapshot, rng: np.random.Generator) -> PointerSample:
        target = self._target(snap)
        return PointerSample(
            x=_noisy(target.x, self.noise_sigma, rng),
            y=_noisy(target.y, self.noise_sigma, rng),
            button_down=True,
            tick=snap.tick,
        )


@dataclass
class CapacityModel:
    """Tracks like LaggedNoisyModel below capacity_bps; at or above it the
    pointer drifts away from the hero at drift_rate px per tick, and once
    bps has stayed below capacity for reacquire_ticks it snaps back.
    """

    capacity_bps: int = 25_000
    reacquire_ticks: int = 25
    latency_ticks: int = 0
    noise_sigma: float = 0.0
    drift_rate: float = 8.0
    _tracker: LaggedNoisyModel = field(init=False, repr=False)
    _drifting: bool = field(default=False, init=False, repr=False)
    _calm_ticks: int = field(default=0, init=False, repr=False)
    _pos: PixelPoint | None = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        if self.capacity_bps < 0:
            raise ValueError("capacity_bps must be >= 0")
        if self.reacquire_ticks < 0:
            raise ValueError("reacquire_ticks must be >= 0")
        if self.drift_rate < 0:
            raise ValueError("drift_rate must be >= 0")
        self._tracker = LaggedNoisyModel(
            latency_ticks=self.latency_ticks, noise_sigma=self.noise_sigma
        )

    def _drift_from(self, hero: PixelPoint) -> PixelPoint:
        assert self._pos is not None
        dx = float(self._pos.x - hero.x)
        dy = float(self._pos.y - hero.y)
        norm = (dx * dx + dy * dy) ** 0.5
        if norm == 0.0:
            dx, dy, norm = 1.0, 0.0, 1.0
        return PixelPoint(
            int(round(self._pos.x + self.drift_rate * dx / norm)),
            int(round(self._pos.y + self.drift_rate * dy / norm)),
        )

    def step(self, snap: StateSnapshot, rng: np.random.Generator) -> PointerSample:
        over = snap.bps >= self.capacity_bps
        if over:
            self._drifting = True
            self._calm_ticks = 0
        elif self._drifting:
            self._calm_ticks += 1
            if self._calm_ticks >= self.reacquire_ticks:
                self._drifting = False
                self._calm_ticks = 0

        if self._drifting:
            hero = snap.hero_center
            if self._pos is None:
                self._pos = hero
            self._pos = self._drift_from(hero)
            # keep the tracker's latency buffer warm so reacquisition is lagged too
            self._tracker._target(snap)
            return PointerSample(
                x=self._pos.x, y=self._pos.y, button_down=True, tick=snap.tick
            )
        sample = self._tracker.step(snap, rng)
        self._pos = PixelPoint(sample.x, sample.y)
        return sample


@dataclass
class TracePlayer:
    """Replays a recorded pointer trace; sample i drives executed tick i."""

    samples: tuple[PointerSample, ...]

    def step(self, snap: StateSnapshot, rng: np.random.Generator) -> PointerSample:
        return self.samples[snap.tick]


PointerModel = PerfectModel | AbsentModel | LaggedNoisyModel | CapacityModel | TracePlayer


def model_step(
    model: PointerModel, snap: StateSnapshot, rng: np.random.Generator
) -> PointerSample:
    return model.step(snap, rng)


@dataclass(frozen=True, slots=True)
class SessionOutcome:
    session: Session
    result: SessionResult
    trace: tuple[PointerSample, ...]


def run_session(
    config: SessionConfig,
    model: PointerModel,
    seed: int,
    *,
    max_ticks: int | None = None,
) -> SessionOutcome:
    """Run a full session free-running (no wall clock) and finalize it.

    max_ticks caps the executed ticks below the configured duration (used by
    trace replay); the resulting record then carries the shorter time.
    """
    world_rng, model_rng = session_rngs(seed)
    session = new_session(config, world_rng)
    limit = config.duration_ticks if max_ticks is None else min(max_ticks, config.duration_ticks)
    trace: list[PointerSample] = []
    while session.elapsed_ticks < limit:
        sample = model_step(model, snapshot(session), model_rng)
        run_tick(session, sample, world_rng)
        trace.append(sample)
    result = finalize(session, force=session.elapsed_ticks < config.duration_ticks)
    return SessionOutcome(session=session, result=result, trace=tuple(trace))


def run_headless(
    config: SessionConfig, model: PointerModel, seed: int
) -> tuple[LogRecord, EventLedger]:
    outcome = run_session(config, model, seed)
    return outcome.result.record, outcome.session.ledger
