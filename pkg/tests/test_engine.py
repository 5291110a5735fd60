from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brainb.config import ConfigError, SessionConfig
from brainb.engine import (
    ComplexityCommand,
    EventLedger,
    HERO_COLOR_INDEX,
    PixelPoint,
    TrackState,
    TrackerState,
    apply_complexity,
    hero_distance_sq,
    spawn_world,
    step_world,
    tracker_step,
    validate_world,
)

from reference_tracker import ReferenceTracker

FAR = 122  # just past the default threshold of 121
NEAR = 121  # exactly on it: still counts as found


def drive(dists, bps=1000):
    """Run a dist_sq stream through tracker_step, return (tracker, ledger, commands)."""
    tracker = TrackerState()
    ledger = EventLedger()
    commands = []
    for tick, d in enumerate(dists):
        tracker, ledger, cmd = tracker_step(tracker, d, bps, ledger, tick)
        commands.append(cmd)
    return tracker, ledger, commands


def test_distance_is_squared_euclidean():
    assert hero_distance_sq(PixelPoint(3, 4), PixelPoint(0, 0)) == 25
    assert hero_distance_sq(PixelPoint(10, 10), PixelPoint(10, 10)) == 0


def test_threshold_is_strict():
    # 121 = 11^2 exactly on the disc counts as near
    _, _, cmds = drive([NEAR] * 13)
    assert cmds[-1] is ComplexityCommand.INC
    _, ledger, cmds = drive([FAR] * 13)
    assert cmds[-1] is ComplexityCommand.DEC
    assert ledger.lost == [1000]


def test_fires_on_thirteenth_consecutive_tick():
    _, _, cmds = drive([FAR] * 12)
    assert all(c is ComplexityCommand.NONE for c in cmds)
    _, _, cmds = drive([FAR] * 13)
    assert cmds[:12] == [ComplexityCommand.NONE] * 12
    assert cmds[12] is ComplexityCommand.DEC


def test_alternation_resets_counters():
    # a near tick anywhere restarts the far run
    stream = [FAR] * 12 + [NEAR] + [FAR] * 12
    _, ledger, cmds = drive(stream)
    assert all(c is ComplexityCommand.NONE for c in cmds)
    assert ledger.lost == [] and ledger.found == []


def test_first_lost_gate():
    # session starts in Found; the very first loss must not record found2lost
    stream = [FAR] * 13 + [NEAR] * 13 + [FAR] * 13
    _, ledger, _ = drive(stream)
    assert ledger.found2lost == [1000]  # only the second loss
    assert ledger.lost2found == [1000]
    assert ledger.lost == [1000, 1000]
    assert ledger.found == [1000]


def test_transition_value_also_lands_in_plain_sequence():
    tracker = TrackerState()
    ledger = EventLedger()
    seq = [(FAR, 10)] * 13 + [(NEAR, 20)] * 13 + [(FAR, 30)] * 13
    for tick, (d, bps) in enumerate(seq):
        tracker, ledger, _ = tracker_step(tracker, d, bps, ledger, tick)
    assert ledger.lost == [10, 30]
    assert ledger.found == [20]
    assert ledger.lost2found == [20]
    assert ledger.found2lost == [30]


def test_refire_without_state_change_records_no_transition():
    # 26 far ticks: two Dec firings, but the state only flips once
    _, ledger, _ = drive([FAR] * 26)
    assert ledger.lost == [1000, 1000]
    assert ledger.found2lost == []
    assert ledger.lost2found == []


def test_event_ticks_align_with_fires():
    _, ledger, _ = drive([FAR] * 13 + [NEAR] * 13)
    assert ledger.event_ticks_lost == [12]
    assert ledger.event_ticks_found == [25]


@settings(max_examples=300, deadline=None)
@given(
    st.lists(
        st.tuples(st.integers(min_value=0, max_value=400), st.integers(min_value=0, max_value=10**6)),
        min_size=0,
        max_size=120,
    )
)
def test_tracker_matches_reference_transcription(stream):
    oracle = ReferenceTracker()
    tracker = TrackerState()
    ledger = EventLedger()
    commands = []
    for tick, (dist_sq, bps) in enumerate(stream):
        oracle.update(dist_sq, bps)
        tracker, ledger, cmd = tracker_step(tracker, dist_sq, bps, ledger, tick)
        if cmd is not ComplexityCommand.NONE:
            commands.append("dec" if cmd is ComplexityCommand.DEC else "inc")
    assert ledger.lost == oracle.lost
    assert ledger.found == oracle.found
    assert ledger.lost2found == oracle.lost2found
    assert ledger.found2lost == oracle.found2lost
    assert commands == oracle.commands
    assert tracker.nof_lost == oracle.nof_lost
    assert tracker.nof_found == oracle.nof_found
    assert tracker.first_lost == oracle.first_lost
    assert (tracker.state is TrackState.LOST) == (oracle.state == "lost")


# --- world ---------------------------------------------------------------


class StubRng:
    """Duck-typed generator returning a fixed displacement for every box."""

    def __init__(self, dx: int, dy: int) -> None:
        self.dx = dx
        self.dy = dy

    def integers(self, lo, hi, size=None, dtype=None):
        out = np.empty(size, dtype=np.int64)
        out[:, 0] = self.dx
        out[:, 1] = self.dy
        return out


def test_spawn_world_layout(small_config):
    world = spawn_world(small_config, np.random.default_rng(1))
    assert world.noc == small_config.initial_noc
    assert world.hero_id == 0 and int(world.ids[0]) == 0
    assert int(world.colors[0]) == HERO_COLOR_INDEX
    assert tuple(world.halves[0]) == (small_config.hero_half_w, small_config.hero_half_h)
    assert world.speed == small_config.initial_speed
    validate_world(world, small_config)


def test_spawn_world_deterministic(small_config):
    a = spawn_world(small_config, np.random.default_rng(9))
    b = spawn_world(small_config, np.random.default_rng(9))
    assert np.array_equal(a.centers, b.centers)
    assert np.array_equal(a.halves, b.halves)
    assert np.array_equal(a.colors, b.colors)


def test_step_world_speed_rounding(small_config):
    import dataclasses

    world = spawn_world(small_config, np.random.default_rng(2))
    # 0.4 rounds to 0: nothing moves
    frozen = step_world(dataclasses.replace(world, speed=0.4), small_config, np.random.default_rng(0))
    assert np.array_equal(frozen.centers, world.centers)
    assert frozen.tick == world.tick + 1


def test_step_world_reflects_at_edges(small_config):
    world = spawn_world(small_config, np.random.default_rng(3))
    # push every box 500 px right: far past any bound, must reflect back inside
    moved = step_world(world, small_config, StubRng(500, 0))
    validate_world(moved, small_config)
    # exact reflection for a box that does not overshoot twice
    lo = world.halves[0, 0]
    hi = small_config.width - 1 - world.halves[0, 0]
    x0 = int(world.centers[0, 0])
    want = 2 * int(hi) - (x0 + 500)
    want = min(max(want, int(lo)), int(hi))
    assert int(moved.centers[0, 0]) == want


def test_step_world_does_not_mutate_input(small_config):
    world = spawn_world(small_config, np.random.default_rng(4))
    before = world.centers.copy()
    step_world(world, small_config, np.random.default_rng(5))
    assert np.array_equal(world.centers, before)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1), ticks=st.integers(min_value=1, max_value=40))
def test_step_world_stays_in_bounds(seed, ticks):
    config = SessionConfig(
        width=200, height=120, initial_noc=5, box_half_min=3, box_half_max=10,
        hero_half_w=5, hero_half_h=3, initial_speed=7.0, window_w=32, window_h=32,
    )
    rng = np.random.default_rng(seed)
    world = spawn_world(config, rng)
    for _ in range(ticks):
        world = step_world(world, config, rng)
        validate_world(world, config)


def test_apply_complexity_inc(small_config):
    rng = np.random.default_rng(6)
    world = spawn_world(small_config, rng)
    up = apply_complexity(world, ComplexityCommand.INC, small_config, rng)
    assert up.noc == world.noc + small_config.inc_boxes
    assert up.speed == pytest.approx(world.speed * small_config.speed_factor_up)
    assert list(up.ids[: world.noc]) == list(world.ids)
    validate_world(up, small_config)


def test_apply_complexity_dec_removes_newest_first(small_config):
    rng = np.random.default_rng(7)
    world = spawn_world(small_config, rng)
    up = apply_complexity(world, ComplexityCommand.INC, small_config, rng)
    down = apply_complexity(up, ComplexityCommand.DEC, small_config, rng)
    assert down.noc == world.noc
    assert list(down.ids) == list(world.ids)
    assert int(down.ids[0]) == world.hero_id


def test_apply_complexity_clamps(small_config):
    rng = np.random.default_rng(8)
    world = spawn_world(small_config, rng)

    at_max = world
    for _ in range(small_config.noc_max + 5):
        at_max = apply_complexity(at_max, ComplexityCommand.INC, small_config, rng)
    assert at_max.noc == small_config.noc_max
    assert at_max.speed <= small_config.speed_max

    at_min = world
    for _ in range(small_config.initial_noc + 5):
        at_min = apply_complexity(at_min, ComplexityCommand.DEC, small_config, rng)
    assert at_min.noc == small_config.noc_min
    assert at_min.speed >= small_config.speed_min
    assert int(at_min.ids[0]) == world.hero_id


def test_apply_complexity_none_is_identity(small_config):
    rng = np.random.default_rng(9)
    world = spawn_world(small_config, rng)
    assert apply_complexity(world, ComplexityCommand.NONE, small_config, rng) is world


def test_validate_world_catches_out_of_bounds(small_config):
    world = spawn_world(small_config, np.random.default_rng(10))
    world.centers[1, 0] = small_config.width + 50
    with pytest.raises(ConfigError, match="bounds"):
        validate_world(world, small_config)
