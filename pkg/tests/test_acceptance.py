"""Acceptance gate: one test per release criterion, in order.

`pytest -v tests/test_acceptance.py` prints one pass/fail line per
criterion. Each test states its tolerance inline; reference numbers come
from tests/reference_values.py and the reference log text, never from the
code under test.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from brainb.cli import EXIT_MISMATCH, EXIT_OK, main
from brainb.config import SessionConfig
from brainb.engine import ComplexityCommand, EventLedger, TrackerState, tracker_step
from brainb.logkit import (
    Relation,
    build_record,
    dispersion,
    final_kilobytes,
    integer_mean,
    parse_log,
    write_log,
)
from brainb.meter import Bitmap, measure, new_meter
from brainb.usersim import CapacityModel, LaggedNoisyModel, TracePlayer, run_headless, run_session

import reference_values as rv
from reference_tracker import ReferenceTracker


def is_subsequence(needle, haystack) -> bool:
    it = iter(haystack)
    return all(any(v == h for h in it) for v in needle)


def test_criterion_01_scoring_reproduction():
    kb = final_kilobytes(rv.LOST2FOUND, rv.FOUND2LOST)
    assert abs(kb - 6.37927) <= 5e-6
    assert f"{kb:.6g}" == "6.37927"


def test_criterion_02_integer_means():
    assert integer_mean(rv.LOST) == 54181
    assert integer_mean(rv.FOUND) == 51442
    assert integer_mean(rv.LOST2FOUND) == 43235
    assert integer_mean(rv.FOUND2LOST) == 61283


def test_criterion_03_dispersions():
    assert dispersion(rv.LOST) == pytest.approx(18541.5, abs=0.05)
    assert dispersion(rv.FOUND) == pytest.approx(18616.1, abs=0.05)
    assert dispersion(rv.LOST2FOUND) == pytest.approx(16826.7, abs=0.05)
    assert dispersion(rv.FOUND2LOST) == pytest.approx(18824.2, abs=0.05)


def test_criterion_04_structural_invariants():
    assert is_subsequence(rv.FOUND2LOST, rv.LOST)
    assert is_subsequence(rv.LOST2FOUND, rv.FOUND)
    assert len(rv.LOST2FOUND) == 28
    assert len(rv.FOUND2LOST) == 28
    assert abs(len(rv.LOST2FOUND) - len(rv.FOUND2LOST)) <= 1


def test_criterion_05_state_machine_oracle_equivalence():
    # 200 random streams x 500 ticks = 1e5 ticks against the independent
    # transcription; run-length-biased streams so firings are dense
    started = time.monotonic()
    rng = np.random.default_rng(20260818)
    total = 0
    for _ in range(200):
        oracle = ReferenceTracker()
        tracker = TrackerState()
        ledger = EventLedger()
        commands: list[str] = []
        ticks = 0
        while ticks < 500:
            run = int(rng.integers(1, 20))
            far = bool(rng.integers(0, 2))
            for _ in range(min(run, 500 - ticks)):
                dist_sq = int(rng.integers(122, 10_000)) if far else int(rng.integers(0, 122))
                bps = int(rng.integers(0, 200_000))
                oracle.update(dist_sq, bps)
                tracker, ledger, cmd = tracker_step(tracker, dist_sq, bps, ledger, ticks)
                if cmd is not ComplexityCommand.NONE:
                    commands.append("dec" if cmd is ComplexityCommand.DEC else "inc")
                ticks += 1
        total += ticks
        assert ledger.lost == oracle.lost
        assert ledger.found == oracle.found
        assert ledger.lost2found == oracle.lost2found
        assert ledger.found2lost == oracle.found2lost
        assert commands == oracle.commands
    assert total == 100_000
    assert time.monotonic() - started < 10.0


def test_criterion_06_gate_property():
    # every simulated session: the first recorded transition is lost2found
    config = SessionConfig(
        width=320, height=200, window_w=64, window_h=64, duration_ticks=400,
        initial_noc=6, box_half_min=4, box_half_max=12, hero_half_w=6, hero_half_h=4,
    )
    checked = 0
    for seed in range(30):
        model = (
            CapacityModel(capacity_bps=500, reacquire_ticks=5)
            if seed % 2
            else LaggedNoisyModel(latency_ticks=seed % 5, noise_sigma=4.0 + seed)
        )
        _, ledger = run_headless(config, model, seed)
        if not ledger.event_ticks_lost2found and not ledger.event_ticks_found2lost:
            continue
        checked += 1
        assert ledger.event_ticks_lost2found, "found2lost recorded before any lost2found"
        if ledger.event_ticks_found2lost:
            assert ledger.event_ticks_lost2found[0] < ledger.event_ticks_found2lost[0]
        assert len(ledger.lost) >= 1  # a Dec precedes the first transition
    assert checked >= 10, "too few sessions produced transitions to check the gate"


def test_criterion_07_duration_and_speed():
    started = time.monotonic()
    record, _ = run_headless(SessionConfig(), CapacityModel(), seed=1)
    elapsed = time.monotonic() - started
    lines = write_log(record).splitlines()
    assert "time      : 6000" in lines
    assert "time      : 10:0" in lines
    assert elapsed < 10.0


def test_criterion_08_log_round_trip():
    rng = np.random.default_rng(7)

    def seq(max_len: int) -> list[int]:
        return [int(v) for v in rng.integers(0, 10**6, size=int(rng.integers(0, max_len)))]

    for _ in range(1000):
        ledger = EventLedger(
            lost=seq(70), found=seq(140), lost2found=seq(30), found2lost=seq(30)
        )
        record = build_record(
            ledger,
            time_ticks=int(rng.integers(0, 10**5)),
            bps_final=int(rng.integers(0, 10**6)),
            noc=int(rng.integers(0, 500)),
            nop=int(rng.integers(0, 50)),
            ticks_per_second=10,
        )
        assert parse_log(write_log(record)) == record


def test_criterion_09_reference_text_parses(original_log_text):
    rec = parse_log(original_log_text)
    assert len(rec.lost) == 67
    assert rec.noc == 71
    assert rec.nop == 0
    # required found count is 135; the reference text itself carries 133
    # values (14 rows of 9 plus a final 7), and its printed mean and var
    # are exact for those 133, so the 135 is a miscount in the requirement.
    # Asserted as stated rather than patched to match the text.
    assert len(rec.found) == 135


def test_criterion_10_determinism_and_replay(tmp_path, capsys):
    config = SessionConfig()
    first = run_session(config, CapacityModel(), seed=12)
    again = run_session(config, TracePlayer(first.trace), seed=12)
    assert write_log(again.result.record) == write_log(first.result.record)

    run_args = ["run", "--model", "perfect",
                "--duration-ticks", "80", "--seed", "6", "--quiet", "--out", str(tmp_path)]
    assert main(run_args) == EXIT_OK
    trace_path = tmp_path / "run_seed6.trace"
    assert main(["replay", str(trace_path)]) == EXIT_OK

    lines = trace_path.read_text().splitlines()
    t, x, y, _ = lines[20].split()
    lines[20] = f"{t} {x} {y} 0"  # one released-button sample
    trace_path.write_text("\n".join(lines) + "\n")
    capsys.readouterr()
    assert main(["replay", str(trace_path)]) == EXIT_MISMATCH
    assert "replay mismatch" in capsys.readouterr().err


def test_criterion_11_capacity_hypothesis():
    config = SessionConfig()
    less = 0
    for seed in range(100):
        record, _ = run_headless(config, CapacityModel(), seed)
        if record.relation is Relation.LESS:
            less += 1
    assert less >= 90, f"mean(lost2found) < mean(found2lost) held in only {less}/100 runs"


def test_criterion_12_meter_exactness():
    config = SessionConfig(window_w=48, window_h=32)
    rng = np.random.default_rng(3)
    a = rng.integers(0, 6, size=(32, 48)).astype(np.uint8)
    meter = new_meter(config)
    meter, _ = measure(meter, Bitmap(width=48, height=32, data=a), config)

    b = a.copy()
    flips = {(int(rng.integers(0, 32)), int(rng.integers(0, 48))) for _ in range(60)}
    for y, x in flips:
        b[y, x] = (b[y, x] + 1) % 6

    k = 0  # per-pixel oracle, no vector tricks
    for y in range(32):
        for x in range(48):
            if a[y, x] != b[y, x]:
                k += 1
    assert k == len(flips)

    meter, bps = measure(meter, Bitmap(width=48, height=32, data=b), config)
    assert bps == 10 * k

    _, bps_same = measure(meter, Bitmap(width=48, height=32, data=b.copy()), config)
    assert bps_same == 0
