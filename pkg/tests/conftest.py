from __future__ import annotations

from pathlib import Path

import pytest

from brainb.config import SessionConfig
from brainb.engine import EventLedger
from brainb.logkit import LogRecord, build_record

import reference_values as rv

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def original_log_text() -> str:
    return (DATA_DIR / "original_603.log").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def reference_ledger() -> EventLedger:
    return EventLedger(
        lost=list(rv.LOST),
        found=list(rv.FOUND),
        lost2found=list(rv.LOST2FOUND),
        found2lost=list(rv.FOUND2LOST),
    )


@pytest.fixture(scope="session")
def reference_record(reference_ledger: EventLedger) -> LogRecord:
    """The reference dataset assembled through the writer-side path."""
    return build_record(
        reference_ledger,
        time_ticks=rv.TIME_TICKS,
        bps_final=rv.BPS_FINAL,
        noc=rv.NOC,
        nop=rv.NOP,
        ticks_per_second=10,
    )


@pytest.fixture()
def small_config() -> SessionConfig:
    """A config sized for fast unit runs, not for realistic sessions."""
    return SessionConfig(
        width=320,
        height=200,
        window_w=64,
        window_h=64,
        duration_ticks=200,
        initial_noc=6,
        noc_min=2,
        noc_max=24,
        box_half_min=4,
        box_half_max=12,
        hero_half_w=6,
        hero_half_h=4,
    )
