"""Adaptive pursuit-tracking benchmark with a changed-pixel complexity meter.

A hero box wanders among random-walking distractor boxes; the player keeps
the pointer on it with the button held. Losing and re-finding the hero
drives a staircase that adds or removes boxes and speed, and the complexity
of the display at each transition is logged in bits per second.
"""

from __future__ import annotations

from brainb.config import ConfigError, SessionConfig
from brainb.engine import (
    BoxEntity,
    ComplexityCommand,
    EventLedger,
    PixelPoint,
    TrackerState,
    TrackState,
    WorldState,
)
from brainb.logkit import LogParseError, LogRecord, Relation, parse_log, write_log
from brainb.session import PointerSample, Session, SessionResult, StateSnapshot
from brainb.usersim import (
    AbsentModel,
    CapacityModel,
    LaggedNoisyModel,
    PerfectModel,
    TracePlayer,
    run_headless,
    run_session,
)

__version__ = "0.1.0"

__all__ = [
    "AbsentModel",
    "BoxEntity",
    "CapacityModel",
    "ComplexityCommand",
    "ConfigError",
    "EventLedger",
    "LaggedNoisyModel",
    "LogParseError",
    "LogRecord",
    "PerfectModel",
    "PixelPoint",
    "PointerSample",
    "Relation",
    "Session",
    "SessionConfig",
    "SessionResult",
    "StateSnapshot",
    "TracePlayer",
    "TrackState",
    "TrackerState",
    "WorldState",
    "parse_log",
    "run_headless",
    "run_session",
    "write_log",
    "__version__",
]
