"""Live session server: one client at a time, wall-clock ticks, JSON messages.

Message flow: on connect the server announces itself (hello), the client
answers with start (optionally carrying config overrides), then the server
drives 100 ms ticks, pushing one snapshot per tick and applying the latest
pointer sample it has seen. pause toggles the clock, save writes the data
measured so far without ending the run. At the end the result message
carries the full log text; the same files a headless run would write land
in the output directory.
"""

from __future__ import annotations

import json
import logging
import queue
import socket
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from brainb.config import ConfigError, SessionConfig, with_overrides
from brainb.session import (
    PointerSample,
    Session,
    finalize,
    new_session,
    run_tick,
    snapshot,
    toggle_pause,
)
from brainb.usersim import session_rngs
from brainb import storage, ws

log = logging.getLogger(__name__)


def _snapshot_message(session: Session) -> str:
    snap = snapshot(session)
    boxes = [
        {
            "id": b.id,
            "x": b.center.x,
            "y": b.center.y,
            "hw": b.half_width,
            "hh": b.half_height,
            "color": b.color_index,
            "hero": b.is_hero,
        }
        for b in snap.boxes
    ]
    return json.dumps(
        {
            "type": "snapshot",
            "tick": snap.tick,
            "boxes": boxes,
            "bps": snap.bps,
            "noc": snap.noc,
            "state": snap.state.value,
            "clock": snap.clock,
            "paused": snap.paused,
        },
        separators=(",", ":"),
    )


def _hello_message(config: SessionConfig) -> str:
    return json.dumps(
        {
            "type": "hello",
            "width": config.width,
            "height": config.height,
            "tick_ms": config.tick_ms,
            "duration_ticks": config.duration_ticks,
            "palette": list(config.palette),
        },
        separators=(",", ":"),
    )


@dataclass
class _Inbox:
    """Latest pointer plus queued control commands from the reader thread."""

    pointer: PointerSample | None = None
    commands: "queue.Queue[str]" = None  # type: ignore[assignment]
    closed: bool = False

    def __post_init__(self) -> None:
        self.commands = queue.Queue()


class SessionServer:
    """Accepts one client at a time on a local TCP port.

    turbo drops the inter-tick sleep (states are tick-counted, so this only
    compresses wall time; automated clients use it).
    """

    def __init__(
        self,
        config: SessionConfig,
        host: str = "127.0.0.1",
        port: int = 8787,
        out_dir: str | Path = ".",
        *,
        turbo: bool = False,
    ) -> None:
        self.config = config
        self.out_dir = Path(out_dir)
        self.turbo = turbo
        self._listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._listener.bind((host, port))
        self._listener.listen(1)
        self.host, self.port = self._listener.getsockname()[:2]
        self._stop = threading.Event()

    def shutdown(self) -> None:
        self._stop.set()
        try:
            self._listener.close()
        except OSError:
            pass

    def serve_forever(self, max_sessions: int | None = None) -> int:
        """Accept clients until shut down; returns how many sessions ran."""
        served = 0
        while not self._stop.is_set():
            if max_sessions is not None and served >= max_sessions:
                break
            try:
                conn, addr = self._listener.accept()
            except OSError:
                break
            log.info("client connected from %s", addr)
            try:
                sock = ws.server_handshake(conn)
            except ws.WebSocketError as exc:
                log.warning("handshake failed: %s", exc)
                conn.close()
                continue
            try:
                if self._run_one_client(sock):
                    served += 1
            except (ws.WebSocketError, OSError) as exc:
                log.warning("client dropped: %s", exc)
            finally:
                sock.close()
        self.shutdown()
        return served

    def _reader(self, sock: ws.WebSocket, inbox: _Inbox) -> None:
        while True:
            text = sock.recv_text()
            if text is None:
                inbox.closed = True
                inbox.commands.put("__closed__")
                return
            try:
                msg = json.loads(text)
                kind = msg.get("type")
            except (ValueError, AttributeError):
                log.warning("unparseable message: %.80s", text)
                continue
            if kind == "pointer":
                try:
                    inbox.pointer = PointerSample(
                        x=int(msg["x"]), y=int(msg["y"]), button_down=bool(msg["down"])
                    )
                except (KeyError, TypeError, ValueError):
                    log.warning("malformed pointer message: %.80s", text)
            elif kind in ("pause", "save", "start"):
                inbox.commands.put(text)
            else:
                log.warning("ignoring unknown message type: %r", kind)

    def _wait_for_start(self, inbox: _Inbox) -> SessionConfig | None:
        while True:
            raw = inbox.commands.get()
            if raw == "__closed__":
                return None
            msg = json.loads(raw)
            if msg.get("type") != "start":
                log.warning("ignoring %r before start", msg.get("type"))
                continue
            overrides = msg.get("config_overrides") or {}
            if not isinstance(overrides, dict):
                raise ConfigError("config_overrides must be an object")
            return with_overrides(self.config, {str(k): v for k, v in overrides.items()})

    def _run_one_client(self, sock: ws.WebSocket) -> bool:
        sock.send_text(_hello_message(self.config))
        inbox = _Inbox()
        reader = threading.Thread(target=self._reader, args=(sock, inbox), daemon=True)
        reader.start()

        try:
            config = self._wait_for_start(inbox)
        except ConfigError as exc:
            log.warning("bad start message: %s", exc)
            return False
        if config is None:
            return False

        world_rng, _ = session_rngs(config.rng_seed)
        session = new_session(config, world_rng)
        trace: list[PointerSample] = []
        stem = storage.run_stem(config.rng_seed, prefix="live")
        tick_s = config.tick_ms / 1000.0
        next_deadline = time.monotonic()

        while not session.finished and not inbox.closed and not self._stop.is_set():
            next_deadline += tick_s
            self._drain_commands(session, trace, stem, inbox)
            if inbox.closed:
                break
            if not session.paused:
                sample = self._sample_for_tick(inbox, session.elapsed_ticks)
                run_tick(session, sample, world_rng)
                trace.append(sample)
            try:
                sock.send_text(_snapshot_message(session))
            except (ws.WebSocketError, OSError):
                return False
            if not self.turbo:
                delay = next_deadline - time.monotonic()
                if delay > 0:
                    time.sleep(delay)
                else:
                    next_deadline = time.monotonic()

        if inbox.closed and not session.finished:
            log.info("client left at tick %d; discarding session", session.elapsed_ticks)
            return False

        result = finalize(session)
        paths = storage.write_run(self.out_dir, stem, config, result, trace)
        log.info("session saved: %s", paths.log)
        try:
            sock.send_text(
                json.dumps(
                    {
                        "type": "result",
                        "kilobytes": result.record.kilobytes,
                        "log": paths.log_text,
                    },
                    separators=(",", ":"),
                )
            )
        except (ws.WebSocketError, OSError):
            pass
        return True

    def _sample_for_tick(self, inbox: _Inbox, tick: int) -> PointerSample:
        latest = inbox.pointer
        if latest is None:
            # no pointer seen yet: button treated as up, which the tracker
            # counts as far
            return PointerSample(x=0, y=0, button_down=False, tick=tick)
        return PointerSample(x=latest.x, y=latest.y, button_down=latest.button_down, tick=tick)

    def _drain_commands(
        self, session: Session, trace: list[PointerSample], stem: str, inbox: _Inbox
    ) -> None:
        while True:
            try:
                raw = inbox.commands.get_nowait()
            except queue.Empty:
                return
            if raw == "__closed__":
                inbox.closed = True
                return
            msg = json.loads(raw)
            kind = msg.get("type")
            if kind == "pause":
                toggle_pause(session)
            elif kind == "save":
                result = finalize(session, force=True)
                save_stem = f"{stem}_save_t{session.elapsed_ticks}"
                paths = storage.write_run(self.out_dir, save_stem, session.config, result, trace)
                log.info("mid-run save: %s", paths.log)
            elif kind == "start":
                log.warning("ignoring start during a running session")


def serve(
    config: SessionConfig,
    host: str = "127.0.0.1",
    port: int = 8787,
    out_dir: str | Path = ".",
    *,
    turbo: bool = False,
    max_sessions: int | None = None,
) -> int:
    server = SessionServer(config, host, port, out_dir, turbo=turbo)
    log.info("listening on ws://%s:%d/", server.host, server.port)
    print(f"listening on ws://{server.host}:{server.port}/", flush=True)
    try:
        return server.serve_forever(max_sessions)
    finally:
        server.shutdown()
