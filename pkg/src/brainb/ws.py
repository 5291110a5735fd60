"""Minimal WebSocket framing over plain sockets.

Implements just what the live-session channel needs: the HTTP upgrade
handshake, text frames with client-side masking, ping/pong and close. Big
frames (16-bit and 64-bit lengths) are supported; extensions and
subprotocols are not.
"""

from __future__ import annotations

import base64
import hashlib
import logging
import os
import socket
import struct
import threading

log = logging.getLogger(__name__)

_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"

_OP_CONT = 0x0
_OP_TEXT = 0x1
_OP_BINARY = 0x2
_OP_CLOSE = 0x8
_OP_PING = 0x9
_OP_PONG = 0xA


class WebSocketError(ConnectionError):
    pass


def _accept_value(key: str) -> str:
    digest = hashlib.sha1((key + _GUID).encode("ascii")).digest()
    return base64.b64encode(digest).decode("ascii")


def _read_exact(sock: socket.socket, n: int) -> bytes:
    chunks = bytearray()
    while len(chunks) < n:
        part = sock.recv(n - len(chunks))
        if not part:
            raise WebSocketError("connection closed mid-frame")
        chunks.extend(part)
    return bytes(chunks)


def _read_until_blank_line(sock: socket.socket, limit: int = 65536) -> bytes:
    data = bytearray()
    while b"\r\n\r\n" not in data:
        if len(data) > limit:
            raise WebSocketError("oversized handshake")
        part = sock.recv(4096)
        if not part:
            raise WebSocketError("connection closed during handshake")
        data.extend(part)
    return bytes(data)


def _apply_mask(payload: bytes, key: bytes) -> bytes:
    reps = len(payload) // 4 + 1
    return bytes(a ^ b for a, b in zip(payload, (key * reps)[: len(payload)]))


class WebSocket:
    """One framed, full-duplex connection. recv from one thread, send from
    any (sends are serialized by a lock)."""

    def __init__(
        self, sock: socket.socket, *, client_side: bool, initial: bytes = b""
    ) -> None:
        self._sock = sock
        self._client_side = client_side
        self._send_lock = threading.Lock()
        self._closed = False
        # frame bytes that arrived in the same packet as the handshake tail
        self._pending = bytearray(initial)

    def _recv_exact(self, n: int) -> bytes:
        if self._pending:
            take = bytes(self._pending[:n])
            del self._pending[: len(take)]
            if len(take) == n:
                return take
            return take + _read_exact(self._sock, n - len(take))
        return _read_exact(self._sock, n)

    def _send_frame(self, opcode: int, payload: bytes) -> None:
        head = bytearray([0x80 | opcode])
        n = len(payload)
        mask_bit = 0x80 if self._client_side else 0x00
        if n < 126:
            head.append(mask_bit | n)
        elif n < 1 << 16:
            head.append(mask_bit | 126)
            head.extend(struct.pack(">H", n))
        else:
            head.append(mask_bit | 127)
            head.extend(struct.pack(">Q", n))
        if self._client_side:
            key = os.urandom(4)
            head.extend(key)
            payload = _apply_mask(payload, key)
        with self._send_lock:
            if self._closed:
                raise WebSocketError("send on closed websocket")
            self._sock.sendall(bytes(head) + payload)

    def _read_frame(self) -> tuple[int, bool, bytes]:
        b0, b1 = self._recv_exact(2)
        fin = bool(b0 & 0x80)
        opcode = b0 & 0x0F
        masked = bool(b1 & 0x80)
        n = b1 & 0x7F
        if n == 126:
            (n,) = struct.unpack(">H", self._recv_exact(2))
        elif n == 127:
            (n,) = struct.unpack(">Q", self._recv_exact(8))
        key = self._recv_exact(4) if masked else b""
        payload = self._recv_exact(n) if n else b""
        if masked:
            payload = _apply_mask(payload, key)
        return opcode, fin, payload

    def send_text(self, text: str) -> None:
        self._send_frame(_OP_TEXT, text.encode("utf-8"))

    def recv_text(self) -> str | None:
        """Next text message, or None once the peer closes."""
        message = bytearray()
        in_fragments = False
        while True:
            try:
                opcode, fin, payload = self._read_frame()
            except (WebSocketError, OSError):
                return None
            if opcode == _OP_CLOSE:
                self.close()
                return None
            if opcode == _OP_PING:
                try:
                    self._send_frame(_OP_PONG, payload)
                except (WebSocketError, OSError):
                    return None
                continue
            if opcode == _OP_PONG:
                continue
            if opcode == _OP_BINARY:
                raise WebSocketError("binary frames are not part of the protocol")
            if opcode == _OP_TEXT and not in_fragments:
                message.extend(payload)
                if fin:
                    return message.decode("utf-8")
                in_fragments = True
            elif opcode == _OP_CONT and in_fragments:
                message.extend(payload)
                if fin:
                    return message.decode("utf-8")
            else:
                raise WebSocketError(f"unexpected opcode {opcode}")

    def close(self, code: int = 1000) -> None:
        with self._send_lock:
            if self._closed:
                return
            self._closed = True
            frame = bytearray([0x80 | _OP_CLOSE])
            payload = struct.pack(">H", code)
            if self._client_side:
                key = os.urandom(4)
                frame.append(0x80 | len(payload))
                frame.extend(key)
                frame.extend(_apply_mask(payload, key))
            else:
                frame.append(len(payload))
                frame.extend(payload)
            try:
                self._sock.sendall(bytes(frame))
            except OSError:
                pass
        try:
            self._sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self._sock.close()


def server_handshake(sock: socket.socket) -> WebSocket:
    """Answer one HTTP upgrade request and return the framed connection."""
    raw = _read_until_blank_line(sock)
    head_bytes, extra = raw.split(b"\r\n\r\n", 1)
    head = head_bytes.decode("latin-1")
    lines = head.split("\r\n")
    request = lines[0]
    headers = {}
    for line in lines[1:]:
        if ":" in line:
            name, value = line.split(":", 1)
            headers[name.strip().lower()] = value.strip()
    if not request.startswith("GET "):
        raise WebSocketError(f"not a GET request: {request!r}")
    if "websocket" not in headers.get("upgrade", "").lower():
        raise WebSocketError("missing Upgrade: websocket")
    key = headers.get("sec-websocket-key")
    if not key:
        raise WebSocketError("missing Sec-WebSocket-Key")
    response = (
        "HTTP/1.1 101 Switching Protocols\r\n"
        "Upgrade: websocket\r\n"
        "Connection: Upgrade\r\n"
        f"Sec-WebSocket-Accept: {_accept_value(key)}\r\n"
        "\r\n"
    )
    sock.sendall(response.encode("ascii"))
    return WebSocket(sock, client_side=False, initial=extra)


def connect(host: str, port: int, path: str = "/", timeout: float | None = 10.0) -> WebSocket:
    """Open a client connection (used by tests and tooling)."""
    sock = socket.create_connection((host, port), timeout=timeout)
    sock.settimeout(timeout)
    key = base64.b64encode(os.urandom(16)).decode("ascii")
    request = (
        f"GET {path} HTTP/1.1\r\n"
        f"Host: {host}:{port}\r\n"
        "Upgrade: websocket\r\n"
        "Connection: Upgrade\r\n"
        f"Sec-WebSocket-Key: {key}\r\n"
        "Sec-WebSocket-Version: 13\r\n"
        "\r\n"
    )
    sock.sendall(request.encode("ascii"))
    raw = _read_until_blank_line(sock)
    head_bytes, extra = raw.split(b"\r\n\r\n", 1)
    head = head_bytes.decode("latin-1")
    status = head.split("\r\n", 1)[0]
    if " 101 " not in status + " ":
        sock.close()
        raise WebSocketError(f"handshake rejected: {status!r}")
    for line in head.split("\r\n")[1:]:
        if line.lower().startswith("sec-websocket-accept:"):
            got = line.split(":", 1)[1].strip()
            if got != _accept_value(key):
                sock.close()
                raise WebSocketError("bad Sec-WebSocket-Accept value")
            break
    else:
        sock.close()
        raise WebSocketError("missing Sec-WebSocket-Accept header")
    sock.settimeout(None)
    return WebSocket(sock, client_side=True, initial=extra)
