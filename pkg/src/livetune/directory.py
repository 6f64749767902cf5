"""Per-variable TCP listeners and the singleton tag directory.

The process keeps one registry mapping tags to (port, type, handle). Each
live variable gets its own listener thread serving one connection at a time
(preserving the single-writer contract on the handle); the directory serves
``list``/``resolve`` for external clients and guards ``register``/
``deregister`` behind a startup nonce so outside processes cannot forge
entries. Everything binds loopback-only unless explicitly opened.
"""

from __future__ import annotations

import os
import secrets
import socketserver
import sys
import threading
from dataclasses import dataclass

from .core import LiveTrigger, LiveVar, Scalar
from .errors import (
    AlreadyRunningError,
    DuplicateTagError,
    InvalidValueError,
    PortUnavailableError,
    TypeMismatchError,
    UnknownTagError,
)
from .protocol import (
    ProtocolError,
    UnsupportedOpError,
    WireMessage,
    WireResponse,
    decode_message,
    encode_response,
    error_response,
)

TRIGGER_TYPE = "trigger"
PORT_ENV_VAR = "LIVETUNE_PORT"
DICT_PORT_LOG_PREFIX = "LIVETUNE_DICT_PORT="

_REQUEST_TIMEOUT = 10.0


@dataclass(frozen=True)
class DirectoryEntry:
    tag: str
    port: int
    type: str


class _Record:
    """Registry row: the wire-facing entry plus process-local attachments."""

    def __init__(
        self,
        entry: DirectoryEntry,
        handle: LiveVar | LiveTrigger | None = None,
        server: socketserver.TCPServer | None = None,
        thread: threading.Thread | None = None,
    ) -> None:
        self.entry = entry
        self.handle = handle
        self.server = server
        self.thread = thread


_lock = threading.RLock()
_records: dict[str, _Record] = {}
_directory: "Directory | None" = None


class _SequentialServer(socketserver.TCPServer):
    """Connections handled one at a time: one mutation source per handle."""

    allow_reuse_address = True


class _ConcurrentServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


def _bind_server(
    handler: type[socketserver.BaseRequestHandler],
    port: int,
    bind: str,
    threading_server: bool = False,
) -> socketserver.TCPServer:
    server_cls = _ConcurrentServer if threading_server else _SequentialServer
    try:
        return server_cls((bind, port), handler)
    except OSError as exc:
        raise PortUnavailableError(f"cannot bind {bind}:{port}: {exc}") from exc


class _LineHandler(socketserver.StreamRequestHandler):
    """One request line in, one response line out, then close."""

    timeout = _REQUEST_TIMEOUT

    def handle(self) -> None:
        try:
            line = self.rfile.readline(65536)
        except (TimeoutError, OSError):
            return
        if not line:
            return
        try:
            msg = decode_message(line)
        except ProtocolError:
            self._respond(error_response("parse_error"))
            return
        except UnsupportedOpError:
            self._respond(error_response("unsupported_op"))
            return
        self._respond(self.dispatch(msg))

    def _respond(self, resp: WireResponse) -> None:
        try:
            self.wfile.write(encode_response(resp).encode("utf-8"))
        except OSError:
            pass

    def dispatch(self, msg: WireMessage) -> WireResponse:
        raise NotImplementedError


class _VarHandler(_LineHandler):
    target: LiveVar  # set on the generated subclass

    def dispatch(self, msg: WireMessage) -> WireResponse:
        var = self.target
        if msg.op == "ping":
            return WireResponse(ok=True)
        if msg.op == "get":
            return WireResponse(ok=True, value=var.current(), type=var.kind.value)
        if msg.op == "set":
            try:
                var.set_value(msg.value)
            except TypeMismatchError:
                return error_response("type_mismatch")
            except InvalidValueError:
                return error_response("invalid_value")
            return WireResponse(ok=True)
        return error_response("unsupported_op")


class _TriggerHandler(_LineHandler):
    target: LiveTrigger

    def dispatch(self, msg: WireMessage) -> WireResponse:
        trigger = self.target
        if msg.op == "ping":
            return WireResponse(ok=True)
        if msg.op == "get":
            return WireResponse(ok=True, value=trigger.armed, type=TRIGGER_TYPE)
        if msg.op == "set":
            if msg.value is not True:
                return error_response("type_mismatch")
            trigger.fire()
            return WireResponse(ok=True)
        return error_response("unsupported_op")


def _start_listener(
    handler_cls: type[_LineHandler],
    handle: LiveVar | LiveTrigger,
    port: int,
    bind: str,
) -> tuple[socketserver.TCPServer, threading.Thread]:
    bound_handler = type(handler_cls.__name__, (handler_cls,), {"target": handle})
    server = _bind_server(bound_handler, port, bind)
    thread = threading.Thread(
        target=lambda: server.serve_forever(poll_interval=0.05),
        name=f"livetune-listener-{handle.tag}",
        daemon=True,
    )
    thread.start()
    return server, thread


class Directory:
    """Singleton view over the process registry, served on its own port."""

    def __init__(self, server: socketserver.TCPServer, thread: threading.Thread) -> None:
        self._server = server
        self._thread = thread
        self.nonce = secrets.token_hex(16)

    @property
    def listen_port(self) -> int:
        return self._server.server_address[1]

    def entries(self) -> list[DirectoryEntry]:
        with _lock:
            return [record.entry for record in _records.values()]

    def resolve(self, tag: str) -> DirectoryEntry:
        with _lock:
            record = _records.get(tag)
        if record is None:
            raise UnknownTagError(tag)
        return record.entry

    def register(self, entry: DirectoryEntry) -> None:
        """Insert a foreign entry (no in-process handle attached)."""
        with _lock:
            if entry.tag in _records:
                raise DuplicateTagError(entry.tag)
            _records[entry.tag] = _Record(entry)

    def deregister(self, tag: str) -> None:
        with _lock:
            record = _records.pop(tag, None)
        if record is None:
            raise UnknownTagError(tag)
        _shutdown_record(record)

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        self._thread.join(timeout=5)


class _DirectoryHandler(_LineHandler):
    directory: Directory  # set on the generated subclass

    def dispatch(self, msg: WireMessage) -> WireResponse:
        directory = self.directory
        if msg.op == "ping":
            return WireResponse(ok=True)
        if msg.op == "list":
            return WireResponse(ok=True, vars=_list_with_values())
        if msg.op == "resolve":
            try:
                entry = directory.resolve(msg.tag)
            except UnknownTagError:
                return error_response("unknown_tag")
            return WireResponse(ok=True, port=entry.port, type=entry.type)
        if msg.op == "register":
            if msg.nonce != directory.nonce:
                return error_response("unsupported_op")
            try:
                directory.register(DirectoryEntry(msg.tag, msg.port, msg.type))
            except DuplicateTagError:
                return error_response("duplicate_tag")
            return WireResponse(ok=True)
        if msg.op == "deregister":
            if msg.nonce != directory.nonce:
                return error_response("unsupported_op")
            try:
                directory.deregister(msg.tag)
            except UnknownTagError:
                return error_response("unknown_tag")
            return WireResponse(ok=True)
        return error_response("unsupported_op")


def _fetch_remote_value(entry: DirectoryEntry) -> Scalar | None:
    """Current value of a foreign entry, via one get on its port."""
    from .client import request  # local import: client depends on this module

    try:
        resp = request(entry.port, WireMessage(op="get"), timeout=2.0)
    except (OSError, ProtocolError):
        return None
    return resp.value if resp.ok else None


def _list_with_values() -> list[dict]:
    with _lock:
        records = list(_records.values())
    rows = []
    for record in records:
        handle = record.handle
        if isinstance(handle, LiveVar):
            value: Scalar | None = handle.current()
        elif isinstance(handle, LiveTrigger):
            value = handle.armed
        else:
            value = _fetch_remote_value(record.entry)
        rows.append(
            {
                "tag": record.entry.tag,
                "port": record.entry.port,
                "type": record.entry.type,
                "value": value,
            }
        )
    rows.sort(key=lambda row: row["tag"])
    return rows


def start_directory(port: int | None = None, bind: str = "127.0.0.1") -> Directory:
    """Start the singleton directory listener.

    ``port=None`` consults the LIVETUNE_PORT environment variable, and 0 (or
    unset) asks the OS for an ephemeral port. The bound port is announced on
    stderr as a single line ``LIVETUNE_DICT_PORT=<n>``.
    """
    global _directory
    with _lock:
        if _directory is not None:
            raise AlreadyRunningError("directory already running in this process")
        if port is None:
            port = int(os.environ.get(PORT_ENV_VAR, "0") or "0")
        handler = type("_BoundDirectoryHandler", (_DirectoryHandler,), {})
        server = _bind_server(handler, port, bind, threading_server=True)
        thread = threading.Thread(
            target=lambda: server.serve_forever(poll_interval=0.05),
            name="livetune-directory",
            daemon=True,
        )
        directory = Directory(server, thread)
        handler.directory = directory
        _directory = directory
    thread.start()
    print(f"{DICT_PORT_LOG_PREFIX}{directory.listen_port}", file=sys.stderr, flush=True)
    return directory


def get_directory() -> Directory | None:
    with _lock:
        return _directory


def stop_directory() -> None:
    global _directory
    with _lock:
        directory = _directory
        _directory = None
    if directory is not None:
        directory.stop()


def live_var(
    tag: str,
    initial: Scalar,
    port: int = 0,
    bind: str = "127.0.0.1",
) -> LiveVar:
    """Create a live variable: claim the tag, start its listener, register it.

    Raises :class:`DuplicateTagError` if the tag is already in use and
    :class:`InvalidValueError` for invalid initial values.
    """
    handle = LiveVar(tag, initial)
    return _install(handle, _VarHandler, handle.kind.value, port, bind)


def live_trigger(tag: str, port: int = 0, bind: str = "127.0.0.1") -> LiveTrigger:
    """Create a one-shot trigger with its own listener and directory entry."""
    handle = LiveTrigger(tag)
    return _install(handle, _TriggerHandler, TRIGGER_TYPE, port, bind)


def _install(handle, handler_cls, type_name: str, port: int, bind: str):
    with _lock:
        if handle.tag in _records:
            raise DuplicateTagError(handle.tag)
        server, thread = _start_listener(handler_cls, handle, port, bind)
        handle.port = server.server_address[1]
        entry = DirectoryEntry(handle.tag, handle.port, type_name)
        _records[handle.tag] = _Record(entry, handle, server, thread)
    return handle


def drop(tag_or_handle) -> None:
    """Remove a live variable or trigger: stop its listener, free its tag."""
    tag = tag_or_handle if isinstance(tag_or_handle, str) else tag_or_handle.tag
    with _lock:
        record = _records.pop(tag, None)
    if record is None:
        raise UnknownTagError(tag)
    _shutdown_record(record)


def _shutdown_record(record: _Record) -> None:
    if record.server is not None:
        record.server.shutdown()
        record.server.server_close()
    if record.thread is not None:
        record.thread.join(timeout=5)


def shutdown() -> None:
    """Stop every listener and the directory; clear the registry."""
    with _lock:
        records = list(_records.values())
        _records.clear()
    for record in records:
        _shutdown_record(record)
    stop_directory()
