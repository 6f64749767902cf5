"""HTTP bridge between the TCP control plane and browser clients.

Holds no variable state of its own: reads and writes are proxied through the
directory (resolve/list) and the variables' own ports, so restarting the
gateway never changes a value. Episode/descent/warning telemetry streams out
as server-sent events with a bounded replay window.
"""

from __future__ import annotations

import json
import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import client
from .errors import PortUnavailableError
from .protocol import ProtocolError, WireResponse
from .telemetry import TelemetryBus

HEARTBEAT_SECONDS = 15.0

_STATUS_FOR_ERROR = {
    "unknown_tag": 404,
    "type_mismatch": 422,
    "invalid_value": 422,
    "duplicate_tag": 409,
    "parse_error": 400,
    "unsupported_op": 400,
}

_PACKAGED_ASSETS = Path(__file__).parent / "assets"


def _raw_string(value) -> str:
    """Render a JSON scalar the way the tune CLI would type it."""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


class _GatewayHandler(BaseHTTPRequestHandler):
    server: "GatewayServer"
    protocol_version = "HTTP/1.1"

    # ----- plumbing -------------------------------------------------------
    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass  # keep the demo's stdout/stderr clean

    def _send_json(self, status: int, payload) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_wire_error(self, resp: WireResponse) -> None:
        status = _STATUS_FOR_ERROR.get(resp.error, 500)
        self._send_json(status, {"error": resp.error})

    def _read_body(self) -> dict | None:
        try:
            length = int(self.headers.get("Content-Length", "0"))
            payload = json.loads(self.rfile.read(length).decode("utf-8"))
        except (ValueError, json.JSONDecodeError):
            return None
        return payload if isinstance(payload, dict) else None

    # ----- routes ---------------------------------------------------------
    def do_GET(self) -> None:
        path = self.path.split("?", 1)[0]
        if path == "/api/vars":
            self._list_vars()
        elif path.startswith("/api/vars/"):
            self._get_var(path.removeprefix("/api/vars/"))
        elif path == "/api/metrics/stream":
            self._stream_metrics()
        elif path == "/" or path.startswith("/assets/"):
            self._static(path)
        else:
            self._send_json(404, {"error": "not_found"})

    def do_PUT(self) -> None:
        path = self.path.split("?", 1)[0]
        if not path.startswith("/api/vars/"):
            self._send_json(404, {"error": "not_found"})
            return
        tag = path.removeprefix("/api/vars/")
        body = self._read_body()
        if body is None or "value" not in body or isinstance(body["value"], (list, dict)):
            self._send_json(400, {"error": "body must be a JSON object with a scalar value"})
            return
        raw = _raw_string(body["value"])
        try:
            resp = client.remote_set(self.server.dict_port, tag, raw)
        except (OSError, ProtocolError) as exc:
            self._send_json(502, {"error": f"control plane unreachable: {exc}"})
            return
        if resp.ok:
            self._send_json(200, {"tag": tag, "value": body["value"]})
        else:
            self._send_wire_error(resp)

    def do_POST(self) -> None:
        path = self.path.split("?", 1)[0]
        if not path.startswith("/api/triggers/"):
            self._send_json(404, {"error": "not_found"})
            return
        tag = path.removeprefix("/api/triggers/")
        try:
            resp = client.fire_trigger(self.server.dict_port, tag)
        except (OSError, ProtocolError) as exc:
            self._send_json(502, {"error": f"control plane unreachable: {exc}"})
            return
        if resp.ok:
            self._send_json(200, {"tag": tag, "fired": True})
        else:
            self._send_wire_error(resp)

    # ----- endpoint bodies -------------------------------------------------
    def _list_vars(self) -> None:
        try:
            resp = client.remote_list(self.server.dict_port)
        except (OSError, ProtocolError) as exc:
            self._send_json(502, {"error": f"control plane unreachable: {exc}"})
            return
        self._send_json(200, resp.vars or [])

    def _get_var(self, tag: str) -> None:
        try:
            resp = client.remote_get(self.server.dict_port, tag)
        except (OSError, ProtocolError) as exc:
            self._send_json(502, {"error": f"control plane unreachable: {exc}"})
            return
        if resp.ok:
            self._send_json(200, {"tag": tag, "value": resp.value})
        else:
            self._send_wire_error(resp)

    def _stream_metrics(self) -> None:
        self.send_response(200)
        self.send_header("Content-Type", "text/event-stream")
        self.send_header("Cache-Control", "no-cache")
        self.send_header("Connection", "close")
        self.end_headers()
        sub = self.server.bus.subscribe()
        try:
            while not self.server.stopping.is_set():
                event = sub.get(timeout=HEARTBEAT_SECONDS)
                if sub.closed:
                    break  # this client fell too far behind: cut it off
                if event is None:
                    self.wfile.write(b": heartbeat\n\n")
                else:
                    frame = f"data: {event.to_json()}\n\n"
                    self.wfile.write(frame.encode("utf-8"))
                self.wfile.flush()
        except (BrokenPipeError, ConnectionResetError, OSError):
            pass
        finally:
            sub.close()

    def _static(self, path: str) -> None:
        # assets_dir is the web root: /index.html at the top, subresources
        # under /assets/ exactly as they sit on disk.
        root = self.server.assets_dir
        relative = "index.html" if path == "/" else path.lstrip("/")
        target = (root / relative).resolve()
        if not str(target).startswith(str(root.resolve())) or not target.is_file():
            self._send_json(404, {"error": "not_found"})
            return
        content_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


class GatewayServer(ThreadingHTTPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address, dict_port: int, bus: TelemetryBus, assets_dir: Path):
        super().__init__(address, _GatewayHandler)
        self.dict_port = dict_port
        self.bus = bus
        self.assets_dir = assets_dir
        self.stopping = threading.Event()


class Gateway:
    """Runs the HTTP server on its own thread inside the demo process."""

    def __init__(
        self,
        dict_port: int,
        bus: TelemetryBus | None = None,
        http_port: int = 8080,
        bind: str = "127.0.0.1",
        assets_dir: str | Path | None = None,
    ) -> None:
        self.bus = bus if bus is not None else TelemetryBus()
        assets = Path(assets_dir) if assets_dir else _PACKAGED_ASSETS
        try:
            self._server = GatewayServer((bind, http_port), dict_port, self.bus, assets)
        except OSError as exc:
            raise PortUnavailableError(f"cannot bind {bind}:{http_port}: {exc}") from exc
        self._thread = threading.Thread(
            target=lambda: self._server.serve_forever(poll_interval=0.05),
            name="livetune-gateway",
            daemon=True,
        )

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    def start(self) -> "Gateway":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.stopping.set()
        self._server.shutdown()
        self._server.server_close()
        self._thread.join(timeout=5)
