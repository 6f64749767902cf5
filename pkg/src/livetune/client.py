"""Client-side operations against a running control plane.

The tune flow is two-step: resolve the tag against the directory port, then
talk straight to the variable's own port. Raw values are parsed according to
the resolved type *before* any set is sent, so a bad value never reaches the
variable.
"""

from __future__ import annotations

import re
import socket

from .core import Scalar
from .directory import TRIGGER_TYPE
from .errors import TypeMismatchError, UnknownTagError
from .protocol import (
    ProtocolError,
    WireMessage,
    WireResponse,
    decode_response,
    encode_message,
    error_response,
)

_INT_RE = re.compile(r"^[+-]?[0-9]+$")
_FLOAT_RE = re.compile(r"^[+-]?([0-9]+\.?[0-9]*|\.[0-9]+)([eE][+-]?[0-9]+)?$")


def request(
    port: int,
    msg: WireMessage,
    timeout: float = 5.0,
    host: str = "127.0.0.1",
) -> WireResponse:
    """Send one request line, read one response line, close."""
    with socket.create_connection((host, port), timeout=timeout) as sock:
        sock.settimeout(timeout)
        stream = sock.makefile("rwb")
        stream.write(encode_message(msg).encode("utf-8"))
        stream.flush()
        line = stream.readline(1 << 20)
    if not line:
        raise ProtocolError("server closed connection without a response")
    return decode_response(line)


def parse_raw(raw: str, type_name: str) -> Scalar:
    """Parse a raw string per the resolved type; strict, no silent coercion.

    int: decimal digits; float: decimal or scientific notation; bool: exactly
    "true"/"false"; str: verbatim. Raises :class:`TypeMismatchError`.
    """
    if type_name == "int":
        if not _INT_RE.match(raw):
            raise TypeMismatchError(f"{raw!r} is not an integer")
        return int(raw)
    if type_name == "float":
        if not _FLOAT_RE.match(raw):
            raise TypeMismatchError(f"{raw!r} is not a float")
        return float(raw)
    if type_name == "bool":
        if raw == "true":
            return True
        if raw == "false":
            return False
        raise TypeMismatchError(f"{raw!r} is not exactly 'true' or 'false'")
    if type_name == "str":
        return raw
    raise TypeMismatchError(f"cannot parse a value for type {type_name!r}")


def remote_resolve(dict_port: int, tag: str, host: str = "127.0.0.1") -> WireResponse:
    return request(dict_port, WireMessage(op="resolve", tag=tag), host=host)


def remote_list(dict_port: int, host: str = "127.0.0.1") -> WireResponse:
    return request(dict_port, WireMessage(op="list"), host=host)


def remote_get(dict_port: int, tag: str, host: str = "127.0.0.1") -> WireResponse:
    """Resolve a tag, then read the variable's current value from its port."""
    resolved = remote_resolve(dict_port, tag, host=host)
    if not resolved.ok:
        return resolved
    return request(resolved.port, WireMessage(op="get"), host=host)


def remote_set(
    dict_port: int,
    tag: str,
    raw_value: str,
    host: str = "127.0.0.1",
) -> WireResponse:
    """Resolve, parse the raw value against the resolved type, then set.

    Returns the variable's response on success; an ``unknown_tag`` response
    if resolution failed; a ``type_mismatch`` response (no set attempted) if
    the raw value does not parse as the resolved type. Connection errors to
    a stale entry or dead process propagate as OSError.
    """
    resolved = remote_resolve(dict_port, tag, host=host)
    if not resolved.ok:
        return resolved
    try:
        value = parse_raw(raw_value, resolved.type)
    except TypeMismatchError:
        return error_response("type_mismatch")
    return request(resolved.port, WireMessage(op="set", value=value), host=host)


def fire_trigger(dict_port: int, tag: str, host: str = "127.0.0.1") -> WireResponse:
    """Resolve a trigger tag and arm it."""
    resolved = remote_resolve(dict_port, tag, host=host)
    if not resolved.ok:
        return resolved
    if resolved.type != TRIGGER_TYPE:
        return error_response("type_mismatch")
    return request(resolved.port, WireMessage(op="set", value=True), host=host)


def wait_until_reachable(dict_port: int, timeout: float = 5.0) -> bool:
    """Poll the directory with pings until it answers or the timeout passes."""
    import time

    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        try:
            if request(dict_port, WireMessage(op="ping"), timeout=0.5).ok:
                return True
        except (OSError, ProtocolError):
            time.sleep(0.02)
    return False


__all__ = [
    "request",
    "parse_raw",
    "remote_resolve",
    "remote_list",
    "remote_get",
    "remote_set",
    "fire_trigger",
    "wait_until_reachable",
    "UnknownTagError",
]
